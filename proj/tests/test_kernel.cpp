#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hwgrowth/errors.hpp"
#include "hwgrowth/kernel.hpp"

using namespace hwgrowth;
using std::numbers::pi;

namespace {

// Shared per genus so the tables are built once per process.
const KernelContext& context(int q) {
  static const std::vector<KernelContext> contexts = [] {
    std::vector<KernelContext> out;
    for (int k = 0; k <= 3; ++k) out.emplace_back(k);
    return out;
  }();
  return contexts.at(q);
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("genus_for_order") {
  CHECK(genus_for_order(0.5) == 0);
  CHECK(genus_for_order(2.7) == 2);
  CHECK(genus_for_order(3.0) == 3);
  CHECK_THROWS_AS(genus_for_order(0.0), DomainError);
  CHECK_THROWS_AS(genus_for_order(-1.0), DomainError);
  CHECK(OrderParams::for_order(1.5).q == 1);
}

TEST_CASE("kernel_eval: examples") {
  CHECK(kernel_eval(0, {0, 0}) == 0.0);
  CHECK(kernel_eval(0, {-1, 0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(kernel_eval(1, {0.5, 0}) == doctest::Approx(std::log(0.5) + 0.5).epsilon(1e-15));
  CHECK(kernel_eval(2, {1, 0}) == -kInfinity);
  CHECK_THROWS_AS(KernelContext(-1), DomainError);
}

TEST_CASE("kernel_eval: small arguments keep relative accuracy") {
  // K_q(z) = -Re z^(q+1)/(q+1) + O(|z|^(q+2)).
  for (int q = 0; q <= 3; ++q) {
    const ComplexPoint z = std::polar(1e-5, 0.3);
    const double lead = -std::pow(1e-5, q + 1) * std::cos((q + 1) * 0.3) / (q + 1);
    CHECK(close_rel(kernel_eval(q, z), lead, 2e-5));
  }
  // Continuity across the switch between the series and the logarithm.
  for (int q = 0; q <= 3; ++q) {
    for (double theta : {0.2, 1.0, 2.5}) {
      const double below = kernel_eval(q, std::polar(0.5, theta));
      const double above = kernel_eval(q, std::polar(std::nextafter(0.5, 1.0), theta));
      CHECK(std::abs(below - above) < 1e-14);
    }
  }
}

TEST_CASE("kernel_eval: conjugate symmetry and bounded by the circle max") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int q = 0; q <= 3; ++q) {
    for (int i = 0; i < 1000; ++i) {
      const ComplexPoint z(coord(rng), coord(rng));
      CHECK(kernel_eval(q, std::conj(z)) == kernel_eval(q, z));
    }
    int checked = 0;
    while (checked < 1000) {
      const ComplexPoint z(coord(rng), coord(rng));
      if (std::abs(z) > 10.0) continue;
      ++checked;
      CHECK(kernel_eval(q, z) <= kernel_max(context(q), std::abs(z)) + 1e-9);
    }
  }
}

TEST_CASE("kernel_max: examples") {
  CHECK(kernel_max(context(0), 3.0) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  for (int q = 0; q <= 3; ++q) CHECK(kernel_max(context(q), 0.0) == 0.0);
  CHECK(std::abs(kernel_max(context(1), 1.0) - 0.5) < 1e-12);
  CHECK(std::abs(kernel_max_direct(context(1), 1.0).theta - pi / 3) < 1e-6);
  CHECK_THROWS_AS(kernel_max(context(0), -1.0), DomainError);
}

TEST_CASE("kernel_max: frozen high-precision values") {
  // On |z| = r, K_q depends on c = cos(theta) only, so M_q is a maximum over
  // c in [-1, 1] whose stationary points are polynomial roots; these values
  // come from that reduction in 40-digit arithmetic.
  struct Case {
    int q;
    double r;
    double value;
  };
  const Case cases[] = {
      {1, 3.0, 3.693147180559945309},       {1, 1e4, 10009.21024036697585},
      {2, 1.0, 0.4823136665028176887},      {2, 10.0, 62.19722457733621938},
      {2, 0.01, 3.345858333221727276e-7},   {3, 0.5, 0.02119514156375555611},
      {3, 5.0, 60.55296102778655729},       {1, 1e-3, 5e-7},
  };
  for (const Case& c : cases) {
    INFO("q=" << c.q << " r=" << c.r);
    CHECK(close_rel(kernel_max_direct(context(c.q), c.r).value, c.value, 1e-13));
    CHECK(close_rel(kernel_max(context(c.q), c.r), c.value, 1e-10));
  }
}

TEST_CASE("kernel_max: q = 0 closed form and large-r asymptotics") {
  for (double r : {0.1, 1.0, 10.0, 100.0, 1e-7, 3e7}) {
    CHECK(std::abs(kernel_max(context(0), r) - std::log1p(r)) <= 1e-9 * (1 + std::log1p(r)));
  }
  for (int q = 1; q <= 3; ++q) {
    const double r = 1e4;
    const double ratio = kernel_max(context(q), r) / (std::pow(r, q) / q);
    CHECK(std::abs(ratio - 1.0) < 0.05);
  }
}

TEST_CASE("kernel_max: below the explicit majorant") {
  for (int q = 0; q <= 3; ++q) {
    for (int i = -60; i <= 60; ++i) {
      const double r = std::pow(10.0, i / 10.0);
      CHECK(kernel_max(context(q), r) <= kernel_max_bound(q, r) * (1 + 1e-12));
    }
  }
}

TEST_CASE("kernel_max: nondecreasing and convex in ln r") {
  for (int q = 0; q <= 3; ++q) {
    const double h = std::log(10.0) / 20;
    std::vector<double> m;
    for (int i = 0; i < 400; ++i) m.push_back(kernel_max(context(q), 1e-8 * std::exp(i * h)));
    int violations = 0;
    for (std::size_t i = 1; i < m.size(); ++i) violations += m[i] < m[i - 1] - 1e-8;
    for (std::size_t i = 1; i + 1 < m.size(); ++i) {
      violations += m[i + 1] - 2 * m[i] + m[i - 1] < -1e-8;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("kernel_max: table is monotone and convex at fine resolution") {
  // Four samples per table cell, including cells that fell back to direct
  // maximization.
  for (int q = 0; q <= 3; ++q) {
    const double h = std::log(10.0) / (4 * MaxTable::kPointsPerDecade);
    double a = kernel_max(context(q), 1e-6);
    double b = kernel_max(context(q), 1e-6 * std::exp(h));
    int violations = 0;
    for (int i = 2; i < 12 * 4 * MaxTable::kPointsPerDecade; ++i) {
      const double c = kernel_max(context(q), 1e-6 * std::exp(i * h));
      violations += c < b - 1e-9 * b;
      violations += c - 2 * b + a < -1e-9 * b;
      a = b;
      b = c;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("kernel_max_derivative") {
  CHECK(std::abs(kernel_max_derivative(context(0), 1.0) - 0.5) < 1e-6);
  CHECK(std::abs(kernel_max_derivative(context(0), 3.0) - 0.25) < 1e-6);
  CHECK(kernel_max_derivative(context(1), 1e-3) <= 2e-3 + 1e-6);
  CHECK(std::abs(kernel_max_derivative(context(1), 1e-3) - 1e-3) < 1e-9);
  CHECK_THROWS_AS(kernel_max_derivative(context(0), 0.0), DomainError);

  // M_1 = r^2/2 for r <= 2 and ln(r - 1) + r beyond, so M_1' is r then
  // 1/(r - 1) + 1.
  for (double r : {0.1, 0.7, 1.9, 2.5, 10.0, 300.0}) {
    const double exact = r <= 2 ? r : 1.0 / (r - 1) + 1;
    CHECK(close_rel(kernel_max_derivative(context(1), r), exact, 1e-6));
  }
}

TEST_CASE("t M_q'(t) is nondecreasing") {
  for (int q = 0; q <= 3; ++q) {
    double previous = 0.0;
    int violations = 0;
    for (int i = 0; i < 200; ++i) {
      const double t = 1e-3 * std::pow(1e7, i / 199.0);
      const double v = t * kernel_max_derivative(context(q), t);
      violations += v < previous - 1e-5 * (1 + previous);
      previous = v;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("s_constant: oracle values") {
  const double pi_over_sin = pi / std::sin(pi / 4);
  for (SForm form : {SForm::derivative, SForm::direct}) {
    CHECK(std::abs(s_constant({0.5, 0}, context(0), form) - pi) < 1e-6);
    CHECK(std::abs(s_constant({0.25, 0}, context(0), form) - pi_over_sin) < 1e-6);
    CHECK(std::abs(s_constant({0.7, 0}, context(0), form) - pi / std::sin(0.7 * pi)) < 1e-6);
  }
  // Frozen from the polynomial-root reduction of M_q, integrated in 40 digits.
  CHECK(close_rel(s_constant({1.5, 1}, context(1), SForm::direct), 4.5911742987852761, 1e-8));
  CHECK(close_rel(s_constant({1.5, 1}, context(1), SForm::derivative), 4.5911742987852761, 1e-7));
  CHECK(close_rel(s_constant({2.5, 2}, context(2), SForm::direct), 5.4829790758890343, 1e-8));
  CHECK(close_rel(s_constant({2.5, 2}, context(2), SForm::derivative), 5.4829790758890343, 1e-7));
}

TEST_CASE("s_constant: both forms agree") {
  for (double rho : {0.3, 0.7, 1.5, 2.5}) {
    const OrderParams p = OrderParams::for_order(rho);
    const double a = s_constant(p, context(p.q), SForm::derivative);
    const double b = s_constant(p, context(p.q), SForm::direct);
    INFO("rho=" << rho);
    CHECK(close_rel(a, b, 1e-7));
  }
}

TEST_CASE("s_constant: truncation and errors") {
  const SConstant s = s_constant_detailed({0.5, 0}, context(0), SForm::direct);
  CHECK(s.truncation_bound <= 1e-3 * context(0).quadrature().abs_tol);
  CHECK(s.lower_radius < 1e-6);
  CHECK(s.upper_radius > 1e6);
  CHECK_THROWS_AS(s_constant({1.0, 1}, context(1), SForm::direct), IntegerOrderError);
  CHECK_THROWS_AS(s_constant({2.0, 2}, context(2), SForm::derivative), IntegerOrderError);
  CHECK_THROWS_AS(s_constant({1.5, 0}, context(0), SForm::direct), DomainError);
  CHECK_THROWS_AS(s_constant({0.5, 0}, context(1), SForm::direct), DomainError);
}

TEST_CASE("KernelContext copies share one table") {
  const KernelContext a(2);
  const KernelContext b = a;
  CHECK(&a.table() == &b.table());
  CHECK(a.table().nodes() == 12 * MaxTable::kPointsPerDecade + 1);
  CHECK(a.table().invalid_cells() < a.table().nodes() / 20);
  CHECK(a.table().lookup(1e-7) < 0.0);
  CHECK(a.table().lookup(1e7) < 0.0);
}
