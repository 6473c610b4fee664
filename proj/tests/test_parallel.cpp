// The OpenMP paths must reproduce the serial reference bit for bit.
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hwgrowth/bounds.hpp"
#include "hwgrowth/cli.hpp"

using namespace hwgrowth;

TEST_CASE("M_q table: parallel build equals serial build") {
  for (int q : {0, 2}) {
    const KernelContext ctx(q);
    CHECK(build_max_table(ctx, Execution::parallel) == build_max_table(ctx, Execution::serial));
  }
}

TEST_CASE("maximize_on_circle: parallel scan equals serial scan") {
  auto g = [](double t) { return std::sin(3 * t) + 0.3 * std::cos(7 * t); };
  const ArgMax a = maximize_on_circle(g, {}, Execution::serial);
  const ArgMax b = maximize_on_circle(g, {}, Execution::parallel);
  CHECK(a.theta == b.theta);
  CHECK(a.value == b.value);
}

TEST_CASE("circle_max: parallel equals serial") {
  const CanonicalIntegral u(synthesize_power_zeros(1.0, 0.5, 2000, AngleRule::equidistributed()),
                            KernelContext(0));
  for (double r : {0.5, 30.0, 1e3, 1e5}) {
    CHECK(circle_max(u, r, Execution::serial) == circle_max(u, r, Execution::parallel));
  }
}

TEST_CASE("bound sweep: parallel rows equal serial rows") {
  std::mt19937_64 rng(99);
  const auto radii = GeometricGrid::spanning(0.1, 200.0, 12).radii();
  for (int q = 0; q <= 2; ++q) {
    const CanonicalIntegral u(cli::random_measure(rng, 30), KernelContext(q));
    const BoundReport a = verify_theorem_12(u, radii, Execution::serial);
    const BoundReport b = verify_theorem_12(u, radii, Execution::parallel);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].r == b.rows[i].r);
      CHECK(a.rows[i].lhs == b.rows[i].lhs);
      CHECK(a.rows[i].rhs_p1_a == b.rows[i].rhs_p1_a);
      CHECK(a.rows[i].rhs_p1_b == b.rows[i].rhs_p1_b);
      CHECK(a.rows[i].rhs_p2_a == b.rows[i].rhs_p2_a);
      CHECK(a.rows[i].rhs_p2_b == b.rows[i].rhs_p2_b);
    }
    CHECK(a.worst_violation == b.worst_violation);
    CHECK(a.identity_gap == b.identity_gap);
  }
}

TEST_CASE("type report: parallel equals serial") {
  const DiscreteMeasure m = synthesize_power_zeros(1.0, 0.5, 300);
  const GeometricGrid grid = GeometricGrid::spanning(1.0, 1e5, 16);
  const TypeBoundReport a = verify_theorem_3(m, 0.5, grid, {}, {}, Execution::serial);
  const TypeBoundReport b = verify_theorem_3(m, 0.5, grid, {}, {}, Execution::parallel);
  CHECK(a.type_u == b.type_u);
  CHECK(a.s_rho == b.s_rho);
}
