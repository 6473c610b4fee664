#include "hwgrowth/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hwgrowth/errors.hpp"

namespace hwgrowth {

CanonicalIntegral::CanonicalIntegral(DiscreteMeasure measure, KernelContext ctx)
    : measure_(std::move(measure)), ctx_(std::move(ctx)) {
  inverse_points_.reserve(measure_.size());
  masses_.reserve(measure_.size());
  for (const Atom& a : measure_.atoms()) {
    inverse_points_.push_back(1.0 / a.point);
    masses_.push_back(a.mass);
  }
}

CanonicalIntegral CanonicalIntegral::for_order(DiscreteMeasure measure, double rho,
                                               QuadratureSettings quad,
                                               CircleScanSettings scan) {
  return {std::move(measure), KernelContext(genus_for_order(rho), quad, scan)};
}

double evaluate(const CanonicalIntegral& u, ComplexPoint z) {
  const int q = u.genus();
  double sum = 0.0;
  for (std::size_t j = 0; j < u.masses_.size(); ++j) {
    const ComplexPoint zeta = z * u.inverse_points_[j];
    // z / w rounds differently from z * (1/w); an exact hit on an atom must
    // still give -infinity.
    if (zeta == ComplexPoint(1.0, 0.0) || z == u.measure_.atoms()[j].point) {
      return -kInfinity;
    }
    sum += u.masses_[j] * kernel_eval(q, zeta);
  }
  return sum;
}

double circle_max(const CanonicalIntegral& u, double r, Execution exec) {
  if (!(r >= 0.0)) throw DomainError("circle_max: need r >= 0");
  if (r == 0.0) return evaluate(u, ComplexPoint(0.0, 0.0));
  const ArgMax best = maximize_on_circle(
      [&u, r](double theta) { return evaluate(u, std::polar(r, theta)); },
      u.kernel().scan(), exec);
  return best.value;
}

double circle_mean(const CanonicalIntegral& u, double r) {
  if (!(r > 0.0)) throw DomainError("circle_mean: need r > 0");
  for (const Jump& j : u.measure().radial_jumps()) {
    if (std::abs(j.location - r) <= 1e-9 * std::max(r, j.location)) {
      throw SingularCircle("circle_mean: r = " + std::to_string(r) +
                           " lies on an atom circle");
    }
  }
  // Mean over the nodes i * 2pi / n with i = offset, offset + stride, ...
  auto node_mean = [&u, r](std::size_t n, std::size_t offset, std::size_t stride) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = offset; i < n; i += stride, ++count) {
      sum += evaluate(u, std::polar(r, 2.0 * std::numbers::pi * i / n));
    }
    return sum / count;
  };
  std::size_t n = 4096;
  double previous = node_mean(n, 0, 1);
  while (n < (std::size_t{1} << 22)) {
    n *= 2;
    // Doubling reuses the old nodes: only the odd ones are new.
    const double current = 0.5 * (previous + node_mean(n, 1, 2));
    if (std::abs(current - previous) < 1e-11 * (1.0 + std::abs(current))) return current;
    previous = current;
  }
  throw NonConvergence("circle_mean: trapezoid rule did not settle");
}

}  // namespace hwgrowth
