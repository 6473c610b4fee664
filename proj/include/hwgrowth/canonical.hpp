#pragma once

// Canonical Hadamard-Weierstrass integral of a discrete measure,
//   U(z) = sum_j mass_j * K_q(z / w_j),
// i.e. ln|P(z)| for the canonical product P of genus q over the atoms.

#include <vector>

#include "hwgrowth/kernel.hpp"
#include "hwgrowth/measures.hpp"

namespace hwgrowth {

class CanonicalIntegral {
 public:
  CanonicalIntegral(DiscreteMeasure measure, KernelContext ctx);

  /// Genus floor(rho), as required for a measure of finite type at rho.
  static CanonicalIntegral for_order(DiscreteMeasure measure, double rho,
                                     QuadratureSettings quad = {},
                                     CircleScanSettings scan = {});

  const DiscreteMeasure& measure() const noexcept { return measure_; }
  const KernelContext& kernel() const noexcept { return ctx_; }
  int genus() const noexcept { return ctx_.genus(); }

 private:
  friend double evaluate(const CanonicalIntegral& u, ComplexPoint z);
  DiscreteMeasure measure_;
  KernelContext ctx_;
  std::vector<ComplexPoint> inverse_points_;  // 1 / w_j
  std::vector<double> masses_;
};

/// U(z); -infinity exactly when z is an atom.
double evaluate(const CanonicalIntegral& u, ComplexPoint z);

/// max of U on |z| = r over the full circle (no symmetry assumed).
double circle_max(const CanonicalIntegral& u, double r,
                  Execution exec = Execution::parallel);

/// (1/2pi) * integral of U(r e^{i theta}) d theta by the periodic trapezoid
/// rule, starting at 4096 nodes and doubling until two successive values
/// differ by less than 1e-11 * (1 + |value|). Equals the averaged counting
/// function N(r). Throws SingularCircle if r is within 1e-9 (relative) of an
/// atom radius and NonConvergence if 2^22 nodes do not suffice.
double circle_mean(const CanonicalIntegral& u, double r);

}  // namespace hwgrowth
