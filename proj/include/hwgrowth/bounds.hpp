#pragma once

// Numerical checks of the growth bounds for canonical integrals:
//
//   (1) M_U(r) <= int M_q(r/t) dmu^rad(t) = int mu^rad(r/t) M_q'(t) dt
//   (2) M_U(r) <= int (r/t) M_q'(r/t) dN(t) = int N(r/t) d(t M_q'(t))
//   (3) type_rho[U] <= S(rho) type_rho[mu],  type_rho[U] <= rho S(rho) type_rho[N]
//
// where M_U(r) is the maximum of U on |z| = r. For finite discrete measures
// all four right-hand sides of (1)-(2) are equal; the report records how far
// apart the four numerical routes land.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hwgrowth/canonical.hpp"

namespace hwgrowth {

struct BoundPair {
  double a = 0.0;
  double b = 0.0;
};

/// a = sum_j mass_j M_q(r / |w_j|) (exact Stieltjes sum);
/// b = int_0^{r/r_min} mu^rad(r/t) M_q'(t) dt, by quadrature between the
/// jump points r/|w_j|.
BoundPair bound_part1(const CanonicalIntegral& u, double r);

/// a = int_{r_min}^inf (r/t) M_q'(r/t) mu^rad(t)/t dt, using dN = mu^rad(t)/t dt;
/// b = int_0^inf N(r/t) d(t M_q'(t)), integrated by parts on each panel
/// between jump points into boundary terms plus
/// int (t M_q'(t)) mu^rad(r/t)/t dt.
BoundPair bound_part2(const CanonicalIntegral& u, double r);

struct BoundRow {
  double r = 0.0;
  double lhs = 0.0;  // circle maximum of U
  double rhs_p1_a = 0.0;
  double rhs_p1_b = 0.0;
  double rhs_p2_a = 0.0;
  double rhs_p2_b = 0.0;
  double violation = 0.0;     // lhs - min(rhs columns)
  double identity_gap = 0.0;  // max pairwise relative gap of the rhs columns
  bool ok = true;             // false when a quadrature failed on this row
  std::string error;

  double min_rhs() const;
};

struct BoundTolerances {
  double violation_rel = 1e-6;  // lhs - rhs <= violation_rel * (1 + |lhs|)
  double identity_gap = 1e-5;
};

struct BoundReport {
  std::vector<BoundRow> rows;  // sorted by r
  double worst_violation = 0.0;
  double identity_gap = 0.0;
  std::optional<double> rho;
  int q = 0;
  std::string measure;
  BoundTolerances tolerances;
  bool passed = true;
};

/// Row-by-row sweep; rows are independent and run in parallel under
/// Execution::parallel. Failing rows are flagged, not fatal.
BoundReport verify_theorem_12(const CanonicalIntegral& u, std::span<const double> radii,
                              Execution exec = Execution::parallel,
                              BoundTolerances tol = {});

struct TypeBoundReport {
  double rho = 0.0;
  int q = 0;
  double type_u = 0.0;
  double type_mu = 0.0;
  double type_N = 0.0;
  double s_rho = 0.0;
  double slack_1 = 0.0;  // S type_mu - type_u
  double slack_2 = 0.0;  // rho S type_N - type_u
  double slack_tolerance = 0.05;
  GeometricGrid grid;
  std::string measure;
  bool passed = false;
};

/// Finite-grid version of (3): types are estimated by estimate_type over the
/// upper half of the grid. Passing requires slack_1 >= -0.05 S type_mu and
/// slack_2 >= -0.05 rho S type_N. Throws IntegerOrderError for integer rho.
TypeBoundReport verify_theorem_3(const DiscreteMeasure& measure, double rho,
                                 const GeometricGrid& grid, QuadratureSettings quad = {},
                                 CircleScanSettings scan = {},
                                 Execution exec = Execution::parallel);

/// Short human-readable description, e.g. "12 atoms, mass 12, |w| in [0.5, 40]".
std::string describe(const DiscreteMeasure& m);

}  // namespace hwgrowth
