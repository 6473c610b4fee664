#pragma once

// Shared numeric kernels: adaptive Gauss-Kronrod quadrature on finite and
// semi-infinite ranges, maximization on a circle (coarse scan plus golden
// section), one-sided finite differences and Stieltjes sums against step
// measures.
//
// Every routine is a pure function of its arguments. The parallel variants
// compute exactly the same floating-point operations as the serial reference,
// so the results are bitwise identical.

#include <functional>
#include <limits>
#include <span>

namespace hwgrowth {

enum class Execution { serial, parallel };

using RealFunction = std::function<double(double)>;

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  /// Throws DomainError unless all fields are positive.
  void validate() const;
};

struct CircleScanSettings {
  int coarse_points = 1024;
  double refine_tol = 1e-12;  // on theta

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integral of f over (a, b); b may be +infinity.
///
/// Finite ranges use globally adaptive bisection with a 15-point
/// Gauss-Kronrod rule per panel (endpoints are never sampled, so integrable
/// algebraic singularities at a or b are fine). For b = +inf the range is
/// split at 1 and the tail is mapped through x -> 1/x onto (0, 1].
///
/// Throws DomainError if a >= b and NonConvergence if the subdivision budget
/// runs out before the error estimate drops below
/// max(abs_tol, rel_tol * |result|).
QuadratureResult integrate_with_error(const RealFunction& f, double a, double b,
                                      const QuadratureSettings& settings = {});

double integrate(const RealFunction& f, double a, double b,
                 const QuadratureSettings& settings = {});

struct ArgMax {
  double theta = 0.0;
  double value = -kInfinity;
};

/// Maximum of a continuous 2*pi-periodic g over [0, 2*pi).
/// Non-finite samples are skipped; ties resolve to the smallest theta.
ArgMax maximize_on_circle(const RealFunction& g,
                          const CircleScanSettings& settings = {},
                          Execution exec = Execution::serial);

/// Same search restricted to the closed arc [lo, hi]; both ends are sampled.
ArgMax maximize_on_arc(const RealFunction& g, double lo, double hi,
                       const CircleScanSettings& settings = {},
                       Execution exec = Execution::serial);

/// Forward-difference right derivative at t > 0 with one Richardson step.
/// Default step is max(1e-6, 1e-6 * t).
double right_derivative(const RealFunction& f, double t);

/// As above with an explicit base step h > 0.
double right_derivative(const RealFunction& f, double t, double h);

struct Jump {
  double location = 0.0;
  double mass = 0.0;
};

/// Sum of mass_j * g(location_j). Throws DomainError on a nonpositive
/// location or mass.
double stieltjes_sum(const RealFunction& g, std::span<const Jump> jumps);

}  // namespace hwgrowth
