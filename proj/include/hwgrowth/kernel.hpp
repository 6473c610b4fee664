#pragma once

// Weierstrass primary kernel of genus q,
//   K_q(z) = ln|1 - z| + sum_{k=1..q} Re(z^k) / k,
// its circle maximum M_q(r), the right derivative M_q'(r), and the constant
//   S(rho) = int_0^inf r^-rho M_q'(r) dr = rho int_0^inf r^(-rho-1) M_q(r) dr.

#include <memory>
#include <vector>

#include "hwgrowth/measures.hpp"
#include "hwgrowth/numerics.hpp"

namespace hwgrowth {

/// floor(rho). Throws DomainError unless rho > 0.
int genus_for_order(double rho);

class KernelContext;
class MaxTable;
MaxTable build_max_table(const KernelContext& ctx, Execution exec);

/// Log-spaced table of M_q with cubic Hermite interpolation of ln M_q in ln r.
/// Node slopes come from the envelope identity
///   r M_q'(r) = -Re(z^(q+1) / (1 - z)) at the maximizer z = r e^(i theta*),
/// and every cell is checked against a direct maximization at its midpoint;
/// cells that miss kMaxTableTolerance fall back to direct maximization.
class MaxTable {
 public:
  static constexpr double kLowerRadius = 1e-6;
  static constexpr double kUpperRadius = 1e6;
  static constexpr int kPointsPerDecade = 512;
  static constexpr double kMaxTableTolerance = 1e-10;  // relative

  MaxTable() = default;

  bool covers(double r) const noexcept;
  /// Interpolated value, or a negative number when r is outside the table or
  /// its cell failed validation.
  double lookup(double r) const noexcept;

  std::size_t nodes() const noexcept { return log_values_.size(); }
  std::size_t invalid_cells() const noexcept;

  bool operator==(const MaxTable&) const = default;

 private:
  friend MaxTable build_max_table(const KernelContext& ctx, Execution exec);
  double log_step_ = 0.0;
  double log_lower_ = 0.0;
  std::vector<double> log_values_;  // ln M_q at the nodes
  std::vector<double> slopes_;      // d ln M_q / d ln r at the nodes
  std::vector<char> cell_ok_;
};

/// Genus plus numeric settings. Copies share one lazily built MaxTable; the
/// build is guarded by std::call_once so concurrent readers see identical
/// values.
class KernelContext {
 public:
  explicit KernelContext(int q, QuadratureSettings quad = {},
                         CircleScanSettings scan = {});

  int genus() const noexcept { return q_; }
  const QuadratureSettings& quadrature() const noexcept { return quad_; }
  const CircleScanSettings& scan() const noexcept { return scan_; }

  /// Builds the M_q table now. Parallel and serial builds are bitwise equal.
  const MaxTable& warm_up(Execution exec = Execution::parallel) const;

  /// The table, building it on first use.
  const MaxTable& table() const { return warm_up(); }

 private:
  struct Cache;
  int q_;
  QuadratureSettings quad_;
  CircleScanSettings scan_;
  std::shared_ptr<Cache> cache_;
};

/// Builds a table without touching any context cache. Used to compare the
/// serial reference build against the parallel one.
MaxTable build_max_table(const KernelContext& ctx, Execution exec);

/// K_q(z); -infinity at z = 1. Uses the tail series -Re sum_{k>q} z^k/k for
/// |z| <= 1/2 so that small arguments keep full relative accuracy.
double kernel_eval(int q, ComplexPoint z);
double kernel_eval(const KernelContext& ctx, ComplexPoint z);

struct KernelMax {
  double value = 0.0;
  double theta = 0.0;  // maximizer in [0, pi]
};

/// Direct maximization of K_q over the half circle |z| = r, 0 <= arg z <= pi.
KernelMax kernel_max_direct(const KernelContext& ctx, double r);

/// M_q(r): the table inside [1e-6, 1e6], direct maximization elsewhere.
/// M_q(0) = 0.
double kernel_max(const KernelContext& ctx, double r);

/// Right derivative of M_q at t > 0 by a Richardson-extrapolated forward
/// difference with relative step 1e-6 * t.
double kernel_max_derivative(const KernelContext& ctx, double t);

/// Explicit majorant ln(1 + r) + sum_{k=1..q} r^k / k >= M_q(r).
double kernel_max_bound(int q, double r);

struct OrderParams {
  double rho = 0.5;
  int q = 0;

  /// {rho, floor(rho)}.
  static OrderParams for_order(double rho);
};

enum class SForm { derivative, direct };

struct SConstant {
  double value = 0.0;
  double quadrature_error = 0.0;  // estimate from the adaptive rule
  double truncation_bound = 0.0;  // head + tail cut off, rigorous
  double lower_radius = 0.0;
  double upper_radius = 0.0;
};

/// S(rho) in either integral form, computed in the variable v = ln r on
/// [ln r_lo, ln r_hi]. The cut-offs are chosen so that the rigorous head
/// bound (from M_q(r) <= r^(q+1) / ((q+1)(1-r)) for r < 1) and tail bound
/// (from kernel_max_bound) together stay below 1e-3 * abs_tol.
///
/// Throws IntegerOrderError for integer rho, DomainError if q != floor(rho)
/// or ctx has a different genus, NonConvergence when quadrature fails or the
/// tail cannot be truncated within double range.
SConstant s_constant_detailed(const OrderParams& params, const KernelContext& ctx,
                              SForm form);
double s_constant(const OrderParams& params, const KernelContext& ctx, SForm form);

}  // namespace hwgrowth
