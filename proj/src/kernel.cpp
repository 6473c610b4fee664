#include "hwgrowth/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "hwgrowth/errors.hpp"

namespace hwgrowth {

int genus_for_order(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("genus_for_order: need a finite rho > 0");
  }
  return static_cast<int>(std::floor(rho));
}

OrderParams OrderParams::for_order(double rho) { return {rho, genus_for_order(rho)}; }

double kernel_eval(int q, ComplexPoint z) {
  if (z == ComplexPoint(1.0, 0.0)) return -kInfinity;
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;

  if (r <= 0.5) {
    if (q == 0) return 0.5 * std::log1p(std::norm(z) - 2.0 * z.real());
    // K_q(z) = -Re sum_{k>q} z^k / k; ln|1-z| would cancel catastrophically.
    ComplexPoint power = z;
    for (int k = 1; k <= q; ++k) power *= z;
    const double floor = 1e-17 * std::abs(power) / (q + 1);
    double sum = 0.0;
    for (int k = q + 1; k < 4096; ++k) {
      const double magnitude = std::abs(power) / k;
      sum -= power.real() / k;
      if (magnitude < floor) break;
      power *= z;
    }
    return sum;
  }

  double value = std::log(std::hypot(1.0 - z.real(), z.imag()));
  ComplexPoint power(1.0, 0.0);
  for (int k = 1; k <= q; ++k) {
    power *= z;
    value += power.real() / k;
  }
  return value;
}

double kernel_eval(const KernelContext& ctx, ComplexPoint z) {
  return kernel_eval(ctx.genus(), z);
}

double kernel_max_bound(int q, double r) {
  double bound = std::log1p(r);
  double power = 1.0;
  for (int k = 1; k <= q; ++k) {
    power *= r;
    bound += power / k;
  }
  return bound;
}

KernelMax kernel_max_direct(const KernelContext& ctx, double r) {
  if (!(r >= 0.0)) throw DomainError("kernel_max: need r >= 0");
  if (r == 0.0) return {0.0, 0.0};
  const int q = ctx.genus();
  // K_q(conj z) = K_q(z): the upper half circle suffices, sampled at the same
  // angular spacing as a full-circle scan.
  CircleScanSettings half = ctx.scan();
  half.coarse_points = std::max(8, half.coarse_points / 2 + 1);
  const ArgMax best = maximize_on_arc(
      [q, r](double theta) { return kernel_eval(q, std::polar(r, theta)); }, 0.0,
      std::numbers::pi, half, Execution::serial);
  return {best.value, best.theta};
}

namespace {

// d ln M / d ln r from the envelope identity at the maximizer.
double envelope_log_slope(int q, double r, const KernelMax& m) {
  const ComplexPoint z = std::polar(r, m.theta);
  ComplexPoint power = z;
  for (int k = 1; k <= q; ++k) power *= z;
  return -(power / (1.0 - z)).real() / m.value;
}

double hermite(double y0, double s0, double y1, double s1, double h, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * s0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * s1;
}

template <typename Body>
void for_each_index(std::ptrdiff_t n, Execution exec, Body body) {
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace

bool MaxTable::covers(double r) const noexcept {
  return !log_values_.empty() && r >= kLowerRadius && r <= kUpperRadius;
}

double MaxTable::lookup(double r) const noexcept {
  if (!covers(r)) return -1.0;
  const auto cells = static_cast<std::ptrdiff_t>(cell_ok_.size());
  const double pos = (std::log(r) - log_lower_) / log_step_;
  const auto i = std::clamp(static_cast<std::ptrdiff_t>(std::floor(pos)),
                            std::ptrdiff_t{0}, cells - 1);
  if (!cell_ok_[i]) return -1.0;
  const double t = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
  return std::exp(hermite(log_values_[i], slopes_[i], log_values_[i + 1],
                          slopes_[i + 1], log_step_, t));
}

std::size_t MaxTable::invalid_cells() const noexcept {
  return static_cast<std::size_t>(std::count(cell_ok_.begin(), cell_ok_.end(), 0));
}

MaxTable build_max_table(const KernelContext& ctx, Execution exec) {
  MaxTable table;
  const int decades = static_cast<int>(
      std::lround(std::log10(MaxTable::kUpperRadius / MaxTable::kLowerRadius)));
  const std::ptrdiff_t cells = static_cast<std::ptrdiff_t>(decades) * MaxTable::kPointsPerDecade;
  table.log_step_ = std::log(10.0) / MaxTable::kPointsPerDecade;
  table.log_lower_ = std::log(MaxTable::kLowerRadius);
  table.log_values_.assign(cells + 1, 0.0);
  table.slopes_.assign(cells + 1, 0.0);
  table.cell_ok_.assign(cells, 0);

  const int q = ctx.genus();
  for_each_index(cells + 1, exec, [&](std::ptrdiff_t i) {
    const double r = std::exp(table.log_lower_ + i * table.log_step_);
    const KernelMax m = kernel_max_direct(ctx, r);
    table.log_values_[i] = std::log(m.value);
    table.slopes_[i] = envelope_log_slope(q, r, m);
  });
  for_each_index(cells, exec, [&](std::ptrdiff_t i) {
    const double u = table.log_lower_ + (i + 0.5) * table.log_step_;
    const double direct = kernel_max_direct(ctx, std::exp(u)).value;
    const double interpolated =
        std::exp(hermite(table.log_values_[i], table.slopes_[i], table.log_values_[i + 1],
                         table.slopes_[i + 1], table.log_step_, 0.5));
    table.cell_ok_[i] =
        std::abs(interpolated - direct) <= MaxTable::kMaxTableTolerance * direct;
  });
  return table;
}

struct KernelContext::Cache {
  std::once_flag once;
  MaxTable table;
};

KernelContext::KernelContext(int q, QuadratureSettings quad, CircleScanSettings scan)
    : q_(q), quad_(quad), scan_(scan), cache_(std::make_shared<Cache>()) {
  if (q < 0) throw DomainError("kernel: genus must be nonnegative");
  quad_.validate();
  scan_.validate();
}

const MaxTable& KernelContext::warm_up(Execution exec) const {
  std::call_once(cache_->once, [&] { cache_->table = build_max_table(*this, exec); });
  return cache_->table;
}

double kernel_max(const KernelContext& ctx, double r) {
  if (!(r >= 0.0)) throw DomainError("kernel_max: need r >= 0");
  if (r == 0.0) return 0.0;
  if (r >= MaxTable::kLowerRadius && r <= MaxTable::kUpperRadius) {
    const double v = ctx.table().lookup(r);
    if (v >= 0.0) return v;
  }
  return kernel_max_direct(ctx, r).value;
}

double kernel_max_derivative(const KernelContext& ctx, double t) {
  if (!(t > 0.0)) throw DomainError("kernel_max_derivative: need t > 0");
  // M_q(t) ~ t^(q+1) near 0, so the step has to shrink with t.
  return right_derivative([&ctx](double r) { return kernel_max(ctx, r); }, t, 1e-6 * t);
}

namespace {

// Rigorous bound on int_0^eps r^-rho M_q'(r) dr (which dominates the direct
// form's head) for eps < 1.
double head_bound(int q, double rho, double log_eps) {
  const double eps = std::exp(log_eps);
  const double lead = std::exp((q + 1 - rho) * log_eps) / ((q + 1) * (1.0 - eps));
  return lead * (1.0 + rho / (q + 1 - rho));
}

// rho * int_R^inf r^(-rho-1) (ln r + 1/r + sum r^k/k) dr, which bounds the
// tail of both forms.
double tail_bound(int q, double rho, double log_r) {
  double sum = std::exp(-rho * log_r) * (log_r / rho + 1.0 / (rho * rho)) +
               std::exp((-rho - 1.0) * log_r) / (rho + 1.0);
  for (int k = 1; k <= q; ++k) sum += std::exp((k - rho) * log_r) / (k * (rho - k));
  return rho * sum;
}

// Smallest x in [lo, hi] with decreasing(x) <= target, by bisection.
template <typename F>
double bisect_decreasing(F decreasing, double lo, double hi, double target) {
  for (int i = 0; i < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (decreasing(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

SConstant s_constant_detailed(const OrderParams& params, const KernelContext& ctx,
                              SForm form) {
  const double rho = params.rho;
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("s_constant: need rho > 0");
  if (rho == std::floor(rho)) {
    throw IntegerOrderError("s_constant: S(rho) diverges at integer rho = " +
                            std::to_string(rho));
  }
  const int q = params.q;
  if (q != genus_for_order(rho)) throw DomainError("s_constant: q must equal floor(rho)");
  if (ctx.genus() != q) throw DomainError("s_constant: kernel genus differs from floor(rho)");

  const double target = 0.5e-3 * ctx.quadrature().abs_tol;

  // Head: largest eps (in log) with head_bound <= target.
  const double log_eps_min = -700.0;
  if (head_bound(q, rho, log_eps_min) > target) {
    throw NonConvergence("s_constant: head of the integral cannot be truncated");
  }
  const double log_eps = -bisect_decreasing(
      [&](double x) { return head_bound(q, rho, -x); }, std::log(2.0), -log_eps_min,
      target);

  // Tail: R must keep r^q finite.
  const double log_r_max = 700.0 / std::max(1, q);
  if (tail_bound(q, rho, log_r_max) > target) {
    throw NonConvergence("s_constant: tail of the integral cannot be truncated "
                         "within double range");
  }
  const double log_r = bisect_decreasing([&](double x) { return tail_bound(q, rho, x); },
                                         0.0, log_r_max, target);

  RealFunction integrand;
  if (form == SForm::direct) {
    integrand = [&ctx, rho](double v) {
      const double r = std::exp(v);
      return rho * std::exp(-rho * v) * kernel_max(ctx, r);
    };
  } else {
    integrand = [&ctx, rho](double v) {
      const double r = std::exp(v);
      return std::exp((1.0 - rho) * v) * kernel_max_derivative(ctx, r);
    };
  }

  // Break at the table edges and at r = 1.
  std::vector<double> breaks{log_eps, std::log(MaxTable::kLowerRadius), 0.0,
                             std::log(MaxTable::kUpperRadius), log_r};
  std::sort(breaks.begin(), breaks.end());
  SConstant out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(breaks[i], log_eps);
    const double hi = std::min(breaks[i + 1], log_r);
    if (!(lo < hi)) continue;
    const QuadratureResult piece = integrate_with_error(integrand, lo, hi, ctx.quadrature());
    out.value += piece.value;
    out.quadrature_error += piece.error;
  }
  out.truncation_bound = head_bound(q, rho, log_eps) + tail_bound(q, rho, log_r);
  out.lower_radius = std::exp(log_eps);
  out.upper_radius = std::exp(log_r);
  return out;
}

double s_constant(const OrderParams& params, const KernelContext& ctx, SForm form) {
  return s_constant_detailed(params, ctx, form).value;
}

}  // namespace hwgrowth
