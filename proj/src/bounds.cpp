#include "hwgrowth/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hwgrowth/errors.hpp"

namespace hwgrowth {

namespace {

// Jump radii of the measure, descending, turned into the t-breakpoints r/rho_k
// in ascending order.
std::vector<double> breakpoints(const DiscreteMeasure& m, double r) {
  std::vector<double> out;
  out.reserve(m.radial_jumps().size());
  for (auto it = m.radial_jumps().rbegin(); it != m.radial_jumps().rend(); ++it) {
    out.push_back(r / it->location);
  }
  return out;
}

double add_panels(const RealFunction& f, std::span<const double> edges,
                  const QuadratureSettings& quad) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] < edges[i + 1]) sum += integrate(f, edges[i], edges[i + 1], quad);
  }
  return sum;
}

}  // namespace

BoundPair bound_part1(const CanonicalIntegral& u, double r) {
  if (!(r > 0.0)) throw DomainError("bound_part1: need r > 0");
  const DiscreteMeasure& m = u.measure();
  if (m.empty()) return {};
  const KernelContext& ctx = u.kernel();

  const double a = stieltjes_sum([&](double t) { return kernel_max(ctx, r / t); },
                                 m.radial_jumps());

  std::vector<double> edges{0.0};
  const std::vector<double> breaks = breakpoints(m, r);
  edges.insert(edges.end(), breaks.begin(), breaks.end());
  const double b = add_panels(
      [&](double t) { return counting_function(m, r / t) * kernel_max_derivative(ctx, t); },
      edges, ctx.quadrature());
  return {a, b};
}

BoundPair bound_part2(const CanonicalIntegral& u, double r) {
  if (!(r > 0.0)) throw DomainError("bound_part2: need r > 0");
  const DiscreteMeasure& m = u.measure();
  if (m.empty()) return {};
  const KernelContext& ctx = u.kernel();
  const QuadratureSettings& quad = ctx.quadrature();

  // a: integrate against dN(t) = mu^rad(t)/t dt over (r_min, inf).
  auto dn_integrand = [&](double t) {
    const double s = r / t;
    return s * kernel_max_derivative(ctx, s) * counting_function(m, t) / t;
  };
  std::vector<double> radii;
  for (const Jump& j : m.radial_jumps()) radii.push_back(j.location);
  double a = add_panels(dn_integrand, radii, quad);
  a += integrate(dn_integrand, radii.back(), kInfinity, quad);

  // b: Stieltjes integral of N(r/t) against g(t) = t M_q'(t). On each panel
  // [lo, hi] between breakpoints
  //   int N(r/t) dg = N(r/hi) g(hi) - N(r/lo) g(lo) + int g(t) mu^rad(r/t)/t dt,
  // since d/dt N(r/t) = -mu^rad(r/t)/t. At t -> 0, N(r/t) g(t) -> 0.
  auto g = [&](double t) { return t * kernel_max_derivative(ctx, t); };
  auto boundary = [&](double t) { return t > 0.0 ? averaged_counting(m, r / t) * g(t) : 0.0; };
  std::vector<double> edges{0.0};
  const std::vector<double> breaks = breakpoints(m, r);
  edges.insert(edges.end(), breaks.begin(), breaks.end());

  double b = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    b += boundary(edges[i + 1]) - boundary(edges[i]);
  }
  b += add_panels([&](double t) { return g(t) * counting_function(m, r / t) / t; }, edges,
                  quad);
  return {a, b};
}

double BoundRow::min_rhs() const {
  return std::min({rhs_p1_a, rhs_p1_b, rhs_p2_a, rhs_p2_b});
}

namespace {

double relative_gap(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale > 0.0 ? std::abs(x - y) / scale : 0.0;
}

BoundRow compute_row(const CanonicalIntegral& u, double r) {
  BoundRow row;
  row.r = r;
  try {
    row.lhs = circle_max(u, r, Execution::serial);
    const BoundPair p1 = bound_part1(u, r);
    const BoundPair p2 = bound_part2(u, r);
    row.rhs_p1_a = p1.a;
    row.rhs_p1_b = p1.b;
    row.rhs_p2_a = p2.a;
    row.rhs_p2_b = p2.b;
    row.violation = row.lhs - row.min_rhs();
    const double cols[] = {p1.a, p1.b, p2.a, p2.b};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        row.identity_gap = std::max(row.identity_gap, relative_gap(cols[i], cols[j]));
      }
    }
  } catch (const Error& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

BoundReport verify_theorem_12(const CanonicalIntegral& u, std::span<const double> radii,
                              Execution exec, BoundTolerances tol) {
  std::vector<double> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("verify: radii must be positive");
  }

  BoundReport report;
  report.q = u.genus();
  report.measure = describe(u.measure());
  report.tolerances = tol;
  report.rows.resize(sorted.size());

  // Build the M_q table before fanning out.
  u.kernel().warm_up(exec);
  const auto n = static_cast<std::ptrdiff_t>(sorted.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) report.rows[i] = compute_row(u, sorted[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) report.rows[i] = compute_row(u, sorted[i]);
  }

  report.worst_violation = report.rows.empty() ? 0.0 : -kInfinity;
  for (const BoundRow& row : report.rows) {
    if (!row.ok) {
      report.passed = false;
      continue;
    }
    report.worst_violation = std::max(report.worst_violation, row.violation);
    report.identity_gap = std::max(report.identity_gap, row.identity_gap);
    if (row.violation > tol.violation_rel * (1.0 + std::abs(row.lhs))) report.passed = false;
  }
  if (report.identity_gap > tol.identity_gap) report.passed = false;
  return report;
}

TypeBoundReport verify_theorem_3(const DiscreteMeasure& measure, double rho,
                                 const GeometricGrid& grid, QuadratureSettings quad,
                                 CircleScanSettings scan, Execution exec) {
  if (!(rho > 0.0)) throw DomainError("verify_theorem_3: need rho > 0");
  if (rho == std::floor(rho)) {
    throw IntegerOrderError("verify_theorem_3: the type bounds need a non-integer rho");
  }
  grid.validate();
  const CanonicalIntegral u = CanonicalIntegral::for_order(measure, rho, quad, scan);

  TypeBoundReport report;
  report.rho = rho;
  report.q = u.genus();
  report.grid = grid;
  report.measure = describe(measure);

  const auto type_of = [&](const RealFunction& f) {
    return estimate_type(f, rho, grid).type_at->type;
  };
  report.type_u = type_of([&](double r) { return circle_max(u, r, exec); });
  report.type_mu = type_of([&](double r) { return counting_function(measure, r); });
  report.type_N = type_of([&](double r) { return averaged_counting(measure, r); });
  report.s_rho = s_constant(OrderParams::for_order(rho), u.kernel(), SForm::direct);

  report.slack_1 = report.s_rho * report.type_mu - report.type_u;
  report.slack_2 = rho * report.s_rho * report.type_N - report.type_u;
  const double tol = report.slack_tolerance;
  report.passed = report.slack_1 >= -tol * report.s_rho * report.type_mu &&
                  report.slack_2 >= -tol * rho * report.s_rho * report.type_N;
  return report;
}

std::string describe(const DiscreteMeasure& m) {
  std::ostringstream out;
  out << m.size() << " atoms, mass " << m.total_mass();
  if (!m.empty()) out << ", |w| in [" << m.min_radius() << ", " << m.max_radius() << "]";
  return out.str();
}

}  // namespace hwgrowth
