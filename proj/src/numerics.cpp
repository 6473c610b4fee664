#include "hwgrowth/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "hwgrowth/errors.hpp"

namespace hwgrowth {

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
    throw DomainError("quadrature settings: tolerances must be positive and "
                      "max_subdivisions >= 1");
  }
}

void CircleScanSettings::validate() const {
  if (coarse_points < 8) {
    throw DomainError("circle scan: coarse_points must be at least 8");
  }
  if (!(refine_tol > 0.0)) {
    throw DomainError("circle scan: refine_tol must be positive");
  }
}

namespace {

// Kronrod abscissae (descending, last is the centre) and weights of the
// 15-point rule, with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

double sample(const RealFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw DomainError("integrand is not finite at x = " + std::to_string(x));
  }
  return y;
}

Panel gauss_kronrod(const RealFunction& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = sample(f, centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = sample(f, centre - dx) + sample(f, centre + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

bool splittable(const Panel& p) {
  const double mid = 0.5 * (p.a + p.b);
  const double scale = std::max(std::abs(p.a), std::abs(p.b));
  return mid > p.a && mid < p.b &&
         (p.b - p.a) > 8.0 * std::numeric_limits<double>::epsilon() * scale;
}

QuadratureResult adaptive_finite(const RealFunction& f, double a, double b,
                                 const QuadratureSettings& s) {
  std::priority_queue<Panel> open;
  std::vector<Panel> frozen;
  open.push(gauss_kronrod(f, a, b));
  int panels = 1;

  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    auto copy = open;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const Panel& p : frozen) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double value = open.top().value;
  double error = open.top().error;
  while (error > std::max(s.abs_tol, s.rel_tol * std::abs(value))) {
    if (open.empty()) {
      throw NonConvergence("quadrature: panels reached machine resolution "
                           "before the tolerance was met");
    }
    if (panels >= s.max_subdivisions) {
      throw NonConvergence("quadrature: " + std::to_string(s.max_subdivisions) +
                           " subdivisions exhausted (error estimate " +
                           std::to_string(error) + ")");
    }
    Panel worst = open.top();
    open.pop();
    if (!splittable(worst)) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++panels;
    // Running sums drift; resynchronize now and then.
    if (panels % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  return {value, error, panels};
}

}  // namespace

QuadratureResult integrate_with_error(const RealFunction& f, double a, double b,
                                      const QuadratureSettings& settings) {
  settings.validate();
  if (!std::isfinite(a) || !(a < b)) {
    throw DomainError("integrate: need finite a < b");
  }
  if (std::isfinite(b)) return adaptive_finite(f, a, b, settings);

  auto inverted = [&f](double x) { return f(1.0 / x) / (x * x); };
  if (a >= 1.0) return adaptive_finite(inverted, 0.0, 1.0 / a, settings);

  const QuadratureResult head = adaptive_finite(f, a, 1.0, settings);
  const QuadratureResult tail = adaptive_finite(inverted, 0.0, 1.0, settings);
  return {head.value + tail.value, head.error + tail.error,
          head.subdivisions + tail.subdivisions};
}

double integrate(const RealFunction& f, double a, double b,
                 const QuadratureSettings& settings) {
  return integrate_with_error(f, a, b, settings).value;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double finite_or_floor(double y) { return std::isfinite(y) ? y : -kInfinity; }

std::vector<double> scan(const RealFunction& g, std::span<const double> thetas,
                         Execution exec) {
  std::vector<double> values(thetas.size());
  const auto n = static_cast<std::ptrdiff_t>(thetas.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = finite_or_floor(g(thetas[i]));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = finite_or_floor(g(thetas[i]));
  }
  return values;
}

// Golden-section search for a maximum inside [lo, hi].
ArgMax golden_section(const RealFunction& g, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = finite_or_floor(g(x1));
  double f2 = finite_or_floor(g(x2));
  for (int iter = 0; iter < 200 && (hi - lo) > tol; ++iter) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = finite_or_floor(g(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = finite_or_floor(g(x2));
    }
  }
  return f1 >= f2 ? ArgMax{x1, f1} : ArgMax{x2, f2};
}

// Coarse local maxima that could still be the global one after refinement,
// best first. Exact ties between separate peaks land here too.
constexpr std::size_t kMaxCandidates = 8;
constexpr double kCandidateBand = 1e-3;  // of the sampled range
constexpr double kTieBand = 1e-12;

std::vector<std::size_t> candidate_cells(const std::vector<double>& values, bool periodic) {
  const std::size_t n = values.size();
  double best = -kInfinity;
  double worst = kInfinity;
  for (double v : values) {
    best = std::max(best, v);
    if (std::isfinite(v)) worst = std::min(worst, v);
  }
  std::vector<std::size_t> cells;
  if (!std::isfinite(best)) return cells;
  const double floor = best - kCandidateBand * (best - worst);
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < floor) continue;
    const bool has_left = periodic || i > 0;
    const bool has_right = periodic || i + 1 < n;
    const double left = has_left ? values[(i + n - 1) % n] : -kInfinity;
    const double right = has_right ? values[(i + 1) % n] : -kInfinity;
    // Plateaus count once, at their first cell.
    if (values[i] > left && values[i] >= right) cells.push_back(i);
  }
  if (cells.empty()) {
    // A constant function on the circle: every cell ties.
    cells.push_back(static_cast<std::size_t>(
        std::find(values.begin(), values.end(), best) - values.begin()));
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (cells.size() > kMaxCandidates) cells.resize(kMaxCandidates);
  return cells;
}

// Larger value wins; values within kTieBand (relative) resolve to the smaller theta.
bool better(const ArgMax& a, const ArgMax& b) {
  const double band = kTieBand * std::max(std::abs(a.value), std::abs(b.value));
  if (a.value > b.value + band) return true;
  if (a.value < b.value - band) return false;
  return a.theta < b.theta;
}

template <typename Wrap>
ArgMax refine(const RealFunction& g, const std::vector<double>& thetas,
              const std::vector<double>& values, bool periodic, double step, double lo,
              double hi, double tol, Wrap wrap) {
  const std::vector<std::size_t> cells = candidate_cells(values, periodic);
  if (cells.empty()) return {thetas.front(), values.front()};
  ArgMax result{thetas[cells.front()], values[cells.front()]};
  for (std::size_t cell : cells) {
    ArgMax local{thetas[cell], values[cell]};
    const ArgMax refined =
        golden_section(g, std::max(lo, thetas[cell] - step), std::min(hi, thetas[cell] + step), tol);
    if (refined.value > local.value) local = {wrap(refined.theta), refined.value};
    if (better(local, result)) result = local;
  }
  return result;
}

}  // namespace

ArgMax maximize_on_circle(const RealFunction& g, const CircleScanSettings& settings,
                          Execution exec) {
  settings.validate();
  const int n = settings.coarse_points;
  const double step = kTwoPi / n;
  std::vector<double> thetas(n);
  for (int i = 0; i < n; ++i) thetas[i] = kTwoPi * i / n;

  const std::vector<double> values = scan(g, thetas, exec);
  return refine(g, thetas, values, true, step, -kInfinity, kInfinity, settings.refine_tol,
                [](double theta) {
                  theta = std::fmod(theta, kTwoPi);
                  return theta < 0.0 ? theta + kTwoPi : theta;
                });
}

ArgMax maximize_on_arc(const RealFunction& g, double lo, double hi,
                       const CircleScanSettings& settings, Execution exec) {
  settings.validate();
  if (!(lo < hi)) throw DomainError("maximize_on_arc: need lo < hi");
  const int n = settings.coarse_points;
  const double step = (hi - lo) / (n - 1);
  std::vector<double> thetas(n);
  for (int i = 0; i < n; ++i) thetas[i] = lo + (hi - lo) * i / (n - 1);
  thetas.back() = hi;

  const std::vector<double> values = scan(g, thetas, exec);
  return refine(g, thetas, values, false, step, lo, hi, settings.refine_tol,
                [](double theta) { return theta; });
}

double right_derivative(const RealFunction& f, double t, double h) {
  if (!(t > 0.0)) throw DomainError("right_derivative: need t > 0");
  if (!(h > 0.0)) throw DomainError("right_derivative: need a positive step");
  // Use the representable steps actually taken.
  const double full = (t + h) - t;
  const double half = (t + 0.5 * h) - t;
  const double f0 = f(t);
  const double coarse = (f(t + full) - f0) / full;
  const double fine = (f(t + half) - f0) / half;
  return 2.0 * fine - coarse;
}

double right_derivative(const RealFunction& f, double t) {
  return right_derivative(f, t, std::max(1e-6, 1e-6 * t));
}

double stieltjes_sum(const RealFunction& g, std::span<const Jump> jumps) {
  double sum = 0.0;
  for (const Jump& j : jumps) {
    if (!(j.location > 0.0) || !(j.mass > 0.0)) {
      throw DomainError("stieltjes_sum: jump locations and masses must be positive");
    }
    sum += j.mass * g(j.location);
  }
  return sum;
}

}  // namespace hwgrowth
