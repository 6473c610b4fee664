#include "hwgrowth/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hwgrowth/errors.hpp"

namespace hwgrowth {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::vector<Jump> by_radius;
  by_radius.reserve(atoms_.size());
  for (const Atom& a : atoms_) {
    if (!std::isfinite(a.point.real()) || !std::isfinite(a.point.imag())) {
      throw DomainError("measure: atom coordinates must be finite");
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw DomainError("measure: atom masses must be positive and finite");
    }
    const double r = std::abs(a.point);
    if (!(r > 0.0)) {
      throw DomainError("measure: atom at the origin (support must exclude 0)");
    }
    by_radius.push_back({r, a.mass});
    total_mass_ += a.mass;
  }
  std::sort(by_radius.begin(), by_radius.end(),
            [](const Jump& x, const Jump& y) { return x.location < y.location; });
  double running = 0.0;
  for (const Jump& j : by_radius) {
    running += j.mass;
    if (!jumps_.empty() && jumps_.back().location == j.location) {
      jumps_.back().mass += j.mass;
      cumulative_.back() = running;
    } else {
      jumps_.push_back(j);
      cumulative_.push_back(running);
    }
  }
}

double DiscreteMeasure::min_radius() const noexcept {
  return jumps_.empty() ? 0.0 : jumps_.front().location;
}

double DiscreteMeasure::max_radius() const noexcept {
  return jumps_.empty() ? 0.0 : jumps_.back().location;
}

DiscreteMeasure DiscreteMeasure::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("measure: scale factor must be positive");
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.point *= c;
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::combined(const DiscreteMeasure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  return DiscreteMeasure(std::move(atoms));
}

double counting_function(const DiscreteMeasure& m, double t) {
  const auto it = std::upper_bound(
      m.jumps_.begin(), m.jumps_.end(), t,
      [](double value, const Jump& j) { return value < j.location; });
  if (it == m.jumps_.begin()) return 0.0;
  return m.cumulative_[static_cast<std::size_t>(it - m.jumps_.begin()) - 1];
}

RadialProfile RadialProfile::from_measure(const DiscreteMeasure& m) {
  return RadialProfile(Step{m.radial_jumps()});
}

RadialProfile RadialProfile::step(std::vector<Jump> jumps) {
  for (const Jump& j : jumps) {
    if (!(j.mass > 0.0)) throw DomainError("step profile: masses must be positive");
  }
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& x, const Jump& y) { return x.location < y.location; });
  return RadialProfile(Step{std::move(jumps)});
}

RadialProfile RadialProfile::power(double sigma, double rho) {
  if (!(sigma >= 0.0) || !(rho > 0.0)) {
    throw DomainError("power profile: need sigma >= 0 and rho > 0");
  }
  return RadialProfile(Power{sigma, rho});
}

double RadialProfile::operator()(double t) const {
  if (const auto* p = std::get_if<Power>(&data_)) {
    return t > 0.0 ? p->sigma * std::pow(t, p->rho) : 0.0;
  }
  double mass = 0.0;
  for (const Jump& j : std::get<Step>(data_).jumps) {
    if (j.location > t) break;
    mass += j.mass;
  }
  return mass;
}

double averaged_counting(const RadialProfile& p, double t) {
  if (!(t > 0.0)) throw DomainError("averaged_counting: need t > 0");
  if (!p.is_step()) {
    const auto& pw = p.as_power();
    return pw.sigma * std::pow(t, pw.rho) / pw.rho;
  }
  const auto& jumps = p.as_step().jumps;
  if (!jumps.empty() && !(jumps.front().location > 0.0)) {
    throw DivergentIntegral("averaged_counting: mass at the origin makes "
                            "the integral diverge");
  }
  double sum = 0.0;
  for (const Jump& j : jumps) {
    if (j.location > t) break;
    sum += j.mass * std::log(t / j.location);
  }
  return sum;
}

double averaged_counting(const DiscreteMeasure& m, double t) {
  if (!(t > 0.0)) throw DomainError("averaged_counting: need t > 0");
  double sum = 0.0;
  for (const Jump& j : m.radial_jumps()) {
    if (j.location > t) break;
    sum += j.mass * std::log(t / j.location);
  }
  return sum;
}

double averaged_counting_by_quadrature(const RadialProfile& p, double t,
                                       const QuadratureSettings& settings) {
  if (!(t > 0.0)) throw DomainError("averaged_counting: need t > 0");
  if (!p.is_step()) {
    // s = t e^(-y) removes the algebraic singularity at s = 0.
    return integrate([&p, t](double y) { return p(t * std::exp(-y)); }, 0.0, kInfinity,
                     settings);
  }

  const auto& jumps = p.as_step().jumps;
  if (!jumps.empty() && !(jumps.front().location > 0.0)) {
    throw DivergentIntegral("averaged_counting: mass at the origin makes "
                            "the integral diverge");
  }
  // mu^rad is constant between consecutive jumps; integrate each piece.
  double sum = 0.0;
  for (std::size_t i = 0; i < jumps.size() && jumps[i].location < t; ++i) {
    const double lo = jumps[i].location;
    const double hi = i + 1 < jumps.size() ? std::min(jumps[i + 1].location, t) : t;
    if (lo < hi) {
      const double level = p(lo);
      sum += integrate([level](double s) { return level / s; }, lo, hi, settings);
    }
  }
  return sum;
}

void GeometricGrid::validate() const {
  if (!(r0 > 0.0) || !(ratio > 1.0) || count < 8) {
    throw DomainError("geometric grid: need r0 > 0, ratio > 1, count >= 8");
  }
}

std::vector<double> GeometricGrid::radii() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[k] = r0 * std::pow(ratio, k);
  return out;
}

std::vector<double> GeometricGrid::upper_half() const {
  std::vector<double> all = radii();
  return {all.begin() + count / 2, all.end()};
}

GeometricGrid GeometricGrid::spanning(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 8) {
    throw DomainError("geometric grid: need 0 < lo < hi and count >= 8");
  }
  return {lo, std::pow(hi / lo, 1.0 / (count - 1)), count};
}

namespace {

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

struct Samples {
  std::vector<double> radii;
  std::vector<double> values;  // f+(r)
};

Samples sample_upper_half(const RealFunction& f, const GeometricGrid& grid) {
  Samples s;
  s.radii = grid.upper_half();
  s.values.reserve(s.radii.size());
  for (double r : s.radii) s.values.push_back(std::max(f(r), 0.0));
  return s;
}

double order_from(const Samples& s) {
  const double anchor_log_r = std::log(s.radii.front());
  const double anchor_log_f = log_plus(s.values.front());
  if (std::isinf(anchor_log_f)) return kInfinity;
  // Only secants spanning at least half the window: short ones amplify the
  // wobble of staircase inputs.
  double order = 0.0;
  for (std::size_t i = std::max<std::size_t>(1, s.radii.size() / 2); i < s.radii.size(); ++i) {
    const double slope =
        (log_plus(s.values[i]) - anchor_log_f) / (std::log(s.radii[i]) - anchor_log_r);
    order = std::max(order, slope);
  }
  return order;
}

}  // namespace

GrowthEstimate estimate_order(const RealFunction& f, const GeometricGrid& grid) {
  const Samples s = sample_upper_half(f, grid);
  return {order_from(s), std::nullopt, grid,
          "secant of ln+ f+ against ln r from the window start, max over the "
          "upper half of the grid"};
}

GrowthEstimate estimate_type(const RealFunction& f, double rho,
                             const GeometricGrid& grid) {
  if (!(rho > 0.0)) throw DomainError("estimate_type: need rho > 0");
  const Samples s = sample_upper_half(f, grid);
  double type = 0.0;
  for (std::size_t i = 0; i < s.radii.size(); ++i) {
    type = std::max(type, s.values[i] / std::pow(s.radii[i], rho));
  }
  return {order_from(s), TypeAt{rho, type}, grid,
          "max of f+(r)/r^rho over the upper half of the grid"};
}

MeasureSplit split_measure(const DiscreteMeasure& m, double radius) {
  if (!(radius > 0.0)) throw DomainError("split_measure: need R > 0");
  std::vector<Atom> inner;
  std::vector<Atom> outer;
  for (const Atom& a : m.atoms()) {
    (std::abs(a.point) <= radius ? inner : outer).push_back(a);
  }
  return {DiscreteMeasure(std::move(inner)), DiscreteMeasure(std::move(outer))};
}

DiscreteMeasure synthesize_power_zeros(double sigma, double rho, int count,
                                       AngleRule rule) {
  if (!(sigma > 0.0) || !(rho > 0.0) || count < 1) {
    throw DomainError("synthesize_power_zeros: sigma, rho and count must be positive");
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; ++j) {
    const double r = std::pow(j / sigma, 1.0 / rho);
    double theta = rule.theta0;
    if (rule.kind == AngleRule::Kind::equidistributed) {
      const double x = j * inv_phi;
      theta = 2.0 * std::numbers::pi * (x - std::floor(x));
    }
    const ComplexPoint w = theta == 0.0 ? ComplexPoint(r, 0.0) : std::polar(r, theta);
    atoms.push_back({w, 1.0});
  }
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace hwgrowth
