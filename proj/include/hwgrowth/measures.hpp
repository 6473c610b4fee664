#pragma once

// Finite positive point-mass measures on the plane with support away from the
// origin, their counting functions, averaged counting functions, and finite-
// grid estimators of order and type.

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hwgrowth/numerics.hpp"

namespace hwgrowth {

using ComplexPoint = std::complex<double>;

struct Atom {
  ComplexPoint point;
  double mass = 1.0;
};

/// Finite positive measure with every atom strictly away from 0.
/// Immutable after construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  /// Throws DomainError on an atom at the origin, a non-finite coordinate,
  /// or a nonpositive mass.
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  double total_mass() const noexcept { return total_mass_; }

  /// Smallest and largest |w| over the atoms; both 0 for the empty measure.
  double min_radius() const noexcept;
  double max_radius() const noexcept;

  /// Distinct atom radii in increasing order with the mass sitting on each.
  const std::vector<Jump>& radial_jumps() const noexcept { return jumps_; }

  /// Every atom w replaced by c * w.
  DiscreteMeasure scaled(double c) const;

  /// Sum of two measures (atom lists concatenated).
  DiscreteMeasure combined(const DiscreteMeasure& other) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Jump> jumps_;
  std::vector<double> cumulative_;  // mass on |w| <= jumps_[i].location
  double total_mass_ = 0.0;

  friend double counting_function(const DiscreteMeasure& m, double t);
};

/// mu^rad as a function of t: a step function with sorted jumps, or the
/// synthetic power profile sigma * t^rho.
class RadialProfile {
 public:
  struct Step {
    std::vector<Jump> jumps;  // sorted by location
  };
  struct Power {
    double sigma = 1.0;
    double rho = 1.0;
  };

  static RadialProfile from_measure(const DiscreteMeasure& m);
  /// Jumps are sorted; locations may be <= 0 only to represent mass at the
  /// origin, which averaged_counting rejects.
  static RadialProfile step(std::vector<Jump> jumps);
  static RadialProfile power(double sigma, double rho);

  bool is_step() const noexcept { return std::holds_alternative<Step>(data_); }
  const Step& as_step() const { return std::get<Step>(data_); }
  const Power& as_power() const { return std::get<Power>(data_); }

  /// mu^rad(t), right-continuous.
  double operator()(double t) const;

 private:
  explicit RadialProfile(std::variant<Step, Power> data) : data_(std::move(data)) {}
  std::variant<Step, Power> data_;
};

/// Mass of the closed disc |z| <= t.
double counting_function(const DiscreteMeasure& m, double t);

/// N(t) = integral over (0, t) of mu^rad(s)/s ds in closed form:
/// sum of mass_j * ln(t / r_j) over jumps r_j <= t for step profiles and
/// sigma * t^rho / rho for power profiles. Throws DivergentIntegral when a
/// step profile carries mass at radius 0.
double averaged_counting(const RadialProfile& p, double t);
double averaged_counting(const DiscreteMeasure& m, double t);

/// The same integral by adaptive quadrature, piecewise between jumps.
/// Independent of the closed form; used to cross-check it.
double averaged_counting_by_quadrature(const RadialProfile& p, double t,
                                       const QuadratureSettings& settings = {});

/// Radii r0 * ratio^k, k = 0..count-1.
struct GeometricGrid {
  double r0 = 1.0;
  double ratio = 2.0;
  int count = 8;

  /// Throws DomainError unless r0 > 0, ratio > 1 and count >= 8.
  void validate() const;
  std::vector<double> radii() const;
  /// Radii from index count/2 on: the window standing in for r -> infinity.
  std::vector<double> upper_half() const;

  /// Grid from lo to hi (inclusive) with count points.
  static GeometricGrid spanning(double lo, double hi, int count);
};

struct TypeAt {
  double rho = 0.0;
  double type = 0.0;
};

struct GrowthEstimate {
  double order = 0.0;
  std::optional<TypeAt> type_at;
  GeometricGrid grid;
  std::string method;
};

/// Order surrogate over the upper half of the grid. With r_m the first radius
/// of the window, returns the maximum over radii r in the later half of the
/// window of
///   (ln+ f+(r) - ln+ f+(r_m)) / (ln r - ln r_m),
/// clamped at 0. Its limsup as r -> infinity equals that of ln+ f+(r) / ln r,
/// and it is exact for c * r^rho on any grid.
GrowthEstimate estimate_order(const RealFunction& f, const GeometricGrid& grid);

/// Maximum of f+(r) / r^rho over the upper half of the grid.
GrowthEstimate estimate_type(const RealFunction& f, double rho,
                             const GeometricGrid& grid);

struct MeasureSplit {
  DiscreteMeasure inner;  // atoms with |w| <= R
  DiscreteMeasure outer;  // atoms with |w| > R
};

MeasureSplit split_measure(const DiscreteMeasure& m, double radius);

struct AngleRule {
  enum class Kind { fixed, equidistributed };
  Kind kind = Kind::fixed;
  double theta0 = 0.0;  // used by Kind::fixed

  static AngleRule fixed(double theta0 = 0.0) { return {Kind::fixed, theta0}; }
  static AngleRule equidistributed() { return {Kind::equidistributed, 0.0}; }
};

/// Unit atoms at radii (j / sigma)^(1 / rho), j = 1..count, so that
/// mu^rad(r_j) = j = sigma * r_j^rho. Equidistributed angles follow the
/// golden-angle sequence theta_j = 2*pi*frac(j / phi).
DiscreteMeasure synthesize_power_zeros(double sigma, double rho, int count,
                                       AngleRule rule = AngleRule::fixed());

}  // namespace hwgrowth
