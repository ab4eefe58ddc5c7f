#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbd/rng.hpp"

namespace sbd {

/// A location in the state space; coordinates live in the fundamental
/// domain [0, L_i) on the torus and [0, L_i] otherwise.
using Point = std::vector<double>;

enum class SpaceKind { Torus, Interval, Box };

/// Compact state space: a d-dimensional torus, the interval [0, T], or a
/// d-dimensional box. The interval is kept distinct from the 1-d box only
/// for configuration ergonomics; both have boundary, the torus does not.
class SpaceSpec {
 public:
  static SpaceSpec torus(std::vector<double> lengths);
  static SpaceSpec interval(double length);
  static SpaceSpec box(std::vector<double> lengths);

  SpaceKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lengths_.size()); }
  const std::vector<double>& lengths() const { return lengths_; }
  double length(int i) const { return lengths_[static_cast<std::size_t>(i)]; }
  /// Torus is the only implemented group.
  bool is_group() const { return kind_ == SpaceKind::Torus; }
  double volume() const;
  bool contains(const Point& x) const;
  std::string describe() const;

 private:
  SpaceSpec(SpaceKind kind, std::vector<double> lengths);
  SpaceKind kind_;
  std::vector<double> lengths_;
};

/// Sampling law of arrival locations. Uniform is the normalized volume
/// measure (Haar measure on the torus). PiecewiseConstant is only valid
/// on the interval.
class LocationDensity {
 public:
  enum class Kind { Uniform, PiecewiseConstant };

  static LocationDensity uniform();
  static LocationDensity piecewise_constant(std::vector<double> breakpoints,
                                            std::vector<double> weights);

  Kind kind() const { return kind_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Throws std::invalid_argument when the density is not valid on `space`.
  void validate_on(const SpaceSpec& space) const;

 private:
  LocationDensity() = default;
  Kind kind_ = Kind::Uniform;
  std::vector<double> breakpoints_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // cumulative segment masses, normalized

  friend Point sample_location(const SpaceSpec&, const LocationDensity&, rng::Stream&);
};

/// Metric of the space: coordinatewise wrap-around differences on the
/// torus, plain coordinate differences otherwise, combined by the
/// Euclidean norm. Throws on dimension mismatch.
double distance(const SpaceSpec& space, const Point& x, const Point& y);

/// Group translation, coordinatewise addition modulo lengths. Only the
/// torus carries a group structure; throws otherwise.
Point translate(const SpaceSpec& space, const Point& x, const Point& shift);

/// Coordinatewise partial order: true iff y_i >= x_i for every i.
bool leq_orthant(const Point& x, const Point& y);

/// Draws one location with law mu. Mutates only the stream handle.
Point sample_location(const SpaceSpec& space, const LocationDensity& density,
                      rng::Stream& stream);

/// Uniform point of the space (shorthand used by initial conditions and
/// region shifts).
Point uniform_point(const SpaceSpec& space, rng::Stream& stream);

}  // namespace sbd
