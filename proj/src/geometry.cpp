#include "sbd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sbd {

namespace {

void check_dim(const SpaceSpec& space, const Point& x, const char* what) {
  if (static_cast<int>(x.size()) != space.dim()) {
    throw std::invalid_argument(std::string(what) + ": point dimension " +
                                std::to_string(x.size()) + " does not match space dimension " +
                                std::to_string(space.dim()));
  }
}

double wrap(double v, double length) {
  double r = std::fmod(v, length);
  if (r < 0.0) r += length;
  return r;
}

}  // namespace

SpaceSpec::SpaceSpec(SpaceKind kind, std::vector<double> lengths)
    : kind_(kind), lengths_(std::move(lengths)) {
  if (lengths_.empty()) throw std::invalid_argument("space: dimension must be >= 1");
  for (double l : lengths_) {
    if (!(l > 0.0)) throw std::invalid_argument("space: all lengths must be strictly positive");
  }
}

SpaceSpec SpaceSpec::torus(std::vector<double> lengths) {
  return SpaceSpec(SpaceKind::Torus, std::move(lengths));
}

SpaceSpec SpaceSpec::interval(double length) {
  return SpaceSpec(SpaceKind::Interval, {length});
}

SpaceSpec SpaceSpec::box(std::vector<double> lengths) {
  return SpaceSpec(SpaceKind::Box, std::move(lengths));
}

double SpaceSpec::volume() const {
  return std::accumulate(lengths_.begin(), lengths_.end(), 1.0, std::multiplies<>());
}

bool SpaceSpec::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const double l = lengths_[static_cast<std::size_t>(i)];
    if (kind_ == SpaceKind::Torus) {
      if (x[static_cast<std::size_t>(i)] < 0.0 || x[static_cast<std::size_t>(i)] >= l) return false;
    } else {
      if (x[static_cast<std::size_t>(i)] < 0.0 || x[static_cast<std::size_t>(i)] > l) return false;
    }
  }
  return true;
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SpaceKind::Torus: os << "torus"; break;
    case SpaceKind::Interval: os << "interval"; break;
    case SpaceKind::Box: os << "box"; break;
  }
  os << "(";
  for (std::size_t i = 0; i < lengths_.size(); ++i) {
    if (i) os << ",";
    os << lengths_[i];
  }
  os << ")";
  return os.str();
}

double distance(const SpaceSpec& space, const Point& x, const Point& y) {
  check_dim(space, x, "distance");
  check_dim(space, y, "distance");
  double sq = 0.0;
  for (int i = 0; i < space.dim(); ++i) {
    double diff = std::fabs(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]);
    if (space.kind() == SpaceKind::Torus) {
      const double l = space.length(i);
      diff = std::min(diff, l - diff);
    }
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

Point translate(const SpaceSpec& space, const Point& x, const Point& shift) {
  if (!space.is_group()) {
    throw std::invalid_argument("translate: space has no group structure (torus only)");
  }
  check_dim(space, x, "translate");
  check_dim(space, shift, "translate");
  Point out(x.size());
  for (int i = 0; i < space.dim(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = wrap(x[k] + shift[k], space.length(i));
  }
  return out;
}

bool leq_orthant(const Point& x, const Point& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("leq_orthant: dimension mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] < x[i]) return false;
  }
  return true;
}

LocationDensity LocationDensity::uniform() {
  LocationDensity d;
  d.kind_ = Kind::Uniform;
  return d;
}

LocationDensity LocationDensity::piecewise_constant(std::vector<double> breakpoints,
                                                    std::vector<double> weights) {
  if (breakpoints.size() < 2 || weights.size() + 1 != breakpoints.size()) {
    throw std::invalid_argument(
        "piecewise density: need k+1 breakpoints for k weights, k >= 1");
  }
  if (breakpoints.front() != 0.0) {
    throw std::invalid_argument("piecewise density: breakpoints must start at 0");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) {
      throw std::invalid_argument("piecewise density: breakpoints must be strictly increasing");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("piecewise density: negative weight");
    total += weights[i] * (breakpoints[i + 1] - breakpoints[i]);
  }
  if (!(total > 0.0)) throw std::invalid_argument("piecewise density: weights must not all be zero");

  LocationDensity d;
  d.kind_ = Kind::PiecewiseConstant;
  d.breakpoints_ = std::move(breakpoints);
  d.weights_ = std::move(weights);
  d.cumulative_.resize(d.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.weights_.size(); ++i) {
    acc += d.weights_[i] * (d.breakpoints_[i + 1] - d.breakpoints_[i]) / total;
    d.cumulative_[i] = acc;
  }
  d.cumulative_.back() = 1.0;
  return d;
}

void LocationDensity::validate_on(const SpaceSpec& space) const {
  if (kind_ == Kind::Uniform) return;
  if (space.kind() != SpaceKind::Interval) {
    throw std::invalid_argument("piecewise density: only valid on an interval space");
  }
  if (breakpoints_.back() != space.length(0)) {
    throw std::invalid_argument("piecewise density: breakpoints must end at the interval length");
  }
}

Point uniform_point(const SpaceSpec& space, rng::Stream& stream) {
  Point x(static_cast<std::size_t>(space.dim()));
  for (int i = 0; i < space.dim(); ++i) {
    x[static_cast<std::size_t>(i)] = stream.next_unit() * space.length(i);
  }
  return x;
}

Point sample_location(const SpaceSpec& space, const LocationDensity& density,
                      rng::Stream& stream) {
  density.validate_on(space);
  if (density.kind() == LocationDensity::Kind::Uniform) {
    return uniform_point(space, stream);
  }
  // segment chosen proportionally to weight * length, then uniform inside
  const double u = stream.next_unit();
  const auto& cum = density.cumulative_;
  const std::size_t k = static_cast<std::size_t>(
      std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
  const double a = density.breakpoints()[k];
  const double b = density.breakpoints()[k + 1];
  return Point{a + stream.next_unit() * (b - a)};
}

}  // namespace sbd
