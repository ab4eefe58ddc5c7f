#include "sbd/region.hpp"

#include <cmath>
#include <stdexcept>

namespace sbd {

namespace {

double wrap(double v, double length) {
  double r = std::fmod(v, length);
  if (r < 0.0) r += length;
  return r;
}

}  // namespace

bool region_contains(const Region& region, const SpaceSpec& space, const Point& x) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BallRegion>) {
          return distance(space, r.center, x) < r.radius;
        } else if constexpr (std::is_same_v<T, BoxRegion>) {
          if (x.size() != r.lower.size()) {
            throw std::invalid_argument("region: dimension mismatch");
          }
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < r.lower[i] || x[i] > r.upper[i]) return false;
          }
          return true;
        } else {
          for (double c : x) {
            if (c < r.delta) return true;
          }
          return false;
        }
      },
      region);
}

bool region_contains_shifted(const Region& region, const SpaceSpec& space,
                             const Point& shift, const Point& x) {
  // pull x back by the shift and test against the base region
  Point back(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    back[i] = x[i] - shift[i];
    if (space.kind() == SpaceKind::Torus) {
      back[i] = wrap(back[i], space.length(static_cast<int>(i)));
    }
  }
  return region_contains(region, space, back);
}

std::uint64_t count_in_region(const Configuration& config, const SpaceSpec& space,
                              const Region& region) {
  std::uint64_t n = 0;
  for (const auto& atom : config.atoms()) {
    if (region_contains(region, space, atom.location)) n += atom.multiplicity;
  }
  return n;
}

std::uint64_t count_in_region_shifted(const Configuration& config, const SpaceSpec& space,
                                      const Region& region, const Point& shift) {
  std::uint64_t n = 0;
  for (const auto& atom : config.atoms()) {
    if (region_contains_shifted(region, space, shift, atom.location)) n += atom.multiplicity;
  }
  return n;
}

Configuration restrict_to_region(const Configuration& config, const SpaceSpec& space,
                                 const Region& region) {
  Configuration out;
  for (const auto& atom : config.atoms()) {
    if (region_contains(region, space, atom.location)) {
      for (std::uint32_t k = 0; k < atom.multiplicity; ++k) out.add(atom.location);
    }
  }
  return out;
}

nlohmann::json region_to_json(const Region& region) {
  return std::visit(
      [](const auto& r) -> nlohmann::json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BallRegion>) {
          return {{"kind", "ball"}, {"center", r.center}, {"radius", r.radius}};
        } else if constexpr (std::is_same_v<T, BoxRegion>) {
          return {{"kind", "box"}, {"lower", r.lower}, {"upper", r.upper}};
        } else {
          return {{"kind", "boundary_strip"}, {"delta", r.delta}};
        }
      },
      region);
}

Region region_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ball") {
    return BallRegion{j.at("center").get<Point>(), j.at("radius").get<double>()};
  }
  if (kind == "box") {
    BoxRegion r{j.at("lower").get<Point>(), j.at("upper").get<Point>()};
    if (r.lower.size() != r.upper.size()) {
      throw std::invalid_argument("region: lower/upper dimension mismatch");
    }
    return r;
  }
  if (kind == "boundary_strip") {
    return BoundaryStripRegion{j.at("delta").get<double>()};
  }
  throw std::invalid_argument("region: unknown kind " + kind);
}

}  // namespace sbd
