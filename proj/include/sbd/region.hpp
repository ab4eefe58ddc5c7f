#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "sbd/configuration.hpp"
#include "sbd/geometry.hpp"

#include "json.hpp"

namespace sbd {

struct BallRegion {
  Point center;
  double radius;
};

/// Axis-aligned box [lower_i, upper_i] per coordinate.
struct BoxRegion {
  Point lower;
  Point upper;
};

/// Neighborhood of the lower boundary: points with some coordinate < delta.
struct BoundaryStripRegion {
  double delta;
};

using Region = std::variant<BallRegion, BoxRegion, BoundaryStripRegion>;

bool region_contains(const Region& region, const SpaceSpec& space, const Point& x);

/// Membership in the region translated by `shift` (modulo lengths on the
/// torus, plainly otherwise).
bool region_contains_shifted(const Region& region, const SpaceSpec& space,
                             const Point& shift, const Point& x);

std::uint64_t count_in_region(const Configuration& config, const SpaceSpec& space,
                              const Region& region);

std::uint64_t count_in_region_shifted(const Configuration& config, const SpaceSpec& space,
                                      const Region& region, const Point& shift);

Configuration restrict_to_region(const Configuration& config, const SpaceSpec& space,
                                 const Region& region);

nlohmann::json region_to_json(const Region& region);
Region region_from_json(const nlohmann::json& j);

}  // namespace sbd
