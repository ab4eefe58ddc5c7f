#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "sbd/configuration.hpp"
#include "sbd/geometry.hpp"
#include "sbd/rng.hpp"

namespace sbd {

enum class PolicyKind { LG, LR, LO, GG, GO };

PolicyKind policy_kind_from_string(const std::string& s);
std::string to_string(PolicyKind kind);

/// Which kill rule to apply, with its interaction radius (ignored by the
/// global policies GG and GO).
struct PolicySpec {
  PolicyKind kind = PolicyKind::LG;
  double radius = 1.0;
};

/// Distances equal within this absolute tolerance count as tied and go to
/// the random tie-break.
inline constexpr double kTieTolerance = 1e-12;

/// Deterministic randomness attached to one minus event. Two facets:
///  - next_unit(): a sequential uniform stream (same tie_seed, same
///    sequence of draws);
///  - location_unit(z): a uniform keyed by (tie_seed, z), stateless.
/// All random choices among candidate atoms use the keyed facet: picking
/// the admissible location with the smallest key is a uniform choice, and
/// because the keys are intrinsic to locations the choices made by two
/// configurations ordered by << automatically realize the monotone
/// coupling (if the bigger configuration's pick is available to the
/// smaller one, the smaller one picks the same atom).
class TieBreaker {
 public:
  explicit TieBreaker(std::uint64_t tie_seed)
      : seed_(tie_seed), stream_(rng::derive(tie_seed, 1)) {}

  std::uint64_t seed() const { return seed_; }
  double next_unit() { return stream_.next_unit(); }

  double location_unit(const Point& z) const;

 private:
  std::uint64_t seed_;
  rng::Stream stream_;
};

/// Throws std::invalid_argument when the policy cannot run on the space
/// (currently: GO on a torus).
void validate_policy_space(const PolicySpec& policy, const SpaceSpec& space);

/// The kill-target map t1(x, config): the atom removed when a minus
/// particle arrives at x, or nullopt (cemetery) when no atom is
/// admissible.
///   LG: closest atom at distance < radius;
///   LR: uniform among admissible locations in the radius-ball;
///   LO: closest atom at distance < radius with z >= x coordinatewise
///       (on the torus: fundamental-domain order, torus-metric ball);
///   GG: closest atom, no radius constraint;
///   GO: closest atom with z >= x, no radius constraint (interval/box).
/// Argmin ties within kTieTolerance are broken uniformly via `tie`.
std::optional<Point> select_target(const PolicySpec& policy, const SpaceSpec& space,
                                   const Configuration& config, const Point& x,
                                   const TieBreaker& tie);

/// Joint kill for a dominated pair (requires is_dominated(p, q)): returns
/// the targets removed from p and q by one minus at x such that removing
/// them preserves <<. If q's target is also an atom of p both sides
/// remove it; otherwise p removes its own policy-admissible atom (or
/// nothing). The marginal law of each side agrees with select_target.
std::pair<std::optional<Point>, std::optional<Point>> coupled_select(
    const PolicySpec& policy, const SpaceSpec& space, const Configuration& p,
    const Configuration& q, const Point& x, const TieBreaker& tie);

}  // namespace sbd
