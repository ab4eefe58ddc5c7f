#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbd/dynamics.hpp"
#include "sbd/region.hpp"

namespace sbd {

enum class Certificate { EmptyRegeneration, DoublingFixpoint, NotConverged };

std::string to_string(Certificate c);

/// Output of the backward-coupling sampler. EmptyRegeneration means the
/// trajectory from empty at -depth_used was empty again at
/// regeneration_index, so the backward iterates are identical for every
/// depth between -regeneration_index and depth_used. DoublingFixpoint
/// (multiset equality with the half-depth iterate) is heuristic.
struct StationarySample {
  Configuration config;                     // windowed restriction if a window was given
  std::uint64_t depth_used = 0;
  Certificate certificate = Certificate::NotConverged;
  std::int64_t regeneration_index = 0;      // meaningful for EmptyRegeneration

  /// One entry per ladder depth: the depth, the latest index at which the
  /// (restricted) trajectory was empty (0 = never), and whether the
  /// doubling rules held there. Kept for certificate diagnostics.
  struct DepthTrace {
    std::uint64_t depth;
    std::int64_t latest_empty_index;  // 0 when the run never emptied
    bool empty_regeneration;
    bool equals_previous;
  };
  std::vector<DepthTrace> ladder;
};

/// The backward iterate: the configuration reached from empty over event
/// indices -n .. -1. n = 0 gives the empty configuration.
Configuration backward_iterate(const EventHistory& history, const PolicySpec& policy,
                               const SpaceSpec& space, std::uint64_t n);

/// Runs the doubling ladder n = 1, 2, 4, ... up to the largest power of
/// two <= max_depth and returns the deepest iterate with its certificate:
///   - EmptyRegeneration when the deepest run was empty at some index -m
///     with m <= depth/2 (the iterates are then constant on [m, depth]);
///   - else DoublingFixpoint when the deepest iterate equals the
///     half-depth iterate as a multiset (heuristic);
///   - else NotConverged.
/// Certificates are evaluated at the final depth only: stopping at the
/// first certifying doubling would return shallow iterates whose ensemble
/// is not stationary. With a window, the trajectory still evolves on the
/// whole space but emptiness, equality and the returned configuration are
/// all restricted to the window.
StationarySample sample_minimal_stationary(const EventHistory& history,
                                           const PolicySpec& policy, const SpaceSpec& space,
                                           std::uint64_t max_depth,
                                           const std::optional<Region>& window = std::nullopt);

/// Pathwise check of the stationary fixed-point recursion at depth n:
/// the iterate over -n..-1 must equal one final update applied to the
/// iterate over -n..-2. The final update is applied through an
/// independent inline path so drift in either implementation shows up.
bool fixed_point_residual(const EventHistory& history, const PolicySpec& policy,
                          const SpaceSpec& space, std::uint64_t n);

/// Evolves both initial conditions on the same events and returns the
/// number of steps until the two configurations first coincide as
/// multisets (0 when equal at the start), or nullopt if they have not
/// met within max_events.
std::optional<std::uint64_t> coupling_time(const Configuration& initial_a,
                                           const Configuration& initial_b,
                                           const EventHistory& history,
                                           std::int64_t start_index,
                                           const PolicySpec& policy, const SpaceSpec& space,
                                           std::uint64_t max_events);

}  // namespace sbd
