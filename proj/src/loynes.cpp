#include "sbd/loynes.hpp"

#include <stdexcept>

namespace sbd {

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::EmptyRegeneration: return "empty_regeneration";
    case Certificate::DoublingFixpoint: return "doubling_fixpoint";
    case Certificate::NotConverged: return "not_converged";
  }
  return "?";
}

Configuration backward_iterate(const EventHistory& history, const PolicySpec& policy,
                               const SpaceSpec& space, std::uint64_t n) {
  return simulate_forward(Configuration{}, n, history, -static_cast<std::int64_t>(n),
                          policy, space);
}

namespace {

struct DepthRun {
  Configuration config;            // full final state
  std::int64_t latest_empty = 0;   // latest index -m (m >= 1) with the
                                   // (restricted) pre-event state empty; 0 = none
};

DepthRun run_depth(const EventHistory& history, const PolicySpec& policy,
                   const SpaceSpec& space, std::uint64_t depth,
                   const std::optional<Region>& window) {
  DepthRun run;
  std::uint64_t tracked = 0;  // atoms inside the window (whole mass if none)
  const std::int64_t start = -static_cast<std::int64_t>(depth);
  for (std::int64_t i = start; i <= -1; ++i) {
    if (i != start && tracked == 0) run.latest_empty = i;
    const Event& e = history.at(i);
    if (e.kind == EventKind::Plus) {
      run.config.add(e.location);
      if (!window || region_contains(*window, space, e.location)) ++tracked;
    } else {
      TieBreaker tie(e.tie_seed);
      if (auto target = select_target(policy, space, run.config, e.location, tie)) {
        run.config.remove(*target);
        if (!window || region_contains(*window, space, *target)) --tracked;
      }
    }
  }
  return run;
}

}  // namespace

StationarySample sample_minimal_stationary(const EventHistory& history,
                                           const PolicySpec& policy, const SpaceSpec& space,
                                           std::uint64_t max_depth,
                                           const std::optional<Region>& window) {
  if (max_depth < 1) throw std::invalid_argument("sample_minimal_stationary: max_depth >= 1");

  StationarySample sample;
  Configuration previous;  // restricted iterate at the previous ladder depth
  bool has_previous = false;

  for (std::uint64_t depth = 1;; depth *= 2) {
    DepthRun run = run_depth(history, policy, space, depth, window);
    Configuration restricted =
        window ? restrict_to_region(run.config, space, *window) : run.config;

    const bool regenerated =
        depth >= 2 && run.latest_empty != 0 &&
        static_cast<std::uint64_t>(-run.latest_empty) <= depth / 2;
    const bool fixpoint = has_previous && restricted == previous;
    sample.ladder.push_back({depth, run.latest_empty, regenerated, fixpoint});

    const bool last = depth * 2 > max_depth;
    if (last) {
      sample.depth_used = depth;
      sample.config = std::move(restricted);
      if (regenerated) {
        sample.certificate = Certificate::EmptyRegeneration;
        sample.regeneration_index = run.latest_empty;
      } else if (fixpoint) {
        sample.certificate = Certificate::DoublingFixpoint;
      } else {
        sample.certificate = Certificate::NotConverged;
      }
      return sample;
    }
    previous = std::move(restricted);
    has_previous = true;
  }
}

bool fixed_point_residual(const EventHistory& history, const PolicySpec& policy,
                          const SpaceSpec& space, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("fixed_point_residual: n >= 1");
  const Configuration lhs = backward_iterate(history, policy, space, n);

  // iterate over -n..-2, then apply event(-1) through an inline update
  // that does not go through step()
  Configuration rhs = simulate_forward(Configuration{}, n - 1, history,
                                       -static_cast<std::int64_t>(n), policy, space);
  const Event& last = history.at(-1);
  if (last.kind == EventKind::Plus) {
    rhs.add(last.location);
  } else {
    TieBreaker tie(last.tie_seed);
    if (auto target = select_target(policy, space, rhs, last.location, tie)) {
      rhs.remove(*target);
    }
  }
  return lhs == rhs;
}

std::optional<std::uint64_t> coupling_time(const Configuration& initial_a,
                                           const Configuration& initial_b,
                                           const EventHistory& history,
                                           std::int64_t start_index,
                                           const PolicySpec& policy, const SpaceSpec& space,
                                           std::uint64_t max_events) {
  Configuration a = initial_a;
  Configuration b = initial_b;
  if (a == b) return 0;
  for (std::uint64_t k = 0; k < max_events; ++k) {
    const Event& e = history.at(start_index + static_cast<std::int64_t>(k));
    step_in_place(a, e, policy, space);
    step_in_place(b, e, policy, space);
    if (a.total_mass() == b.total_mass() && a == b) return k + 1;
  }
  return std::nullopt;
}

}  // namespace sbd
