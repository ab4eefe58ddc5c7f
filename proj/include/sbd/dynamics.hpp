#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sbd/configuration.hpp"
#include "sbd/geometry.hpp"
#include "sbd/policies.hpp"

namespace sbd {

enum class EventKind { Plus, Minus };

/// One arrival: its type, its location, and the seed of the tie-break
/// randomness attached to it.
struct Event {
  EventKind kind;
  Point location;
  std::uint64_t tie_seed;
};

/// Law of the i.i.d. driving sequence. Either p_plus directly or the two
/// arrival rates (then p_plus = lambda_plus / (lambda_plus + lambda_minus)).
/// The simulator accepts any p_plus in (0,1); stability results concern
/// p_plus < 1/2.
struct StreamSpec {
  double p_plus = 0.3;
  double lambda_plus = 0.3;   // rates only matter for Palm time averages
  double lambda_minus = 0.7;
  LocationDensity density = LocationDensity::uniform();
  std::uint64_t seed = 0;

  static StreamSpec with_p_plus(double p, LocationDensity density, std::uint64_t seed);
  static StreamSpec with_rates(double lambda_plus, double lambda_minus,
                               LocationDensity density, std::uint64_t seed);
};

/// Index-addressable i.i.d. event sequence, indices over all of Z,
/// deterministic given the stream seed. Event i is derived counter-based
/// from (seed, i), so deep negative indices cost nothing; generated
/// events are cached in blocks of 2^16 with a small LRU.
class EventHistory {
 public:
  static constexpr std::int64_t kBlockSize = 1 << 16;

  EventHistory(SpaceSpec space, StreamSpec stream, std::size_t max_cached_blocks = 8);

  const Event& at(std::int64_t index) const;
  const SpaceSpec& space() const { return space_; }
  const StreamSpec& stream() const { return stream_; }

 private:
  struct Block {
    std::int64_t id;
    std::vector<Event> events;
  };

  Event generate(std::int64_t index) const;
  const Block& block_for(std::int64_t block_id) const;

  SpaceSpec space_;
  StreamSpec stream_;
  std::size_t max_cached_blocks_;
  mutable std::list<Block> cache_;  // front = most recent
  mutable std::unordered_map<std::int64_t, std::list<Block>::iterator> index_;
  mutable std::mutex mutex_;
};

const Event& event_at(const EventHistory& history, std::int64_t index);

/// One step of the evolution recursion: a plus adds its atom, a minus
/// removes the policy's target if there is one (a minus always disappears
/// itself). Mass changes by +1, -1 or 0.
void step_in_place(Configuration& config, const Event& event,
                   const PolicySpec& policy, const SpaceSpec& space);

Configuration step(Configuration config, const Event& event,
                   const PolicySpec& policy, const SpaceSpec& space);

/// Called after every step with the event index just applied, the event,
/// and the current configuration (a live reference: copy it only if you
/// need a snapshot).
using StepObserver = std::function<void(std::int64_t, const Event&, const Configuration&)>;

/// Applies events start_index .. start_index + n_events - 1.
Configuration simulate_forward(Configuration initial, std::uint64_t n_events,
                               const EventHistory& history, std::int64_t start_index,
                               const PolicySpec& policy, const SpaceSpec& space,
                               std::span<const StepObserver> observers = {});

/// Monte Carlo rendering of the Palm inversion: the continuous-time
/// stationary average of the per-step (post-event) values, obtained by
/// weighting each embedded-chain step with an independent exponential
/// holding time of rate lambda_plus + lambda_minus and normalizing by the
/// elapsed time. Throws on an empty trajectory.
double palm_time_average(std::span<const double> values, double lambda_plus,
                         double lambda_minus, rng::Stream& hold_rng);

}  // namespace sbd
