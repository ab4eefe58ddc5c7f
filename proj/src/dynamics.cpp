#include "sbd/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace sbd {

StreamSpec StreamSpec::with_p_plus(double p, LocationDensity density, std::uint64_t seed) {
  // closed range: the degenerate ends give the all-plus / all-minus
  // streams used as controls
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("stream: p_plus must lie in [0,1]");
  }
  StreamSpec s;
  s.p_plus = p;
  s.lambda_plus = p;
  s.lambda_minus = 1.0 - p;
  s.density = std::move(density);
  s.seed = seed;
  return s;
}

StreamSpec StreamSpec::with_rates(double lambda_plus, double lambda_minus,
                                  LocationDensity density, std::uint64_t seed) {
  if (!(lambda_plus > 0.0) || !(lambda_minus > 0.0)) {
    throw std::invalid_argument("stream: rates must be positive");
  }
  StreamSpec s;
  s.lambda_plus = lambda_plus;
  s.lambda_minus = lambda_minus;
  s.p_plus = lambda_plus / (lambda_plus + lambda_minus);
  s.density = std::move(density);
  s.seed = seed;
  return s;
}

EventHistory::EventHistory(SpaceSpec space, StreamSpec stream, std::size_t max_cached_blocks)
    : space_(std::move(space)),
      stream_(std::move(stream)),
      max_cached_blocks_(max_cached_blocks == 0 ? 1 : max_cached_blocks) {
  stream_.density.validate_on(space_);
}

Event EventHistory::generate(std::int64_t index) const {
  rng::Stream s(rng::derive(stream_.seed, static_cast<std::uint64_t>(index)));
  Event e;
  e.kind = s.next_unit() < stream_.p_plus ? EventKind::Plus : EventKind::Minus;
  e.location = sample_location(space_, stream_.density, s);
  e.tie_seed = s.next_u64();
  return e;
}

const EventHistory::Block& EventHistory::block_for(std::int64_t block_id) const {
  if (auto it = index_.find(block_id); it != index_.end()) {
    cache_.splice(cache_.begin(), cache_, it->second);
    return *it->second;
  }
  Block block;
  block.id = block_id;
  block.events.reserve(static_cast<std::size_t>(kBlockSize));
  const std::int64_t base = block_id * kBlockSize;
  for (std::int64_t k = 0; k < kBlockSize; ++k) block.events.push_back(generate(base + k));
  cache_.push_front(std::move(block));
  index_[block_id] = cache_.begin();
  if (cache_.size() > max_cached_blocks_) {
    index_.erase(cache_.back().id);
    cache_.pop_back();
  }
  return cache_.front();
}

const Event& EventHistory::at(std::int64_t index) const {
  // floor division so negative indices land in the right block
  std::int64_t block_id = index / kBlockSize;
  if (index % kBlockSize != 0 && index < 0) --block_id;
  const std::int64_t offset = index - block_id * kBlockSize;
  std::scoped_lock lock(mutex_);
  return block_for(block_id).events[static_cast<std::size_t>(offset)];
}

const Event& event_at(const EventHistory& history, std::int64_t index) {
  return history.at(index);
}

void step_in_place(Configuration& config, const Event& event,
                   const PolicySpec& policy, const SpaceSpec& space) {
  if (event.kind == EventKind::Plus) {
    config.add(event.location);
    return;
  }
  TieBreaker tie(event.tie_seed);
  if (auto target = select_target(policy, space, config, event.location, tie)) {
    config.remove(*target);
  }
}

Configuration step(Configuration config, const Event& event,
                   const PolicySpec& policy, const SpaceSpec& space) {
  step_in_place(config, event, policy, space);
  return config;
}

Configuration simulate_forward(Configuration initial, std::uint64_t n_events,
                               const EventHistory& history, std::int64_t start_index,
                               const PolicySpec& policy, const SpaceSpec& space,
                               std::span<const StepObserver> observers) {
  for (std::uint64_t k = 0; k < n_events; ++k) {
    const std::int64_t i = start_index + static_cast<std::int64_t>(k);
    const Event& e = history.at(i);
    step_in_place(initial, e, policy, space);
    for (const auto& obs : observers) obs(i, e, initial);
  }
  return initial;
}

double palm_time_average(std::span<const double> values, double lambda_plus,
                         double lambda_minus, rng::Stream& hold_rng) {
  if (values.empty()) {
    throw std::invalid_argument("palm_time_average: empty trajectory");
  }
  const double rate = lambda_plus + lambda_minus;
  if (!(rate > 0.0)) throw std::invalid_argument("palm_time_average: rates must be positive");
  double weighted = 0.0;
  double total = 0.0;
  for (double v : values) {
    const double hold = hold_rng.next_exponential(rate);
    weighted += hold * v;
    total += hold;
  }
  return weighted / total;
}

}  // namespace sbd
