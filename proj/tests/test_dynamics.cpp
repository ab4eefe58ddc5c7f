#include "sbd/dynamics.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"

using namespace sbd;

namespace {

EventHistory make_history(double p_plus, std::uint64_t seed,
                          SpaceSpec space = SpaceSpec::torus({10.0})) {
  return EventHistory(space, StreamSpec::with_p_plus(p_plus, LocationDensity::uniform(), seed));
}

}  // namespace

TEST_CASE("events are deterministic in (seed, index)") {
  const EventHistory history = make_history(0.3, 99);
  const EventHistory again = make_history(0.3, 99);
  for (std::int64_t i : {-100000L, -65537L, -65536L, -1L, 0L, 1L, 65535L, 65536L, 70000L}) {
    const Event& a = history.at(i);
    const Event& b = again.at(i);
    REQUIRE(a.kind == b.kind);
    REQUIRE(a.location == b.location);
    REQUIRE(a.tie_seed == b.tie_seed);
    // repeated queries hit the cache and must agree with themselves
    REQUIRE(history.at(i).tie_seed == a.tie_seed);
  }
}

TEST_CASE("event_at covers deep negative indices without generating the gap") {
  const EventHistory history = make_history(0.3, 7);
  const Event& deep = event_at(history, -(static_cast<std::int64_t>(1) << 40));
  CHECK((deep.kind == EventKind::Plus || deep.kind == EventKind::Minus));
  CHECK(deep.location.size() == 1);
}

TEST_CASE("degenerate streams produce a single event kind") {
  const EventHistory all_plus = make_history(1.0, 5);
  const EventHistory all_minus = make_history(0.0, 5);
  for (std::int64_t i = -200; i < 200; ++i) {
    REQUIRE(all_plus.at(i).kind == EventKind::Plus);
    REQUIRE(all_minus.at(i).kind == EventKind::Minus);
  }
}

TEST_CASE("the plus fraction follows the law of large numbers") {
  const EventHistory history = make_history(0.3, 8);
  std::uint64_t plus = 0;
  const std::int64_t n = 1000000;
  for (std::int64_t i = 0; i < n; ++i) {
    if (history.at(i).kind == EventKind::Plus) ++plus;
  }
  CHECK(static_cast<double>(plus) / static_cast<double>(n) ==
        doctest::Approx(0.3).epsilon(0.00667));  // +-0.002 absolute
}

TEST_CASE("step applies one arrival") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const PolicySpec lg{PolicyKind::LG, 1.0};

  const Configuration born = step(Configuration{}, {EventKind::Plus, {4.2}, 0}, lg, interval);
  CHECK(born == Configuration({{4.2}}));

  const Configuration still_empty =
      step(Configuration{}, {EventKind::Minus, {4.2}, 0}, lg, interval);
  CHECK(still_empty.empty());

  const Configuration after =
      step(Configuration({{2.0}, {3.5}}), {EventKind::Minus, {3.0}, 0}, lg, interval);
  CHECK(after == Configuration({{2.0}}));
}

TEST_CASE("mass moves by one, matching the event type") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const PolicySpec policy{PolicyKind::LG, 1.0};
  const EventHistory history = make_history(0.4, 21);
  Configuration state;
  for (std::int64_t i = 0; i < 20000; ++i) {
    const Event& e = history.at(i);
    const std::uint64_t before = state.total_mass();
    TieBreaker tie(e.tie_seed);
    const bool killable =
        select_target(policy, torus, state, e.location, tie).has_value();
    step_in_place(state, e, policy, torus);
    const auto delta =
        static_cast<std::int64_t>(state.total_mass()) - static_cast<std::int64_t>(before);
    if (e.kind == EventKind::Plus) {
      REQUIRE(delta == 1);
    } else {
      REQUIRE(delta == (killable ? -1 : 0));
    }
    REQUIRE(std::llabs(delta) <= 1);  // trajectory mass is 1-Lipschitz
  }
}

TEST_CASE("simulate_forward basics") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const PolicySpec policy{PolicyKind::LG, 1.0};
  const EventHistory history = make_history(0.3, 33);

  SUBCASE("zero events returns the initial configuration") {
    const Configuration initial({{1.0}, {2.0}});
    CHECK(simulate_forward(initial, 0, history, 0, policy, torus) == initial);
  }
  SUBCASE("a pure birth stream accumulates every arrival") {
    const EventHistory births = make_history(1.0, 34);
    const Configuration final_state =
        simulate_forward(Configuration{}, 500, births, 0, policy, torus);
    CHECK(final_state.total_mass() == 500);
  }
  SUBCASE("identical runs coincide") {
    const Configuration a = simulate_forward(Configuration{}, 5000, history, -2500, policy, torus);
    const Configuration b = simulate_forward(Configuration{}, 5000, history, -2500, policy, torus);
    CHECK(a == b);
  }
  SUBCASE("observers see every step") {
    std::vector<std::int64_t> indices;
    const std::vector<StepObserver> observers{
        [&](std::int64_t i, const Event&, const Configuration&) { indices.push_back(i); }};
    simulate_forward(Configuration{}, 10, history, 5, policy, torus, observers);
    REQUIRE(indices.size() == 10);
    CHECK(indices.front() == 5);
    CHECK(indices.back() == 14);
  }
}

TEST_CASE("dominated pairs stay dominated under the shared dynamics") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  for (PolicyKind kind : {PolicyKind::LG, PolicyKind::LR, PolicyKind::LO}) {
    const PolicySpec policy{kind, 1.0};
    rng::Stream stream(rng::derive(3131, static_cast<std::uint64_t>(kind)));
    for (int pair = 0; pair < 10; ++pair) {
      Configuration q;
      for (int k = 0; k < 12; ++k) q.add(uniform_point(torus, stream));
      Configuration p;
      for (const auto& atom : q.atoms()) {
        if (stream.next_unit() < 0.5) p.add(atom.location);
      }
      const EventHistory history = make_history(0.3, stream.next_u64());
      for (std::int64_t i = 0; i < 10000; ++i) {
        const Event& e = history.at(i);
        step_in_place(p, e, policy, torus);
        step_in_place(q, e, policy, torus);
        REQUIRE(is_dominated(p, q));
      }
    }
  }
}

TEST_CASE("GG mass is the reflected random walk of the event signs") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const PolicySpec gg{PolicyKind::GG, 1.0};
  const EventHistory history = make_history(0.45, 55, interval);
  Configuration state;
  std::int64_t walk = 0;
  for (std::int64_t i = 0; i < 100000; ++i) {
    const Event& e = history.at(i);
    step_in_place(state, e, gg, interval);
    walk = std::max<std::int64_t>(walk + (e.kind == EventKind::Plus ? 1 : -1), 0);
    REQUIRE(state.total_mass() == static_cast<std::uint64_t>(walk));
  }
}

TEST_CASE("palm_time_average weights by exponential holding times") {
  rng::Stream rng(77);
  SUBCASE("constants pass through") {
    const std::vector<double> values(1000, 3.25);
    CHECK(palm_time_average(values, 0.3, 0.7, rng) == doctest::Approx(3.25).epsilon(1e-12));
  }
  SUBCASE("two equal steps average to themselves") {
    const std::vector<double> values = {1.5, 1.5};
    CHECK(palm_time_average(values, 1.0, 1.0, rng) == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("alternating values average to one half") {
    std::vector<double> values;
    values.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) values.push_back(i % 2 == 0 ? 0.0 : 1.0);
    CHECK(palm_time_average(values, 0.3, 0.7, rng) == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("an empty trajectory is rejected") {
    CHECK_THROWS_AS(palm_time_average({}, 0.3, 0.7, rng), std::invalid_argument);
  }
}

TEST_CASE("stream specs validate their parameters") {
  CHECK_THROWS_AS(StreamSpec::with_p_plus(-0.1, LocationDensity::uniform(), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(StreamSpec::with_p_plus(1.1, LocationDensity::uniform(), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(StreamSpec::with_rates(0.0, 1.0, LocationDensity::uniform(), 0),
                  std::invalid_argument);
  const StreamSpec rates = StreamSpec::with_rates(1.0, 3.0, LocationDensity::uniform(), 0);
  CHECK(rates.p_plus == doctest::Approx(0.25));
}
