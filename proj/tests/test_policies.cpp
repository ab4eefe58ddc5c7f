#include "sbd/policies.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

#include "doctest.h"

using namespace sbd;

namespace {

// Independent reference: its own admissibility scan, its own wrap
// arithmetic, its own argmin and tie handling.
std::optional<Point> reference_select(const PolicySpec& policy, const SpaceSpec& space,
                                      const Configuration& config, const Point& x,
                                      const TieBreaker& tie) {
  auto dist = [&](const Point& z) {
    double sq = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      double d = std::fabs(z[i] - x[i]);
      if (space.kind() == SpaceKind::Torus) {
        d = std::min(d, space.lengths()[i] - d);
      }
      sq += d * d;
    }
    return std::sqrt(sq);
  };
  auto admissible = [&](const Point& z) {
    if (policy.kind == PolicyKind::LO || policy.kind == PolicyKind::GO) {
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] < x[i]) return false;
      }
    }
    if (policy.kind != PolicyKind::GG && policy.kind != PolicyKind::GO) {
      if (!(dist(z) < policy.radius)) return false;
    }
    return true;
  };

  std::vector<Point> candidates;
  for (const auto& atom : config.atoms()) {
    if (admissible(atom.location)) candidates.push_back(atom.location);
  }
  if (candidates.empty()) return std::nullopt;

  if (policy.kind != PolicyKind::LR) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : candidates) best = std::min(best, dist(z));
    std::vector<Point> tied;
    for (const auto& z : candidates) {
      if (dist(z) <= best + 1e-12) tied.push_back(z);
    }
    candidates = tied;
  }
  const Point* pick = nullptr;
  double best_key = std::numeric_limits<double>::infinity();
  for (const auto& z : candidates) {
    const double key = tie.location_unit(z);
    if (key < best_key) {
      best_key = key;
      pick = &z;
    }
  }
  return *pick;
}

Configuration random_config(const SpaceSpec& space, rng::Stream& stream, int max_atoms) {
  Configuration config;
  const int n = static_cast<int>(stream.next_below(static_cast<std::uint64_t>(max_atoms) + 1));
  for (int k = 0; k < n; ++k) {
    const Point x = uniform_point(space, stream);
    config.add(x);
    if (stream.next_unit() < 0.1) config.add(x);
  }
  return config;
}

}  // namespace

TEST_CASE("select_target follows each policy definition") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const TieBreaker tie(7);

  SUBCASE("LG takes the closest atom strictly inside the ball") {
    const Configuration config({{2.0}, {3.5}});
    const auto target = select_target({PolicyKind::LG, 1.0}, interval, config, {3.0}, tie);
    REQUIRE(target.has_value());
    CHECK(*target == Point{3.5});  // 2.0 sits at distance exactly 1
  }
  SUBCASE("LG returns nothing when the ball is empty") {
    const Configuration config({{5.0}});
    CHECK_FALSE(select_target({PolicyKind::LG, 1.0}, interval, config, {3.0}, tie).has_value());
    CHECK_FALSE(
        select_target({PolicyKind::LG, 1.0}, interval, Configuration{}, {3.0}, tie).has_value());
  }
  SUBCASE("LR picks each admissible atom uniformly") {
    const Configuration config({{2.0}, {2.5}});
    int first = 0;
    const int trials = 100000;
    for (int s = 0; s < trials; ++s) {
      const TieBreaker t(static_cast<std::uint64_t>(s));
      const auto target = select_target({PolicyKind::LR, 1.0}, interval, config, {2.2}, t);
      REQUIRE(target.has_value());
      if (*target == Point{2.0}) ++first;
    }
    CHECK(static_cast<double>(first) / trials == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("LO ignores atoms below x") {
    const Configuration config({{2.5}, {3.4}});
    const auto target = select_target({PolicyKind::LO, 1.0}, interval, config, {2.6}, tie);
    REQUIRE(target.has_value());
    CHECK(*target == Point{3.4});
  }
  SUBCASE("GG has no radius constraint") {
    const Configuration config({{0.5}, {9.0}});
    const auto target = select_target({PolicyKind::GG, 1.0}, interval, config, {5.0}, tie);
    REQUIRE(target.has_value());
    CHECK(*target == Point{9.0});  // distance 4.0 beats 4.5
  }
  SUBCASE("GO takes the nearest atom of the upper orthant") {
    const SpaceSpec box = SpaceSpec::box({1.0, 1.0});
    const Configuration config({{0.2, 0.3}, {0.6, 0.7}});
    const auto target = select_target({PolicyKind::GO, 1.0}, box, config, {0.5, 0.5}, tie);
    REQUIRE(target.has_value());
    CHECK(*target == Point{0.6, 0.7});
  }
}

TEST_CASE("a minus arriving exactly on an atom kills it under one-sided policies") {
  const SpaceSpec box = SpaceSpec::box({1.0, 1.0});
  const Configuration config({{0.5, 0.5}});
  const TieBreaker tie(1);
  const auto go = select_target({PolicyKind::GO, 1.0}, box, config, {0.5, 0.5}, tie);
  REQUIRE(go.has_value());
  CHECK(*go == Point{0.5, 0.5});
  const auto lo = select_target({PolicyKind::LO, 1.0}, box, config, {0.5, 0.5}, tie);
  REQUIRE(lo.has_value());
  CHECK(*lo == Point{0.5, 0.5});
}

TEST_CASE("GO is rejected on the torus") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const TieBreaker tie(1);
  CHECK_THROWS_AS(select_target({PolicyKind::GO, 1.0}, torus, Configuration{}, {1.0}, tie),
                  std::invalid_argument);
}

TEST_CASE("LO on the torus uses the forward fundamental-domain order") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const TieBreaker tie(3);
  // atom behind x is not admissible even though it is close
  const Configuration behind({{2.4}});
  CHECK_FALSE(select_target({PolicyKind::LO, 1.0}, torus, behind, {2.5}, tie).has_value());
  const Configuration seam({{9.8}});
  const auto target = select_target({PolicyKind::LO, 1.0}, torus, seam, {9.2}, tie);
  REQUIRE(target.has_value());
  CHECK(*target == Point{9.8});
  // the wrap ball reaches 9.8 from just past 0 and the order allows it
  const auto wrapped = select_target({PolicyKind::LO, 1.0}, torus, seam, {0.1}, tie);
  REQUIRE(wrapped.has_value());
  CHECK(*wrapped == Point{9.8});
  // from above the atom the order excludes it despite the tiny distance
  CHECK_FALSE(select_target({PolicyKind::LO, 1.0}, torus, seam, {9.9}, tie).has_value());
}

TEST_CASE("select_target matches the brute-force reference") {
  struct Setup {
    PolicySpec policy;
    SpaceSpec space;
  };
  const Setup setups[] = {
      {{PolicyKind::LG, 1.0}, SpaceSpec::torus({10.0})},
      {{PolicyKind::LR, 1.0}, SpaceSpec::torus({10.0})},
      {{PolicyKind::LO, 1.0}, SpaceSpec::interval(10.0)},
      {{PolicyKind::LO, 1.0}, SpaceSpec::torus({10.0})},
      {{PolicyKind::LG, 0.75}, SpaceSpec::box({2.0, 2.0})},
      {{PolicyKind::GG, 1.0}, SpaceSpec::interval(10.0)},
      {{PolicyKind::GO, 1.0}, SpaceSpec::box({1.0, 1.0})},
  };
  for (const auto& setup : setups) {
    rng::Stream stream(rng::derive(505, static_cast<std::uint64_t>(setup.policy.kind)));
    for (int i = 0; i < 20000; ++i) {
      const Configuration config = random_config(setup.space, stream, 12);
      const Point x = uniform_point(setup.space, stream);
      const TieBreaker tie(stream.next_u64());
      const auto got = select_target(setup.policy, setup.space, config, x, tie);
      const auto expected = reference_select(setup.policy, setup.space, config, x, tie);
      REQUIRE(got == expected);
    }
  }
}

TEST_CASE("select_target is deterministic in its inputs") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  rng::Stream stream(606);
  for (int i = 0; i < 1000; ++i) {
    const Configuration config = random_config(torus, stream, 10);
    const Point x = uniform_point(torus, stream);
    const std::uint64_t seed = stream.next_u64();
    const TieBreaker tie_a(seed);
    const TieBreaker tie_b(seed);
    REQUIRE(select_target({PolicyKind::LR, 1.0}, torus, config, x, tie_a) ==
            select_target({PolicyKind::LR, 1.0}, torus, config, x, tie_b));
  }
}

TEST_CASE("returned targets respect the strict radius") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  rng::Stream stream(707);
  for (PolicyKind kind : {PolicyKind::LG, PolicyKind::LR, PolicyKind::LO}) {
    const PolicySpec policy{kind, 1.0};
    for (int i = 0; i < 5000; ++i) {
      const Configuration config = random_config(torus, stream, 10);
      const Point x = uniform_point(torus, stream);
      const TieBreaker tie(stream.next_u64());
      if (const auto target = select_target(policy, torus, config, x, tie)) {
        REQUIRE(distance(torus, x, *target) < policy.radius);
      }
    }
  }
}

TEST_CASE("LR selects each of three atoms a third of the time") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const Configuration config({{2.0}, {2.4}, {2.8}});
  std::map<double, int> counts;
  const int trials = 100000;
  for (int s = 0; s < trials; ++s) {
    const TieBreaker tie(rng::derive(9000, static_cast<std::uint64_t>(s)));
    const auto target = select_target({PolicyKind::LR, 1.0}, interval, config, {2.4}, tie);
    REQUIRE(target.has_value());
    counts[(*target)[0]] += 1;
  }
  for (const auto& [loc, count] : counts) {
    CHECK(static_cast<double>(count) / trials == doctest::Approx(1.0 / 3).epsilon(0.03));
  }
}

TEST_CASE("exact distance ties are broken uniformly") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const Configuration config({{2.0}, {4.0}});  // both at distance 1 from x = 3
  int low = 0;
  const int trials = 100000;
  for (int s = 0; s < trials; ++s) {
    const TieBreaker tie(rng::derive(1234, static_cast<std::uint64_t>(s)));
    const auto target = select_target({PolicyKind::LG, 1.5}, interval, config, {3.0}, tie);
    REQUIRE(target.has_value());
    if ((*target)[0] == 2.0) ++low;
  }
  CHECK(static_cast<double>(low) / trials == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("coupled_select follows the joint-kill construction") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const Configuration p({{2.0}});
  const Configuration q({{2.0}, {2.5}});
  bool saw_joint = false, saw_split = false;
  for (int s = 0; s < 200; ++s) {
    const TieBreaker tie(static_cast<std::uint64_t>(s));
    const auto [tp, tq] = coupled_select({PolicyKind::LR, 1.0}, interval, p, q, {2.2}, tie);
    REQUIRE(tp.has_value());
    REQUIRE(tq.has_value());
    CHECK(*tp == Point{2.0});  // p has only 2.0 to give
    if (*tq == Point{2.0}) {
      // when q removes a point of p, both remove the same point
      CHECK(*tp == *tq);
      saw_joint = true;
    } else {
      CHECK(*tq == Point{2.5});
      saw_split = true;
    }
  }
  CHECK(saw_joint);
  CHECK(saw_split);
}

TEST_CASE("coupled_select with an empty lower configuration") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const TieBreaker tie(5);
  const auto [tp, tq] =
      coupled_select({PolicyKind::LG, 1.0}, interval, Configuration{},
                     Configuration({{2.0}}), {2.2}, tie);
  CHECK_FALSE(tp.has_value());
  REQUIRE(tq.has_value());
  CHECK(*tq == Point{2.0});
}

TEST_CASE("coupled_select requires domination") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const TieBreaker tie(5);
  CHECK_THROWS_AS(coupled_select({PolicyKind::LG, 1.0}, interval, Configuration({{1.0}}),
                                 Configuration({{2.0}}), {2.2}, tie),
                  std::invalid_argument);
}

TEST_CASE("coupled kills preserve domination and marginals") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  for (PolicyKind kind : {PolicyKind::LG, PolicyKind::LR, PolicyKind::LO}) {
    const PolicySpec policy{kind, 1.0};
    rng::Stream stream(rng::derive(808, static_cast<std::uint64_t>(kind)));
    for (int i = 0; i < 30000; ++i) {
      Configuration q = random_config(torus, stream, 10);
      Configuration p;
      for (const auto& atom : q.atoms()) {
        for (std::uint32_t m = 0; m < atom.multiplicity; ++m) {
          if (stream.next_unit() < 0.5) p.add(atom.location);
        }
      }
      const Point x = uniform_point(torus, stream);
      const TieBreaker tie(stream.next_u64());
      const auto [tp, tq] = coupled_select(policy, torus, p, q, x, tie);

      // marginals agree with the single-configuration selector
      REQUIRE(tp == select_target(policy, torus, p, x, tie));
      REQUIRE(tq == select_target(policy, torus, q, x, tie));
      // if q's pick lives in p, both kill it
      if (tq && p.multiplicity_of(*tq) > 0) REQUIRE(tp == tq);

      if (tp) p.remove(*tp);
      if (tq) q.remove(*tq);
      REQUIRE(is_dominated(p, q));
    }
  }
}
