#include "sbd/stats.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

using namespace sbd;

TEST_CASE("one-sample KS accepts uniforms and rejects shifted draws") {
  rng::Stream stream(1);
  std::vector<double> uniform, shifted;
  for (int i = 0; i < 20000; ++i) {
    const double u = stream.next_unit();
    uniform.push_back(u * 10.0);
    shifted.push_back(std::pow(u, 1.3) * 10.0);
  }
  CHECK(ks_uniform_pvalue(uniform, 0.0, 10.0) >= 0.01);
  CHECK(ks_uniform_pvalue(shifted, 0.0, 10.0) < 1e-6);
}

TEST_CASE("two-sample KS separates distinct laws") {
  rng::Stream stream(2);
  std::vector<double> a, b, c;
  for (int i = 0; i < 5000; ++i) {
    a.push_back(stream.next_unit());
    b.push_back(stream.next_unit());
    c.push_back(stream.next_unit() * 0.8);
  }
  CHECK(ks_two_sample_pvalue(a, b) >= 0.01);
  CHECK(ks_two_sample_pvalue(a, c) < 1e-6);
}

TEST_CASE("empty_ball_probability counts vacant samples") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const std::vector<Configuration> all_empty(50);
  const Estimate est = empty_ball_probability(all_empty, torus, {1.0}, 1.0);
  CHECK(est.value == 1.0);
  CHECK(est.std_error == 0.0);
  CHECK_THROWS_AS(empty_ball_probability({}, torus, {1.0}, 1.0), std::invalid_argument);

  const std::vector<Configuration> mixed = {Configuration({{1.2}}), Configuration({{5.0}})};
  CHECK(empty_ball_probability(mixed, torus, {1.0}, 1.0).value == 0.5);
}

TEST_CASE("mass balance is zero for degenerate empty systems") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const std::vector<Configuration> all_empty(100);
  rng::Stream rng(3);
  const double deficit =
      mass_balance_deficit(all_empty, torus, LocationDensity::uniform(),
                           {PolicyKind::LG, 1.0}, 0.0, 1000, rng);
  CHECK(deficit == 0.0);
}

TEST_CASE("mass balance flags non-stationary input") {
  // pure-birth ensembles occupy every ball, so the kill probability is
  // far above p/(1-p)
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  rng::Stream init(4);
  std::vector<Configuration> crowded;
  for (int s = 0; s < 200; ++s) {
    Configuration c;
    for (int k = 0; k < 60; ++k) c.add(uniform_point(torus, init));
    crowded.push_back(std::move(c));
  }
  rng::Stream rng(5);
  const double deficit = mass_balance_deficit(crowded, torus, LocationDensity::uniform(),
                                              {PolicyKind::LG, 1.0}, 0.3, 2000, rng);
  CHECK(deficit > 0.5);
}

TEST_CASE("translation test passes identical samples with zero shift") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  std::vector<Configuration> identical(40, Configuration({{1.0}, {4.0}}));
  rng::Stream rng(6);
  const TestReport report = translation_invariance_test(
      identical, torus, 0, Region{BallRegion{{2.0}, 1.5}}, rng);
  CHECK(report.statistic == 1.0);
  CHECK(report.pass);
}

TEST_CASE("translation test detects a pinned inhomogeneity") {
  // every sample has its atom near 0, so counts in the ball at 0 cannot
  // match counts in translated copies
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  rng::Stream init(7);
  std::vector<Configuration> pinned;
  for (int s = 0; s < 400; ++s) {
    pinned.push_back(Configuration({{init.next_unit() * 0.5}}));
  }
  rng::Stream rng(8);
  const TestReport report = translation_invariance_test(
      pinned, torus, 1, Region{BallRegion{{0.0}, 1.0}}, rng);
  CHECK_FALSE(report.pass);
}

TEST_CASE("count_distribution of empty samples is a point mass at zero") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const std::vector<Configuration> all_empty(10);
  const auto hist = count_distribution(all_empty, torus, std::nullopt);
  REQUIRE(hist.size() == 1);
  CHECK(hist.at(0) == 1.0);

  const std::vector<Configuration> mixed = {Configuration({{1.0}, {5.0}}),
                                            Configuration({{5.5}})};
  const auto in_region =
      count_distribution(mixed, torus, Region{BoxRegion{{4.0}, {6.0}}});
  CHECK(in_region.at(1) == 1.0);  // each sample holds one atom in [4,6]
}

TEST_CASE("histograms serialize to csv") {
  std::map<std::uint64_t, double> hist = {{0, 0.5}, {2, 0.25}, {3, 0.25}};
  std::ostringstream os;
  write_histogram_csv(os, hist);
  CHECK(os.str() == "count,probability\n0,0.5\n2,0.25\n3,0.25\n");
}

TEST_CASE("tv distance to the geometric law vanishes on itself") {
  const double rho = 3.0 / 7.0;
  std::map<std::uint64_t, double> exact;
  for (std::uint64_t k = 0; k < 200; ++k) {
    exact[k] = (1.0 - rho) * std::pow(rho, static_cast<double>(k));
  }
  CHECK(tv_distance_to_geometric(exact, rho) == doctest::Approx(0.0).epsilon(1e-9));
  std::map<std::uint64_t, double> off = {{0, 0.5}, {1, 0.5}};
  CHECK(tv_distance_to_geometric(off, rho) > 0.05);
}

TEST_CASE("scale invariance holds trivially at alpha = 1 and fails off-law") {
  const SpaceSpec box = SpaceSpec::box({1.0, 1.0});
  rng::Stream init(9);
  std::vector<Configuration> samples;
  for (int s = 0; s < 2000; ++s) {
    samples.push_back(Configuration({uniform_point(box, init)}));
  }
  const std::vector<BoxRegion> regions = {{{0.0, 0.0}, {0.8, 0.8}}};

  const TestReport identity = scale_invariance_test(samples, box, {1.0, 1.0}, regions);
  CHECK(identity.pass);

  // a single uniform atom is not scale invariant: N([0, 0.4]x[0, 0.8])
  // has a different law than N([0, 0.8]^2)
  const TestReport sheared = scale_invariance_test(samples, box, {0.5, 1.0}, regions);
  CHECK_FALSE(sheared.pass);
}

TEST_CASE("log transform maps the upper corner to the origin") {
  const SpaceSpec box = SpaceSpec::box({2.0, 3.0});
  const std::vector<Configuration> samples(40, Configuration({{2.0, 3.0}}));
  const std::vector<BoxRegion> windows = {{{0.0, 0.0}, {0.5, 0.5}}};

  const TestReport zero_shift = log_window_stationarity(samples, box, windows, {0.0, 0.0});
  CHECK(zero_shift.pass);  // identical windows -> identical counts

  // the shifted window excludes the origin atom in every sample while the
  // base window contains it; with a point mass the KS statistic is 1
  const TestReport shifted = log_window_stationarity(samples, box, windows, {1.0, 1.0});
  CHECK_FALSE(shifted.pass);
}

TEST_CASE("zero-coordinate atoms are excluded from the log transform") {
  const SpaceSpec box = SpaceSpec::box({1.0, 1.0});
  const std::vector<Configuration> samples(10, Configuration({{0.0, 0.5}}));
  const std::vector<BoxRegion> windows = {{{0.0, 0.0}, {5.0, 5.0}}};
  const TestReport report = log_window_stationarity(samples, box, windows, {0.0, 0.0});
  CHECK(report.description.find("excluded") != std::string::npos);
  CHECK(report.pass);  // both sides count zero finite atoms
}

TEST_CASE("a pure birth stream grows every region") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  EventHistory history(torus, StreamSpec::with_p_plus(1.0, LocationDensity::uniform(), 11));
  const AccumulationReport report = accumulation_monitor(
      history, {PolicyKind::LG, 1.0}, torus, {100, 1000, 10000},
      Region{BoundaryStripRegion{0.5}}, Region{BoxRegion{{4.0}, {6.0}}}, 16);
  CHECK(report.strip_strictly_increasing);
  REQUIRE(report.interior_at_checkpoints.size() == 3);
  CHECK(report.interior_at_checkpoints[0] < report.interior_at_checkpoints[1]);
  CHECK(report.interior_at_checkpoints[1] < report.interior_at_checkpoints[2]);
}

TEST_CASE("no-cross-kill suppresses exactly the cross-segment victims") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const PolicySpec lg{PolicyKind::LG, 1.0};
  const std::vector<double> breaks = {0.0, 5.0, 10.0};

  Configuration config({{4.9}});
  // minus at 5.1 would kill 4.9, but 4.9 lives in the other segment
  step_no_cross_kill(config, {EventKind::Minus, {5.1}, 0}, lg, interval, breaks);
  CHECK(config == Configuration({{4.9}}));

  // in-segment kills still happen
  step_no_cross_kill(config, {EventKind::Minus, {4.5}, 0}, lg, interval, breaks);
  CHECK(config.empty());

  // births are unaffected
  step_no_cross_kill(config, {EventKind::Plus, {7.0}, 0}, lg, interval, breaks);
  CHECK(config == Configuration({{7.0}}));
}

TEST_CASE("region membership handles wrap-around shifts") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  const Region ball{BallRegion{{1.0}, 1.0}};
  CHECK(region_contains(ball, torus, {1.5}));
  CHECK_FALSE(region_contains(ball, torus, {3.5}));
  // ball translated by 9: center lands at 0, so 9.5 is inside
  CHECK(region_contains_shifted(ball, torus, {9.0}, {9.5}));
  CHECK_FALSE(region_contains_shifted(ball, torus, {9.0}, {2.0}));

  const Region strip{BoundaryStripRegion{0.25}};
  CHECK(region_contains(strip, torus, {0.1}));
  CHECK_FALSE(region_contains(strip, torus, {9.9}));
}
