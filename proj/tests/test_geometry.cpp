#include "sbd/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "sbd/stats.hpp"

using namespace sbd;

TEST_CASE("distance on the torus wraps coordinatewise") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  CHECK(distance(torus, {2.0}, {5.0}) == doctest::Approx(3.0));
  CHECK(distance(torus, {9.5}, {0.5}) == doctest::Approx(1.0));
  CHECK(distance(torus, {0.5}, {9.5}) == doctest::Approx(1.0));
}

TEST_CASE("distance on the box is Euclidean") {
  const SpaceSpec box = SpaceSpec::box({1.0, 1.0});
  CHECK(distance(box, {0.0, 0.0}, {0.3, 0.4}) == doctest::Approx(0.5));
}

TEST_CASE("distance rejects dimension mismatches") {
  const SpaceSpec box = SpaceSpec::box({1.0, 1.0});
  CHECK_THROWS_AS(distance(box, {0.0}, {0.3, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(distance(box, {0.0, 0.0}, {0.3}), std::invalid_argument);
}

TEST_CASE("distance is a metric on random triples") {
  const SpaceSpec spaces[] = {SpaceSpec::torus({10.0}), SpaceSpec::torus({1.0, 2.0}),
                              SpaceSpec::interval(10.0), SpaceSpec::box({1.0, 1.0})};
  for (const auto& space : spaces) {
    rng::Stream stream(7321);
    for (int i = 0; i < 10000; ++i) {
      const Point x = uniform_point(space, stream);
      const Point y = uniform_point(space, stream);
      const Point z = uniform_point(space, stream);
      const double dxy = distance(space, x, y);
      const double dyx = distance(space, y, x);
      REQUIRE(dxy == dyx);
      REQUIRE(dxy >= 0.0);
      REQUIRE(distance(space, x, x) == 0.0);
      REQUIRE(dxy <= distance(space, x, z) + distance(space, z, y) + 1e-12);
    }
  }
}

TEST_CASE("torus translation is an isometry") {
  const SpaceSpec torus = SpaceSpec::torus({10.0, 4.0});
  rng::Stream stream(11);
  for (int i = 0; i < 10000; ++i) {
    const Point x = uniform_point(torus, stream);
    const Point y = uniform_point(torus, stream);
    const Point s = uniform_point(torus, stream);
    REQUIRE(distance(torus, translate(torus, x, s), translate(torus, y, s)) ==
            doctest::Approx(distance(torus, x, y)).epsilon(1e-12));
  }
}

TEST_CASE("translate wraps modulo the lengths") {
  const SpaceSpec torus = SpaceSpec::torus({10.0});
  CHECK(translate(torus, {9.5}, {1.0})[0] == doctest::Approx(0.5));
  CHECK(translate(torus, {3.25}, {0.0})[0] == 3.25);

  const SpaceSpec torus2 = SpaceSpec::torus({1.0, 2.0});
  const Point moved = translate(torus2, {0.9, 1.9}, {0.2, 0.2});
  CHECK(moved[0] == doctest::Approx(0.1));
  CHECK(moved[1] == doctest::Approx(0.1));
}

TEST_CASE("translate requires a group structure") {
  CHECK_THROWS_AS(translate(SpaceSpec::interval(10.0), {1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(translate(SpaceSpec::box({1.0}), {0.5}, {0.1}), std::invalid_argument);
}

TEST_CASE("leq_orthant is the coordinatewise order") {
  CHECK(leq_orthant({0.2, 0.3}, {0.6, 0.7}));
  CHECK_FALSE(leq_orthant({0.2, 0.9}, {0.6, 0.7}));
  CHECK(leq_orthant({0.4, 0.4}, {0.4, 0.4}));
  CHECK_THROWS_AS(leq_orthant({0.1}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("leq_orthant is a partial order") {
  const SpaceSpec box = SpaceSpec::box({1.0, 1.0, 1.0});
  rng::Stream stream(99);
  for (int i = 0; i < 5000; ++i) {
    const Point x = uniform_point(box, stream);
    const Point y = uniform_point(box, stream);
    const Point z = uniform_point(box, stream);
    REQUIRE(leq_orthant(x, x));
    if (leq_orthant(x, y) && leq_orthant(y, x)) REQUIRE(x == y);
    if (leq_orthant(x, y) && leq_orthant(y, z)) REQUIRE(leq_orthant(x, z));
  }
}

TEST_CASE("uniform sampling on the interval has the right mean") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  rng::Stream stream(2024);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    sum += sample_location(interval, LocationDensity::uniform(), stream)[0];
  }
  CHECK(sum / n == doctest::Approx(5.0).epsilon(0.002));
}

TEST_CASE("piecewise density respects zero-weight segments") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const auto density = LocationDensity::piecewise_constant({0.0, 5.0, 10.0}, {2.0, 0.0});
  rng::Stream stream(5);
  for (int i = 0; i < 20000; ++i) {
    REQUIRE(sample_location(interval, density, stream)[0] <= 5.0);
  }
}

TEST_CASE("piecewise density draws segments by weight times length") {
  const SpaceSpec interval = SpaceSpec::interval(10.0);
  const std::vector<double> weights = {1.0, 3.0};
  const std::vector<double> breaks = {0.0, 5.0, 10.0};
  // oracle: normalize the segment masses independently
  const double mass_low = weights[0] * (breaks[1] - breaks[0]);
  const double mass_high = weights[1] * (breaks[2] - breaks[1]);
  const double expected = mass_low / (mass_low + mass_high);
  REQUIRE(expected == doctest::Approx(0.25));

  const auto density = LocationDensity::piecewise_constant(breaks, weights);
  rng::Stream stream(6);
  int low = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    if (sample_location(interval, density, stream)[0] <= 5.0) ++low;
  }
  CHECK(static_cast<double>(low) / n == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("uniform torus sampling passes a per-coordinate KS test") {
  const SpaceSpec torus = SpaceSpec::torus({10.0, 4.0});
  rng::Stream stream(31337);
  std::vector<double> xs, ys;
  const int n = 1000000;
  xs.reserve(n);
  ys.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Point p = sample_location(torus, LocationDensity::uniform(), stream);
    xs.push_back(p[0]);
    ys.push_back(p[1]);
  }
  CHECK(ks_uniform_pvalue(std::move(xs), 0.0, 10.0) >= 0.01);
  CHECK(ks_uniform_pvalue(std::move(ys), 0.0, 4.0) >= 0.01);
}

TEST_CASE("piecewise densities are interval-only and validated") {
  CHECK_THROWS_AS(LocationDensity::piecewise_constant({0.0, 5.0}, {0.0}),
                  std::invalid_argument);  // all-zero weights
  CHECK_THROWS_AS(LocationDensity::piecewise_constant({1.0, 5.0}, {1.0}),
                  std::invalid_argument);  // must start at 0
  CHECK_THROWS_AS(LocationDensity::piecewise_constant({0.0, 5.0, 4.0}, {1.0, 1.0}),
                  std::invalid_argument);  // not increasing
  CHECK_THROWS_AS(LocationDensity::piecewise_constant({0.0, 5.0}, {-1.0}),
                  std::invalid_argument);

  const auto density = LocationDensity::piecewise_constant({0.0, 5.0, 10.0}, {1.0, 1.0});
  rng::Stream stream(1);
  CHECK_THROWS_AS(sample_location(SpaceSpec::torus({10.0}), density, stream),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_location(SpaceSpec::box({10.0, 10.0}), density, stream),
                  std::invalid_argument);
  // breakpoints must span the interval
  CHECK_THROWS_AS(sample_location(SpaceSpec::interval(12.0), density, stream),
                  std::invalid_argument);
}

TEST_CASE("space construction validates lengths") {
  CHECK_THROWS_AS(SpaceSpec::torus({}), std::invalid_argument);
  CHECK_THROWS_AS(SpaceSpec::torus({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SpaceSpec::interval(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(SpaceSpec::box({1.0, -2.0}), std::invalid_argument);
}
