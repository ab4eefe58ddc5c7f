#include "sbd/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "sbd/dynamics.hpp"
#include "sbd/loynes.hpp"
#include "sbd/parallel.hpp"
#include "sbd/stats.hpp"

namespace sbd {

namespace {

std::uint64_t fnv64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr double kP = 0.3;                         // arrival bias of every suite
constexpr double kEmptyBall = 4.0 / 7.0;           // (1 - 2p) / (1 - p) at p = 0.3
constexpr double kKillProb = 3.0 / 7.0;            // p / (1 - p) at p = 0.3

struct SampleSet {
  std::vector<Configuration> configs;
  std::uint64_t attempts = 0;
  std::uint64_t certified = 0;
  bool enough = false;
};

struct Context {
  std::uint64_t seed = kDefaultAcceptanceSeed;
  int workers = 1;
  std::map<std::string, std::shared_ptr<SampleSet>> cache;

  const SampleSet& samples(const std::string& tag, const SpaceSpec& space,
                           const PolicySpec& policy, const LocationDensity& density,
                           std::uint64_t count, std::uint64_t max_depth,
                           bool require_certified,
                           const std::optional<Region>& window = std::nullopt);
};

const SampleSet& Context::samples(const std::string& tag, const SpaceSpec& space,
                                  const PolicySpec& policy, const LocationDensity& density,
                                  std::uint64_t count, std::uint64_t max_depth,
                                  bool require_certified, const std::optional<Region>& window) {
  if (auto it = cache.find(tag); it != cache.end()) return *it->second;

  auto set = std::make_shared<SampleSet>();
  const std::uint64_t attempts =
      require_certified ? count + std::max<std::uint64_t>(64, count / 16) : count;
  std::vector<StationarySample> raw(attempts);
  parallel_for(attempts, workers, [&](std::uint64_t k) {
    StreamSpec stream =
        StreamSpec::with_p_plus(kP, density, rng::derive(seed, fnv64(tag), k));
    EventHistory history(space, stream);
    raw[k] = sample_minimal_stationary(history, policy, space, max_depth, window);
  });
  set->attempts = attempts;
  for (auto& s : raw) {
    if (s.certificate == Certificate::EmptyRegeneration) ++set->certified;
    if (!require_certified || s.certificate == Certificate::EmptyRegeneration) {
      if (set->configs.size() < count) set->configs.push_back(std::move(s.config));
    }
  }
  set->enough = set->configs.size() == count;
  cache[tag] = set;
  return *set;
}

// ---------------------------------------------------------------- c1

CriterionResult criterion_gg_geometric(Context& ctx) {
  CriterionResult result{1, "gg-geometric-law", false, {}};
  const SpaceSpec space = SpaceSpec::interval(10.0);
  const PolicySpec policy{PolicyKind::GG, 1.0};
  const StreamSpec stream = StreamSpec::with_p_plus(
      kP, LocationDensity::uniform(), rng::derive(ctx.seed, fnv64("c1"), 0));
  EventHistory history(space, stream);

  constexpr std::uint64_t kBurnIn = 100000;
  constexpr std::uint64_t kObservations = 1000000;
  Configuration state = simulate_forward(Configuration{}, kBurnIn, history, 0, policy, space);
  std::vector<std::uint64_t> masses;
  masses.reserve(kObservations);
  for (std::uint64_t k = 0; k < kObservations; ++k) {
    step_in_place(state, history.at(static_cast<std::int64_t>(kBurnIn + k)), policy, space);
    masses.push_back(state.total_mass());
  }
  const auto hist = count_distribution_of_masses(masses);

  // Oracle: stationary law of the reflected walk, from its balance
  // equations. Cut balance pi_k p = pi_{k+1} (1-p) on a truncated range,
  // cross-checked by power iteration on the transition matrix.
  constexpr int kTruncation = 200;
  const double q = 1.0 - kP;
  std::vector<double> pi(kTruncation + 1);
  pi[0] = 1.0;
  double total = pi[0];
  for (int k = 0; k < kTruncation; ++k) {
    pi[static_cast<std::size_t>(k) + 1] = pi[static_cast<std::size_t>(k)] * (kP / q);
    total += pi[static_cast<std::size_t>(k) + 1];
  }
  for (auto& v : pi) v /= total;

  std::vector<double> v(kTruncation + 1, 0.0), next(kTruncation + 1, 0.0);
  v[0] = 1.0;
  for (int it = 0; it < 20000; ++it) {
    next.assign(next.size(), 0.0);
    next[0] = q * v[0] + q * v[1];
    for (int k = 1; k <= kTruncation; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      next[ku] = kP * v[ku - 1] + (k + 1 <= kTruncation ? q * v[ku + 1] : 0.0);
    }
    next.back() += kP * v.back();  // the truncated chain stays put at the top
    std::swap(v, next);
  }
  double oracle_gap = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) oracle_gap = std::max(oracle_gap, std::fabs(v[k] - pi[k]));
  const bool oracle_ok = oracle_gap < 1e-9 && std::fabs(pi[0] - kEmptyBall) < 1e-9;

  const double p0 = hist.count(0) ? hist.at(0) : 0.0;
  const double tv = tv_distance_to_geometric(hist, kP / q);
  const bool pass_p0 = std::fabs(p0 - pi[0]) <= 0.005;
  const bool pass_tv = tv <= 0.01;

  result.pass = oracle_ok && pass_p0 && pass_tv;
  result.details = {{"p_mass_zero", p0},
                    {"oracle_p_zero", pi[0]},
                    {"tolerance_p_zero", 0.005},
                    {"tv_distance", tv},
                    {"tolerance_tv", 0.01},
                    {"oracle_cross_check_gap", oracle_gap},
                    {"observations", kObservations}};
  return result;
}

// ---------------------------------------------------------------- shared sample sets

constexpr std::uint64_t kIdentitySamples = 5000;
constexpr std::uint64_t kIdentityDepth = 1 << 16;

const SampleSet& lg_torus_samples(Context& ctx) {
  return ctx.samples("lg_torus", SpaceSpec::torus({10.0}), PolicySpec{PolicyKind::LG, 1.0},
                     LocationDensity::uniform(), kIdentitySamples, kIdentityDepth, true);
}

const SampleSet& lg_interval_samples(Context& ctx) {
  return ctx.samples("lg_interval", SpaceSpec::interval(10.0), PolicySpec{PolicyKind::LG, 1.0},
                     LocationDensity::uniform(), kIdentitySamples, kIdentityDepth, true);
}

// ---------------------------------------------------------------- c2

CriterionResult criterion_empty_ball(Context& ctx) {
  CriterionResult result{2, "empty-ball-identity", false, {}};
  const SpaceSpec space = SpaceSpec::torus({10.0});
  const SampleSet& set = lg_torus_samples(ctx);
  const double rate =
      static_cast<double>(set.certified) / static_cast<double>(set.attempts);
  if (!set.enough) {
    result.details = {{"error", "not enough certified samples"},
                      {"certified", set.certified},
                      {"attempts", set.attempts}};
    return result;
  }
  const double n = static_cast<double>(set.configs.size());
  const double tol = 3.0 * std::sqrt(kEmptyBall * (1.0 - kEmptyBall) / n);
  nlohmann::json centers = nlohmann::json::array();
  bool all_ok = true;
  for (double c : {0.0, 2.0, 4.0, 6.0, 8.0}) {
    const Estimate est = empty_ball_probability(set.configs, space, Point{c}, 1.0);
    const bool ok = std::fabs(est.value - kEmptyBall) <= tol;
    all_ok = all_ok && ok;
    centers.push_back({{"center", c}, {"estimate", est.value}, {"pass", ok}});
  }
  // homogeneity: estimates at random centers agree within mutual 3-SE bands
  rng::Stream center_rng(rng::derive(ctx.seed, fnv64("c2-centers"), 0));
  std::vector<Estimate> random_estimates;
  for (int k = 0; k < 10; ++k) {
    random_estimates.push_back(
        empty_ball_probability(set.configs, space, uniform_point(space, center_rng), 1.0));
  }
  bool homogeneous = true;
  for (std::size_t i = 0; i < random_estimates.size(); ++i) {
    for (std::size_t j = i + 1; j < random_estimates.size(); ++j) {
      const double gap = std::fabs(random_estimates[i].value - random_estimates[j].value);
      const double band = 3.0 * std::sqrt(random_estimates[i].std_error * random_estimates[i].std_error +
                                          random_estimates[j].std_error * random_estimates[j].std_error);
      if (gap > band) homogeneous = false;
    }
  }

  const bool rate_ok = rate >= 0.99;
  result.pass = all_ok && rate_ok && homogeneous;
  result.details = {{"target", kEmptyBall},
                    {"tolerance", tol},
                    {"centers", std::move(centers)},
                    {"random_centers_homogeneous", homogeneous},
                    {"certified_rate", rate},
                    {"certified_rate_floor", 0.99},
                    {"samples", set.configs.size()}};
  return result;
}

// ---------------------------------------------------------------- c3

CriterionResult criterion_mass_balance(Context& ctx) {
  CriterionResult result{3, "mass-balance-identity", false, {}};
  struct Case {
    const char* name;
    SpaceSpec space;
    PolicySpec policy;
    bool require_certified;
  };
  const std::vector<Case> cases = {
      {"lg_torus", SpaceSpec::torus({10.0}), {PolicyKind::LG, 1.0}, true},
      {"lr_torus", SpaceSpec::torus({10.0}), {PolicyKind::LR, 1.0}, true},
      // the LO minimal solution on the torus has infinite mass near 0, so
      // emptiness never certifies at depth; the identity is checked on the
      // deepest iterates instead
      {"lo_torus", SpaceSpec::torus({10.0}), {PolicyKind::LO, 1.0}, false},
      {"lg_interval", SpaceSpec::interval(10.0), {PolicyKind::LG, 1.0}, true},
  };
  nlohmann::json entries = nlohmann::json::array();
  bool all_ok = true;
  for (const auto& c : cases) {
    const SampleSet& set = ctx.samples(c.name, c.space, c.policy, LocationDensity::uniform(),
                                       kIdentitySamples, kIdentityDepth, c.require_certified);
    if (!set.enough) {
      all_ok = false;
      entries.push_back({{"case", c.name}, {"error", "not enough samples"}});
      continue;
    }
    rng::Stream rng(rng::derive(ctx.seed, fnv64("c3"), fnv64(c.name)));
    const Estimate est = kill_probability(set.configs, c.space, LocationDensity::uniform(),
                                          c.policy, set.configs.size(), rng);
    const double tol =
        3.0 * std::sqrt(kKillProb * (1.0 - kKillProb) / static_cast<double>(est.sample_size));
    const bool ok = std::fabs(est.value - kKillProb) <= tol;
    all_ok = all_ok && ok;
    entries.push_back({{"case", c.name},
                       {"estimate", est.value},
                       {"target", kKillProb},
                       {"tolerance", tol},
                       {"pass", ok}});
  }
  result.pass = all_ok;
  result.details = {{"cases", std::move(entries)}};
  return result;
}

// ---------------------------------------------------------------- c4

CriterionResult criterion_monotone_coupling(Context& ctx) {
  CriterionResult result{4, "monotone-coupling", false, {}};
  const SpaceSpec space = SpaceSpec::torus({10.0});
  constexpr int kPairs = 100;
  constexpr std::uint64_t kSteps = 10000;
  nlohmann::json entries = nlohmann::json::array();
  bool all_ok = true;
  int policy_index = 0;
  for (PolicyKind kind : {PolicyKind::LG, PolicyKind::LR, PolicyKind::LO}) {
    const PolicySpec policy{kind, 1.0};
    std::atomic<std::uint64_t> violations{0};
    parallel_for(kPairs, ctx.workers, [&](std::uint64_t pair) {
      rng::Stream init(rng::derive(ctx.seed, fnv64("c4-init"),
                                   static_cast<std::uint64_t>(policy_index) * 1000 + pair));
      Configuration q;
      const std::uint64_t n_atoms = 8 + init.next_below(16);
      for (std::uint64_t a = 0; a < n_atoms; ++a) {
        const Point x = uniform_point(space, init);
        q.add(x);
        if (init.next_unit() < 0.15) q.add(x);  // exercise multiplicities
      }
      Configuration p;
      for (const auto& atom : q.atoms()) {
        for (std::uint32_t m = 0; m < atom.multiplicity; ++m) {
          if (init.next_unit() < 0.5) p.add(atom.location);
        }
      }
      const StreamSpec stream = StreamSpec::with_p_plus(
          kP, LocationDensity::uniform(),
          rng::derive(ctx.seed, fnv64("c4-events"),
                      static_cast<std::uint64_t>(policy_index) * 1000 + pair));
      EventHistory history(space, stream);
      for (std::uint64_t k = 0; k < kSteps; ++k) {
        const Event& e = history.at(static_cast<std::int64_t>(k));
        if (e.kind == EventKind::Plus) {
          p.add(e.location);
          q.add(e.location);
        } else {
          TieBreaker tie(e.tie_seed);
          auto [tp, tq] = coupled_select(policy, space, p, q, e.location, tie);
          if (tp) p.remove(*tp);
          if (tq) q.remove(*tq);
        }
        if (!is_dominated(p, q)) {
          violations.fetch_add(1);
          return;
        }
      }
    });
    const bool ok = violations.load() == 0;
    all_ok = all_ok && ok;
    entries.push_back({{"policy", to_string(kind)},
                       {"pairs", kPairs},
                       {"steps_per_pair", kSteps},
                       {"violations", violations.load()}});
    ++policy_index;
  }
  result.pass = all_ok;
  result.details = {{"cases", std::move(entries)}};
  return result;
}

// ---------------------------------------------------------------- c5

CriterionResult criterion_loynes_monotonicity(Context& ctx) {
  CriterionResult result{5, "loynes-monotonicity", false, {}};
  struct Combo {
    PolicySpec policy;
    SpaceSpec space;
    const char* name;
  };
  const std::vector<Combo> combos = {
      {{PolicyKind::LG, 1.0}, SpaceSpec::torus({10.0}), "LG/torus"},
      {{PolicyKind::LR, 1.0}, SpaceSpec::torus({10.0}), "LR/torus"},
      {{PolicyKind::LO, 1.0}, SpaceSpec::torus({10.0}), "LO/torus"},
      {{PolicyKind::GG, 1.0}, SpaceSpec::torus({10.0}), "GG/torus"},
      {{PolicyKind::GO, 1.0}, SpaceSpec::box({1.0, 1.0}), "GO/box"},
  };
  constexpr std::uint64_t kSeeds = 1000;
  constexpr std::uint64_t kMaxDepth = 200;
  nlohmann::json entries = nlohmann::json::array();
  bool all_ok = true;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    const auto& combo = combos[ci];
    std::atomic<std::uint64_t> violations{0};
    parallel_for(kSeeds, ctx.workers, [&](std::uint64_t s) {
      const StreamSpec stream = StreamSpec::with_p_plus(
          kP, LocationDensity::uniform(), rng::derive(ctx.seed, fnv64("c5"), ci * 10000 + s));
      EventHistory history(combo.space, stream);
      Configuration prev;  // depth 0
      for (std::uint64_t n = 1; n <= kMaxDepth; ++n) {
        Configuration cur = backward_iterate(history, combo.policy, combo.space, n);
        if (!is_dominated(prev, cur)) {
          violations.fetch_add(1);
          return;
        }
        prev = std::move(cur);
      }
    });
    const bool ok = violations.load() == 0;
    all_ok = all_ok && ok;
    entries.push_back(
        {{"combo", combo.name}, {"seeds", kSeeds}, {"violations", violations.load()}});
  }

  // fixed-point residual on random (seed, depth, policy) triples
  std::atomic<std::uint64_t> residual_failures{0};
  constexpr std::uint64_t kTriples = 1000;
  parallel_for(kTriples, ctx.workers, [&](std::uint64_t t) {
    rng::Stream pick(rng::derive(ctx.seed, fnv64("c5-residual"), t));
    const auto& combo = combos[static_cast<std::size_t>(pick.next_below(combos.size()))];
    const std::uint64_t n = 1 + pick.next_below(100);
    const StreamSpec stream = StreamSpec::with_p_plus(
        kP, LocationDensity::uniform(), rng::derive(ctx.seed, fnv64("c5-residual-ev"), t));
    EventHistory history(combo.space, stream);
    if (!fixed_point_residual(history, combo.policy, combo.space, n)) {
      residual_failures.fetch_add(1);
    }
  });
  const bool residual_ok = residual_failures.load() == 0;
  all_ok = all_ok && residual_ok;

  result.pass = all_ok;
  result.details = {{"cases", std::move(entries)},
                    {"residual_triples", kTriples},
                    {"residual_failures", residual_failures.load()}};
  return result;
}

// ---------------------------------------------------------------- c6

CriterionResult criterion_convergence_coupling(Context& ctx) {
  CriterionResult result{6, "convergence-coupling", false, {}};
  const SpaceSpec space = SpaceSpec::torus({10.0});
  const PolicySpec policy{PolicyKind::LG, 1.0};
  constexpr std::uint64_t kSeeds = 1000;
  constexpr std::uint64_t kMaxEvents = 1000000;
  std::vector<std::optional<std::uint64_t>> times(kSeeds);
  parallel_for(kSeeds, ctx.workers, [&](std::uint64_t s) {
    const StreamSpec stream = StreamSpec::with_p_plus(
        kP, LocationDensity::uniform(), rng::derive(ctx.seed, fnv64("c6"), s));
    EventHistory history(space, stream);
    rng::Stream init(rng::derive(ctx.seed, fnv64("c6-init"), s));
    Configuration b;
    for (int k = 0; k < 20; ++k) b.add(uniform_point(space, init));
    times[s] = coupling_time(Configuration{}, b, history, 0, policy, space, kMaxEvents);
  });
  std::vector<double> coupled;
  for (const auto& t : times) {
    if (t) coupled.push_back(static_cast<double>(*t));
  }
  std::sort(coupled.begin(), coupled.end());
  const double fraction = static_cast<double>(coupled.size()) / static_cast<double>(kSeeds);
  auto quantile = [&](double q) -> double {
    if (coupled.empty()) return 0.0;
    return coupled[static_cast<std::size_t>(q * (static_cast<double>(coupled.size()) - 1))];
  };
  result.pass = fraction >= 0.99;
  result.details = {{"seeds", kSeeds},
                    {"max_events", kMaxEvents},
                    {"coupled_fraction", fraction},
                    {"floor", 0.99},
                    {"quantiles",
                     {{"q50", quantile(0.5)},
                      {"q90", quantile(0.9)},
                      {"q99", quantile(0.99)},
                      {"max", coupled.empty() ? 0.0 : coupled.back()}}}};
  return result;
}

// ---------------------------------------------------------------- c7

CriterionResult criterion_translation_invariance(Context& ctx) {
  CriterionResult result{7, "translation-invariance", false, {}};
  const SampleSet& torus_set = lg_torus_samples(ctx);
  const SampleSet& interval_set = lg_interval_samples(ctx);
  if (!torus_set.enough || !interval_set.enough) {
    result.details = {{"error", "not enough certified samples"}};
    return result;
  }
  rng::Stream rng_torus(rng::derive(ctx.seed, fnv64("c7-torus"), 0));
  const TestReport torus_report =
      translation_invariance_test(torus_set.configs, SpaceSpec::torus({10.0}), 1,
                                  Region{BallRegion{Point{0.0}, 1.0}}, rng_torus);
  rng::Stream rng_interval(rng::derive(ctx.seed, fnv64("c7-interval"), 0));
  const TestReport interval_report =
      translation_invariance_test(interval_set.configs, SpaceSpec::interval(10.0), 1,
                                  Region{BallRegion{Point{0.5}, 0.5}}, rng_interval);
  // the interval test is the boundary-effect positive control: it must fail
  result.pass = torus_report.pass && !interval_report.pass;
  result.details = {{"torus", test_report_to_json(torus_report)},
                    {"interval_negative_control", test_report_to_json(interval_report)}};
  return result;
}

// ---------------------------------------------------------------- c8

CriterionResult criterion_interval_symmetry(Context& ctx) {
  CriterionResult result{8, "interval-symmetry", false, {}};
  const SpaceSpec space = SpaceSpec::interval(10.0);
  const SampleSet& set = lg_interval_samples(ctx);
  if (!set.enough) {
    result.details = {{"error", "not enough certified samples"}};
    return result;
  }
  const double T = 10.0;
  const std::vector<std::pair<double, double>> pairs = {
      {0.0, 1.0}, {0.5, 2.0}, {2.0, 4.0}, {4.0, 5.0}, {1.0, 3.5}};
  const std::size_t per_chunk = set.configs.size() / (2 * pairs.size());
  nlohmann::json entries = nlohmann::json::array();
  bool all_ok = true;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [a, b] = pairs[r];
    const Region left{BoxRegion{Point{a}, Point{b}}};
    const Region right{BoxRegion{Point{T - b}, Point{T - a}}};
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < per_chunk; ++i) {
      xs.push_back(static_cast<double>(
          count_in_region(set.configs[2 * r * per_chunk + i], space, left)));
      ys.push_back(static_cast<double>(
          count_in_region(set.configs[(2 * r + 1) * per_chunk + i], space, right)));
    }
    const double p = ks_two_sample_pvalue(std::move(xs), std::move(ys));
    const bool ok = p >= 0.01;
    all_ok = all_ok && ok;
    entries.push_back({{"interval", {a, b}}, {"mirror", {T - b, T - a}}, {"pvalue", p},
                       {"pass", ok}});
  }
  result.pass = all_ok;
  result.details = {{"pairs", std::move(entries)}, {"threshold", 0.01}};
  return result;
}

// ---------------------------------------------------------------- c9

CriterionResult criterion_go_invariances(Context& ctx) {
  CriterionResult result{9, "go-scale-and-log-invariance", false, {}};
  const SpaceSpec space = SpaceSpec::box({1.0, 1.0});
  const Region window{BoxRegion{Point{0.05, 0.05}, Point{1.0, 1.0}}};
  const SampleSet& set =
      ctx.samples("go_box", space, PolicySpec{PolicyKind::GO, 1.0}, LocationDensity::uniform(),
                  1000, 1 << 14, false, window);
  const std::vector<BoxRegion> scale_regions = {
      {Point{0.3, 0.2}, Point{0.6, 0.9}},
      {Point{0.1, 0.5}, Point{0.9, 1.0}},
  };
  const TestReport scale =
      scale_invariance_test(set.configs, space, {0.5, 1.0}, scale_regions);
  const std::vector<BoxRegion> log_windows = {{Point{0.0, 0.0}, Point{1.0, 1.0}}};
  const TestReport logstat =
      log_window_stationarity(set.configs, space, log_windows, {1.0, 0.0});
  result.pass = scale.pass && logstat.pass;
  result.details = {{"scale", test_report_to_json(scale)},
                    {"log_window", test_report_to_json(logstat)},
                    {"samples", set.configs.size()}};
  return result;
}

// ---------------------------------------------------------------- c10

CriterionResult criterion_boundary_accumulation(Context& ctx) {
  CriterionResult result{10, "boundary-accumulation", false, {}};
  const std::vector<std::uint64_t> checkpoints = {10000, 100000, 1000000, 10000000};
  constexpr int kSamplesPerDecade = 64;

  struct Case {
    const char* name;
    SpaceSpec space;
    PolicySpec policy;
    Region strip;
    Region interior;
    bool expect_growth;
  };
  const std::vector<Case> cases = {
      {"go_box", SpaceSpec::box({1.0, 1.0}), {PolicyKind::GO, 1.0},
       Region{BoundaryStripRegion{0.05}},
       Region{BoxRegion{Point{0.25, 0.25}, Point{0.75, 0.75}}}, true},
      {"lo_torus", SpaceSpec::torus({10.0}), {PolicyKind::LO, 1.0},
       Region{BoundaryStripRegion{0.5}}, Region{BoxRegion{Point{4.0}, Point{6.0}}}, true},
      {"lg_torus", SpaceSpec::torus({10.0}), {PolicyKind::LG, 1.0},
       Region{BoundaryStripRegion{0.5}}, Region{BoxRegion{Point{4.0}, Point{6.0}}}, false},
  };

  std::vector<AccumulationReport> reports(cases.size());
  parallel_for(cases.size(), ctx.workers, [&](std::uint64_t i) {
    const auto& c = cases[i];
    const StreamSpec stream = StreamSpec::with_p_plus(
        kP, LocationDensity::uniform(), rng::derive(ctx.seed, fnv64("c10"), i));
    EventHistory history(c.space, stream, 4);
    reports[i] = accumulation_monitor(history, c.policy, c.space, checkpoints, c.strip,
                                      c.interior, kSamplesPerDecade);
  });

  nlohmann::json entries = nlohmann::json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto& rep = reports[i];
    bool ok;
    if (c.expect_growth) {
      ok = rep.strip_strictly_increasing && rep.interior_last_decades_pvalue >= 0.01;
    } else {
      ok = !rep.strip_strictly_increasing && rep.strip_last_decades_pvalue >= 0.01 &&
           rep.interior_last_decades_pvalue >= 0.01;
    }
    all_ok = all_ok && ok;
    nlohmann::json entry = accumulation_report_to_json(rep);
    entry["case"] = c.name;
    entry["expect_growth"] = c.expect_growth;
    entry["pass"] = ok;
    entry.erase("strip_decade_samples");     // keep the report compact
    entry.erase("interior_decade_samples");
    entries.push_back(std::move(entry));
  }
  result.pass = all_ok;
  result.details = {{"cases", std::move(entries)}};
  return result;
}

// ---------------------------------------------------------------- c11

CriterionResult criterion_piecewise_domination(Context& ctx) {
  CriterionResult result{11, "piecewise-density-domination", false, {}};
  const SpaceSpec space = SpaceSpec::interval(10.0);
  const PolicySpec policy{PolicyKind::LG, 1.0};
  const std::vector<double> breakpoints = {0.0, 5.0, 10.0};
  const LocationDensity density = LocationDensity::piecewise_constant(breakpoints, {1.0, 3.0});

  // (a) the no-cross-kill dynamics dominates the true dynamics pathwise
  const StreamSpec stream = StreamSpec::with_p_plus(
      kP, density, rng::derive(ctx.seed, fnv64("c11-path"), 0));
  EventHistory history(space, stream);
  Configuration true_state, modified_state;
  std::uint64_t violations = 0;
  constexpr std::uint64_t kSteps = 10000;
  for (std::uint64_t k = 0; k < kSteps; ++k) {
    const Event& e = history.at(static_cast<std::int64_t>(k));
    step_in_place(true_state, e, policy, space);
    step_no_cross_kill(modified_state, e, policy, space, breakpoints);
    if (!is_dominated(true_state, modified_state)) ++violations;
  }

  // (b) mass balance under the 2-piece density
  const SampleSet& set = ctx.samples("lg_interval_pw", space, policy, density,
                                     kIdentitySamples, kIdentityDepth, true);
  bool balance_ok = false;
  nlohmann::json balance;
  if (set.enough) {
    rng::Stream rng(rng::derive(ctx.seed, fnv64("c11-balance"), 0));
    const Estimate est =
        kill_probability(set.configs, space, density, policy, set.configs.size(), rng);
    const double tol =
        3.0 * std::sqrt(kKillProb * (1.0 - kKillProb) / static_cast<double>(est.sample_size));
    balance_ok = std::fabs(est.value - kKillProb) <= tol;
    balance = {{"estimate", est.value}, {"target", kKillProb}, {"tolerance", tol},
               {"pass", balance_ok}};
  } else {
    balance = {{"error", "not enough certified samples"}};
  }

  result.pass = violations == 0 && balance_ok;
  result.details = {{"pathwise_steps", kSteps},
                    {"pathwise_violations", violations},
                    {"mass_balance", std::move(balance)}};
  return result;
}

// ---------------------------------------------------------------- c12

CriterionResult criterion_determinism(Context& ctx) {
  CriterionResult result{12, "determinism", false, {}};
  const SuiteResult first = run_suite("c1", ctx.seed, ctx.workers, nullptr);
  const SuiteResult second = run_suite("c1", ctx.seed, ctx.workers, nullptr);
  const std::string a = suite_result_to_json(first).dump(2);
  const std::string b = suite_result_to_json(second).dump(2);
  const bool rerun_identical = a == b;

  // worker count must not leak into the report bytes either
  const SuiteResult w1 = run_suite("c4", ctx.seed, 1, nullptr);
  const SuiteResult w4 = run_suite("c4", ctx.seed, std::max(2, ctx.workers), nullptr);
  const bool worker_identical =
      suite_result_to_json(w1).dump(2) == suite_result_to_json(w4).dump(2);

  result.pass = rerun_identical && worker_identical;
  result.details = {{"rerun_identical", rerun_identical},
                    {"worker_count_identical", worker_identical},
                    {"probe_suites", {"c1", "c4"}}};
  return result;
}

CriterionResult run_criterion(int id, Context& ctx) {
  switch (id) {
    case 1: return criterion_gg_geometric(ctx);
    case 2: return criterion_empty_ball(ctx);
    case 3: return criterion_mass_balance(ctx);
    case 4: return criterion_monotone_coupling(ctx);
    case 5: return criterion_loynes_monotonicity(ctx);
    case 6: return criterion_convergence_coupling(ctx);
    case 7: return criterion_translation_invariance(ctx);
    case 8: return criterion_interval_symmetry(ctx);
    case 9: return criterion_go_invariances(ctx);
    case 10: return criterion_boundary_accumulation(ctx);
    case 11: return criterion_piecewise_domination(ctx);
    case 12: return criterion_determinism(ctx);
    default: throw std::invalid_argument("unknown criterion id " + std::to_string(id));
  }
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  if (suite == "quick") return {1, 4, 12};
  if (suite == "gg") return {1};
  if (suite == "torus-lg") return {2, 3, 7};
  if (suite == "interval") return {8, 11};
  if (suite == "coupling") return {4, 5, 6};
  if (suite == "one-sided") return {9, 10};
  if (suite == "determinism") return {12};
  if (suite.size() >= 2 && suite[0] == 'c') {
    const int id = std::atoi(suite.c_str() + 1);
    if (id >= 1 && id <= 12) return {id};
  }
  throw std::invalid_argument("unknown acceptance suite: " + suite);
}

SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int workers,
                      std::ostream* progress) {
  Context ctx;
  ctx.seed = seed;
  ctx.workers = workers < 1 ? 1 : workers;

  SuiteResult result;
  result.suite = suite;
  result.seed = seed;
  result.all_pass = true;
  for (int id : suite_criteria(suite)) {
    CriterionResult criterion = run_criterion(id, ctx);
    result.all_pass = result.all_pass && criterion.pass;
    if (progress) {
      (*progress) << (criterion.pass ? "[PASS]" : "[FAIL]") << " c" << criterion.id << " "
                  << criterion.name << "\n";
      progress->flush();
    }
    result.criteria.push_back(std::move(criterion));
  }
  return result;
}

nlohmann::json suite_result_to_json(const SuiteResult& result) {
  nlohmann::json criteria = nlohmann::json::array();
  for (const auto& c : result.criteria) {
    criteria.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass},
                        {"details", c.details}});
  }
  return {{"suite", result.suite},
          {"seed", result.seed},
          {"criteria", std::move(criteria)},
          {"all_pass", result.all_pass}};
}

}  // namespace sbd
