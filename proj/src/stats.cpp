#include "sbd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace sbd {

nlohmann::json test_report_to_json(const TestReport& report) {
  return {{"name", report.name},
          {"statistic", report.statistic},
          {"threshold", report.threshold},
          {"comparison", report.comparison},
          {"pass", report.pass},
          {"sample_size", report.sample_size},
          {"description", report.description}};
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x > 8.0) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 128; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_pvalue_from_statistic(double d, double n_eff) {
  const double s = std::sqrt(n_eff);
  return kolmogorov_sf((s + 0.12 + 0.11 / s) * d);
}

/// Fisher combination of independent p-values: -2 sum(log p) ~ chi^2(2k).
double fisher_combine(const std::vector<double>& pvalues) {
  double x = 0.0;
  for (double p : pvalues) x += -2.0 * std::log(std::max(p, 1e-300));
  // chi-square upper tail with 2k dof via the regularized gamma function
  const int k = static_cast<int>(pvalues.size());
  // Q(k, x/2) for integer k: closed-form Poisson sum
  const double half = x / 2.0;
  double term = std::exp(-half);
  double sum = term;
  for (int i = 1; i < k; ++i) {
    term *= half / i;
    sum += term;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return ks_pvalue_from_statistic(d, na * nb / (na + nb));
}

double ks_uniform_pvalue(std::vector<double> xs, double lo, double hi) {
  if (xs.empty()) throw std::invalid_argument("ks_uniform: empty sample");
  if (!(hi > lo)) throw std::invalid_argument("ks_uniform: empty support");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return ks_pvalue_from_statistic(d, n);
}

Estimate empty_ball_probability(std::span<const Configuration> samples,
                                const SpaceSpec& space, const Point& x, double r) {
  if (samples.empty()) throw std::invalid_argument("empty_ball_probability: no samples");
  std::uint64_t empty = 0;
  for (const auto& config : samples) {
    if (count_in_ball(config, space, x, r) == 0) ++empty;
  }
  const double n = static_cast<double>(samples.size());
  const double p = static_cast<double>(empty) / n;
  return Estimate{p, std::sqrt(p * (1.0 - p) / n), samples.size()};
}

namespace {

bool kill_possible(const Configuration& config, const SpaceSpec& space,
                   const PolicySpec& policy, const Point& x) {
  TieBreaker tie(0);
  return select_target(policy, space, config, x, tie).has_value();
}

}  // namespace

Estimate kill_probability(std::span<const Configuration> samples, const SpaceSpec& space,
                          const LocationDensity& density, const PolicySpec& policy,
                          std::uint64_t fresh_draws, rng::Stream& rng) {
  if (samples.empty()) throw std::invalid_argument("kill_probability: no samples");
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < fresh_draws; ++i) {
    const auto& config = samples[static_cast<std::size_t>(i % samples.size())];
    const Point x = sample_location(space, density, rng);
    if (kill_possible(config, space, policy, x)) ++hits;
  }
  const double n = static_cast<double>(fresh_draws);
  const double p = static_cast<double>(hits) / n;
  return Estimate{p, std::sqrt(p * (1.0 - p) / n), fresh_draws};
}

double mass_balance_deficit(std::span<const Configuration> samples, const SpaceSpec& space,
                            const LocationDensity& density, const PolicySpec& policy,
                            double p_plus, std::uint64_t fresh_draws, rng::Stream& rng) {
  const Estimate est = kill_probability(samples, space, density, policy, fresh_draws, rng);
  return est.value - p_plus / (1.0 - p_plus);
}

TestReport translation_invariance_test(std::span<const Configuration> samples,
                                       const SpaceSpec& space, int n_shifts,
                                       const Region& region, rng::Stream& rng) {
  if (samples.size() < 4) {
    throw std::invalid_argument("translation_invariance_test: too few samples");
  }
  // n_shifts == 0 is the degenerate zero-shift mode (identity check)
  const bool zero_shift = n_shifts == 0;
  if (n_shifts < 1) n_shifts = 1;
  std::vector<double> base, shifted;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i % 2 == 0) {
      base.push_back(static_cast<double>(count_in_region(samples[i], space, region)));
    } else {
      for (int s = 0; s < n_shifts; ++s) {
        Point shift = zero_shift ? Point(static_cast<std::size_t>(space.dim()), 0.0)
                                 : uniform_point(space, rng);
        shifted.push_back(
            static_cast<double>(count_in_region_shifted(samples[i], space, region, shift)));
      }
    }
  }
  TestReport report;
  report.name = "translation_invariance";
  report.statistic = ks_two_sample_pvalue(base, shifted);
  report.threshold = 0.01;
  report.comparison = ">=";
  report.pass = report.statistic >= report.threshold;
  report.sample_size = samples.size();
  report.description = "KS p-value, counts in region vs randomly translated copies";
  return report;
}

std::map<std::uint64_t, double> count_distribution(std::span<const Configuration> samples,
                                                   const SpaceSpec& space,
                                                   const std::optional<Region>& region) {
  std::map<std::uint64_t, double> hist;
  for (const auto& config : samples) {
    const std::uint64_t n =
        region ? count_in_region(config, space, *region) : config.total_mass();
    hist[n] += 1.0;
  }
  for (auto& [k, v] : hist) v /= static_cast<double>(samples.size());
  return hist;
}

std::map<std::uint64_t, double> count_distribution_of_masses(
    std::span<const std::uint64_t> masses) {
  std::map<std::uint64_t, double> hist;
  for (std::uint64_t m : masses) hist[m] += 1.0;
  for (auto& [k, v] : hist) v /= static_cast<double>(masses.size());
  return hist;
}

void write_histogram_csv(std::ostream& os, const std::map<std::uint64_t, double>& histogram) {
  os << "count,probability\n";
  char buf[32];
  for (const auto& [k, v] : histogram) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << k << "," << buf << "\n";
  }
}

double tv_distance_to_geometric(const std::map<std::uint64_t, double>& histogram, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::invalid_argument("tv_distance_to_geometric: rho must lie in [0,1)");
  }
  std::uint64_t kmax = 0;
  for (const auto& [k, v] : histogram) kmax = std::max(kmax, k);
  double tv = 0.0;
  double tail = 1.0;  // geometric mass not yet accounted for
  for (std::uint64_t k = 0; k <= kmax; ++k) {
    const double gk = (1.0 - rho) * std::pow(rho, static_cast<double>(k));
    const auto it = histogram.find(k);
    const double hk = it == histogram.end() ? 0.0 : it->second;
    tv += std::fabs(hk - gk);
    tail -= gk;
  }
  tv += std::max(tail, 0.0);  // geometric mass beyond the observed range
  return tv / 2.0;
}

namespace {

std::vector<std::span<const Configuration>> disjoint_chunks(
    std::span<const Configuration> samples, std::size_t n_chunks) {
  std::vector<std::span<const Configuration>> chunks;
  const std::size_t per = samples.size() / n_chunks;
  if (per == 0) throw std::invalid_argument("too few samples for the requested chunking");
  for (std::size_t c = 0; c < n_chunks; ++c) {
    chunks.push_back(samples.subspan(c * per, per));
  }
  return chunks;
}

}  // namespace

TestReport scale_invariance_test(std::span<const Configuration> samples,
                                 const SpaceSpec& space, const std::vector<double>& alpha,
                                 std::span<const BoxRegion> regions) {
  if (regions.empty()) throw std::invalid_argument("scale_invariance_test: no regions");
  if (static_cast<int>(alpha.size()) != space.dim()) {
    throw std::invalid_argument("scale_invariance_test: alpha dimension mismatch");
  }
  for (double a : alpha) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw std::invalid_argument("scale_invariance_test: alpha components must lie in (0,1]");
    }
  }
  const auto chunks = disjoint_chunks(samples, 2 * regions.size());
  std::vector<double> pvalues;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    BoxRegion scaled = regions[r];
    for (std::size_t i = 0; i < scaled.lower.size(); ++i) {
      scaled.lower[i] *= alpha[i];
      scaled.upper[i] *= alpha[i];
    }
    std::vector<double> a_counts, b_counts;
    for (const auto& config : chunks[2 * r]) {
      a_counts.push_back(static_cast<double>(count_in_region(config, space, Region{scaled})));
    }
    for (const auto& config : chunks[2 * r + 1]) {
      b_counts.push_back(
          static_cast<double>(count_in_region(config, space, Region{regions[r]})));
    }
    pvalues.push_back(ks_two_sample_pvalue(std::move(a_counts), std::move(b_counts)));
  }
  TestReport report;
  report.name = "scale_invariance";
  report.statistic = fisher_combine(pvalues);
  report.threshold = 0.01;
  report.comparison = ">=";
  report.pass = report.statistic >= report.threshold;
  report.sample_size = samples.size();
  report.description = "Fisher-combined KS p-values, scaled regions vs pushforward counts";
  return report;
}

TestReport log_window_stationarity(std::span<const Configuration> samples,
                                   const SpaceSpec& space, std::span<const BoxRegion> windows,
                                   const std::vector<double>& shift) {
  if (windows.empty()) throw std::invalid_argument("log_window_stationarity: no windows");
  if (static_cast<int>(shift.size()) != space.dim()) {
    throw std::invalid_argument("log_window_stationarity: shift dimension mismatch");
  }
  std::uint64_t excluded = 0;  // atoms with a zero coordinate map to infinity

  auto log_count = [&](const Configuration& config, const BoxRegion& w,
                       bool shifted) -> double {
    std::uint64_t n = 0;
    for (const auto& atom : config.atoms()) {
      bool inside = true;
      bool infinite = false;
      for (std::size_t i = 0; i < atom.location.size(); ++i) {
        if (atom.location[i] <= 0.0) {
          infinite = true;
          break;
        }
        const double v = -std::log(atom.location[i] / space.length(static_cast<int>(i)));
        const double lo = w.lower[i] + (shifted ? shift[i] : 0.0);
        const double hi = w.upper[i] + (shifted ? shift[i] : 0.0);
        if (v < lo || v > hi) {
          inside = false;
          break;
        }
      }
      if (infinite) {
        excluded += atom.multiplicity;
        continue;
      }
      if (inside) n += atom.multiplicity;
    }
    return static_cast<double>(n);
  };

  const auto chunks = disjoint_chunks(samples, 2 * windows.size());
  std::vector<double> pvalues;
  for (std::size_t r = 0; r < windows.size(); ++r) {
    std::vector<double> a_counts, b_counts;
    for (const auto& config : chunks[2 * r]) {
      a_counts.push_back(log_count(config, windows[r], false));
    }
    for (const auto& config : chunks[2 * r + 1]) {
      b_counts.push_back(log_count(config, windows[r], true));
    }
    pvalues.push_back(ks_two_sample_pvalue(std::move(a_counts), std::move(b_counts)));
  }
  TestReport report;
  report.name = "log_window_stationarity";
  report.statistic = fisher_combine(pvalues);
  report.threshold = 0.01;
  report.comparison = ">=";
  report.pass = report.statistic >= report.threshold;
  report.sample_size = samples.size();
  report.description =
      "Fisher-combined KS p-values, log-transformed window counts vs shifted windows; " +
      std::to_string(excluded) + " zero-coordinate atoms excluded";
  return report;
}

AccumulationReport accumulation_monitor(const EventHistory& history,
                                        const PolicySpec& policy, const SpaceSpec& space,
                                        const std::vector<std::uint64_t>& checkpoints,
                                        const Region& strip, const Region& interior,
                                        int samples_per_decade) {
  if (checkpoints.size() < 2) {
    throw std::invalid_argument("accumulation_monitor: need at least two checkpoints");
  }
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("accumulation_monitor: checkpoints must increase");
    }
  }

  AccumulationReport report;
  report.checkpoints = checkpoints;

  // log-spaced sampling instants inside each decade (c_{d}, c_{d+1}]
  const std::size_t n_decades = checkpoints.size() - 1;
  std::vector<std::pair<std::uint64_t, std::size_t>> instants;  // (step, decade)
  for (std::size_t d = 0; d < n_decades; ++d) {
    const double lo = std::log(static_cast<double>(checkpoints[d]));
    const double hi = std::log(static_cast<double>(checkpoints[d + 1]));
    for (int s = 1; s <= samples_per_decade; ++s) {
      const double t = lo + (hi - lo) * static_cast<double>(s) / samples_per_decade;
      auto step = static_cast<std::uint64_t>(std::llround(std::exp(t)));
      step = std::clamp(step, checkpoints[d] + 1, checkpoints[d + 1]);
      instants.emplace_back(step, d);
    }
  }
  report.strip_decade_samples.resize(n_decades);
  report.interior_decade_samples.resize(n_decades);

  Configuration config;
  std::size_t instant_pos = 0;
  std::size_t checkpoint_pos = 0;

  const std::uint64_t total = checkpoints.back();
  for (std::uint64_t i = 0; i < total; ++i) {
    step_in_place(config, history.at(static_cast<std::int64_t>(i)), policy, space);
    const std::uint64_t step_count = i + 1;
    while (instant_pos < instants.size() && instants[instant_pos].first == step_count) {
      const std::size_t d = instants[instant_pos].second;
      report.strip_decade_samples[d].push_back(count_in_region(config, space, strip));
      report.interior_decade_samples[d].push_back(count_in_region(config, space, interior));
      ++instant_pos;
    }
    if (checkpoint_pos < checkpoints.size() && checkpoints[checkpoint_pos] == step_count) {
      report.strip_at_checkpoints.push_back(count_in_region(config, space, strip));
      report.interior_at_checkpoints.push_back(count_in_region(config, space, interior));
      ++checkpoint_pos;
    }
  }

  report.strip_strictly_increasing = true;
  for (std::size_t i = 1; i < report.strip_at_checkpoints.size(); ++i) {
    if (report.strip_at_checkpoints[i] <= report.strip_at_checkpoints[i - 1]) {
      report.strip_strictly_increasing = false;
      break;
    }
  }

  auto decade_pvalue = [&](const std::vector<std::vector<std::uint64_t>>& decades) {
    const auto& a = decades[decades.size() - 2];
    const auto& b = decades.back();
    std::vector<double> da(a.begin(), a.end()), db(b.begin(), b.end());
    return ks_two_sample_pvalue(std::move(da), std::move(db));
  };
  report.strip_last_decades_pvalue = decade_pvalue(report.strip_decade_samples);
  report.interior_last_decades_pvalue = decade_pvalue(report.interior_decade_samples);
  return report;
}

nlohmann::json accumulation_report_to_json(const AccumulationReport& report) {
  return {{"checkpoints", report.checkpoints},
          {"strip_at_checkpoints", report.strip_at_checkpoints},
          {"interior_at_checkpoints", report.interior_at_checkpoints},
          {"strip_decade_samples", report.strip_decade_samples},
          {"interior_decade_samples", report.interior_decade_samples},
          {"strip_strictly_increasing", report.strip_strictly_increasing},
          {"strip_last_decades_pvalue", report.strip_last_decades_pvalue},
          {"interior_last_decades_pvalue", report.interior_last_decades_pvalue}};
}

void step_no_cross_kill(Configuration& config, const Event& event,
                        const PolicySpec& policy, const SpaceSpec& space,
                        const std::vector<double>& segment_breakpoints) {
  if (space.kind() != SpaceKind::Interval) {
    throw std::invalid_argument("step_no_cross_kill: interval space only");
  }
  if (event.kind == EventKind::Plus) {
    config.add(event.location);
    return;
  }
  TieBreaker tie(event.tie_seed);
  auto target = select_target(policy, space, config, event.location, tie);
  if (!target) return;
  auto segment_of = [&](double v) {
    const auto it = std::upper_bound(segment_breakpoints.begin(), segment_breakpoints.end(), v);
    return it - segment_breakpoints.begin();
  };
  // kill suppressed when the victim sits in another sub-interval
  if (segment_of((*target)[0]) != segment_of(event.location[0])) return;
  config.remove(*target);
}

}  // namespace sbd
