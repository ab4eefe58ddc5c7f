#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbd/configuration.hpp"
#include "sbd/dynamics.hpp"
#include "sbd/geometry.hpp"
#include "sbd/region.hpp"
#include "sbd/rng.hpp"

#include "json.hpp"

namespace sbd {

/// Result of one statistical check. `comparison` records which direction
/// makes statistic vs threshold a pass (">=" for p-values, "<=" for
/// deviations).
struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison = ">=";
  bool pass = false;
  std::uint64_t sample_size = 0;
  std::string description;
};

nlohmann::json test_report_to_json(const TestReport& report);

// --- Kolmogorov-Smirnov machinery -------------------------------------

/// Complementary cdf of the Kolmogorov distribution.
double kolmogorov_sf(double x);

/// Two-sample KS p-value (asymptotic, with the usual small-sample
/// correction). Conservative under ties, which is the safe direction for
/// pass thresholds on integer counts.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

/// One-sample KS p-value against the uniform law on [lo, hi].
double ks_uniform_pvalue(std::vector<double> xs, double lo, double hi);

// --- Stationary identity estimators ------------------------------------

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t sample_size = 0;
};

/// Fraction of samples with no atom in B(x, r), with binomial standard
/// error. Throws on an empty sample list.
Estimate empty_ball_probability(std::span<const Configuration> samples,
                                const SpaceSpec& space, const Point& x, double r);

/// Empirical P(kill possible at a fresh X ~ density) minus
/// p_plus / (1 - p_plus); zero in expectation at stationarity for
/// finite-mass regimes. "Kill possible" uses the policy's own admissible
/// set (ball for LG/LR, one-sided for LO/GO, everything for GG).
double mass_balance_deficit(std::span<const Configuration> samples, const SpaceSpec& space,
                            const LocationDensity& density, const PolicySpec& policy,
                            double p_plus, std::uint64_t fresh_draws, rng::Stream& rng);

/// Same draw loop but returning the raw occupancy estimate.
Estimate kill_probability(std::span<const Configuration> samples, const SpaceSpec& space,
                          const LocationDensity& density, const PolicySpec& policy,
                          std::uint64_t fresh_draws, rng::Stream& rng);

/// KS comparison between counts in `region` and counts in randomly
/// translated copies (disjoint halves of the sample set, fresh shifts,
/// n_shifts translated counts per sample in the second half). On the
/// torus this tests the group invariance of the law; on the interval or
/// box it serves as a boundary-effect detector.
TestReport translation_invariance_test(std::span<const Configuration> samples,
                                       const SpaceSpec& space, int n_shifts,
                                       const Region& region, rng::Stream& rng);

/// Empirical law of the count in `region` (whole space when absent).
std::map<std::uint64_t, double> count_distribution(std::span<const Configuration> samples,
                                                   const SpaceSpec& space,
                                                   const std::optional<Region>& region);

std::map<std::uint64_t, double> count_distribution_of_masses(
    std::span<const std::uint64_t> masses);

void write_histogram_csv(std::ostream& os, const std::map<std::uint64_t, double>& histogram);

/// Total-variation distance to the geometric law (1-rho) rho^k.
double tv_distance_to_geometric(const std::map<std::uint64_t, double>& histogram, double rho);

/// Compares counts in the coordinatewise-scaled regions [alpha*lower,
/// alpha*upper] against counts in the unscaled regions (the pushforward
/// under x -> alpha x). Each region is tested on its own disjoint chunk
/// of the samples; per-region KS p-values are Fisher-combined.
TestReport scale_invariance_test(std::span<const Configuration> samples,
                                 const SpaceSpec& space, const std::vector<double>& alpha,
                                 std::span<const BoxRegion> regions);

/// Maps every atom u to -log(u_i / T_i) coordinatewise and compares counts
/// in each window against counts in the window translated by `shift`.
/// Atoms with a zero coordinate are excluded and tallied in the report.
TestReport log_window_stationarity(std::span<const Configuration> samples,
                                   const SpaceSpec& space, std::span<const BoxRegion> windows,
                                   const std::vector<double>& shift);

// --- Accumulation monitoring -------------------------------------------

/// Counts in a boundary strip and an interior reference region along one
/// trajectory: values at each checkpoint plus log-spaced count samples
/// within each inter-checkpoint decade.
struct AccumulationReport {
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> strip_at_checkpoints;
  std::vector<std::uint64_t> interior_at_checkpoints;
  std::vector<std::vector<std::uint64_t>> strip_decade_samples;
  std::vector<std::vector<std::uint64_t>> interior_decade_samples;
  bool strip_strictly_increasing = false;
  double strip_last_decades_pvalue = 0.0;     // KS between last two decades
  double interior_last_decades_pvalue = 0.0;  // KS between last two decades
};

AccumulationReport accumulation_monitor(const EventHistory& history,
                                        const PolicySpec& policy, const SpaceSpec& space,
                                        const std::vector<std::uint64_t>& checkpoints,
                                        const Region& strip, const Region& interior,
                                        int samples_per_decade);

nlohmann::json accumulation_report_to_json(const AccumulationReport& report);

// --- Piecewise-density comparison dynamics ------------------------------

/// One step of the no-cross-kill dynamics used to bound the piecewise-
/// density system: the minus selects its victim exactly as the policy
/// does, but the kill is suppressed when the victim lies in a different
/// density segment than the arrival.
void step_no_cross_kill(Configuration& config, const Event& event,
                        const PolicySpec& policy, const SpaceSpec& space,
                        const std::vector<double>& segment_breakpoints);

}  // namespace sbd
