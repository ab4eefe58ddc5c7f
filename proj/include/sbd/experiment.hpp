#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sbd/dynamics.hpp"
#include "sbd/geometry.hpp"
#include "sbd/loynes.hpp"
#include "sbd/policies.hpp"
#include "sbd/region.hpp"

#include "json.hpp"

namespace sbd {

/// Initial configuration: explicit atoms and/or a number of uniform
/// random atoms (drawn from a replica-stable stream).
struct InitialCondition {
  std::vector<Point> atoms;
  std::uint64_t random_uniform = 0;
};

struct ForwardMode {
  std::uint64_t n_events = 0;
  std::int64_t start_index = 0;
  InitialCondition initial;
  std::uint64_t record_every = 1;  // trajectory CSV thinning
};

struct StationaryMode {
  std::uint64_t max_depth = 1 << 20;
  std::uint64_t replicas = 1;
  std::optional<Region> window;
};

struct CoupleMode {
  InitialCondition initial_a;
  InitialCondition initial_b;
  std::uint64_t max_events = 1000000;
  std::uint64_t replicas = 1;
};

struct AcceptanceMode {
  std::string suite = "all";
};

using Mode = std::variant<ForwardMode, StationaryMode, CoupleMode, AcceptanceMode>;

struct ExperimentConfig {
  SpaceSpec space = SpaceSpec::interval(1.0);
  PolicySpec policy;
  StreamSpec stream;
  Mode mode;
  std::vector<Region> regions;
  std::string output_dir = "out";
  int workers = 1;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string message;
};

/// Parses the structured-text (JSON) experiment file. Throws
/// std::invalid_argument on structural problems.
ExperimentConfig parse_experiment(const nlohmann::json& j);
ExperimentConfig parse_experiment_file(const std::string& path);

nlohmann::json experiment_to_json(const ExperimentConfig& config);
std::string mode_kind(const ExperimentConfig& config);

/// Structural and domain checks; diagnostics are returned, not thrown.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

Configuration make_initial(const InitialCondition& initial, const SpaceSpec& space,
                           std::uint64_t seed);

/// Executes the configured mode and writes its outputs under
/// config.output_dir. Returns 0 on success, 1 on validation failure or a
/// failed acceptance criterion, 2 on I/O trouble. Identical (config,
/// seed) produce byte-identical outputs regardless of the worker count.
int run_experiment(const ExperimentConfig& config);

}  // namespace sbd
