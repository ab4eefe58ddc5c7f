// Experiment runner for the spatial birth-death simulator. All work goes
// through the C API (sbd/sbd.h); this binary only handles flags and exit
// codes.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "sbd/sbd.h"

namespace {

struct ExperimentDeleter {
  void operator()(sbd_experiment* e) const { sbd_experiment_free(e); }
};
using ExperimentHandle = std::unique_ptr<sbd_experiment, ExperimentDeleter>;

struct Options {
  std::string config_path;
  std::string output_dir;
  std::string suite;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
};

int run_mode(const Options& opts, const std::string& expected_mode) {
  ExperimentHandle experiment;
  if (!opts.config_path.empty()) {
    sbd_experiment* raw = nullptr;
    if (sbd_experiment_create_from_file(opts.config_path.c_str(), &raw) != SBD_OK) {
      std::fprintf(stderr, "error: %s\n", sbd_last_error());
      return 1;
    }
    experiment.reset(raw);
  } else if (expected_mode == "acceptance") {
    // acceptance runs fine without a config file
    const std::string inline_config =
        R"({"space":{"kind":"interval","length":1.0},)"
        R"("policy":{"kind":"LG"},)"
        R"("stream":{"p_plus":0.3,"seed":42},)"
        R"("mode":{"kind":"acceptance","suite":"all"}})";
    sbd_experiment* raw = nullptr;
    if (sbd_experiment_create_from_string(inline_config.c_str(), &raw) != SBD_OK) {
      std::fprintf(stderr, "error: %s\n", sbd_last_error());
      return 1;
    }
    experiment.reset(raw);
  } else {
    std::fprintf(stderr, "error: --config is required\n");
    return 1;
  }

  char* kind_raw = nullptr;
  sbd_experiment_mode_kind(experiment.get(), &kind_raw);
  const std::string kind = kind_raw ? kind_raw : "";
  sbd_string_free(kind_raw);
  if (kind != expected_mode) {
    std::fprintf(stderr, "error: config mode is '%s' but the subcommand expects '%s'\n",
                 kind.c_str(), expected_mode.c_str());
    return 1;
  }

  if (opts.seed_set) sbd_experiment_set_seed(experiment.get(), opts.seed);
  if (opts.workers > 0) sbd_experiment_set_workers(experiment.get(), opts.workers);
  if (!opts.output_dir.empty()) {
    sbd_experiment_set_output_dir(experiment.get(), opts.output_dir.c_str());
  }
  if (!opts.suite.empty() && expected_mode == "acceptance") {
    if (sbd_experiment_set_suite(experiment.get(), opts.suite.c_str()) != SBD_OK) {
      std::fprintf(stderr, "error: %s\n", sbd_last_error());
      return 1;
    }
  }

  char* diagnostics_raw = nullptr;
  if (sbd_experiment_validate(experiment.get(), &diagnostics_raw) != SBD_OK) {
    std::fprintf(stderr, "error: %s\n", sbd_last_error());
    return 1;
  }
  bool has_error = false;
  {
    const auto diagnostics = nlohmann::json::parse(diagnostics_raw);
    sbd_string_free(diagnostics_raw);
    for (const auto& d : diagnostics) {
      const std::string severity = d.at("severity").get<std::string>();
      std::fprintf(stderr, "%s: %s\n", severity.c_str(),
                   d.at("message").get<std::string>().c_str());
      has_error = has_error || severity == "error";
    }
  }
  if (has_error) return 1;

  int exit_status = 0;
  if (sbd_experiment_run(experiment.get(), &exit_status) != SBD_OK) {
    std::fprintf(stderr, "error: %s\n", sbd_last_error());
    return 2;
  }
  return exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("sbd ") + sbd_version() +
               " - spatial birth-death process simulator"};
  app.require_subcommand(1);

  Options opts;
  auto add_common = [&](CLI::App* cmd, bool config_required) {
    auto* config = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) config->required();
    cmd->add_option("--seed", opts.seed, "override the stream seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--workers", opts.workers, "replica parallelism")->capture_default_str();
    cmd->add_option("--out", opts.output_dir, "output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "run the forward recursion");
  add_common(simulate, true);
  auto* stationary =
      app.add_subcommand("stationary", "sample the minimal stationary configuration");
  add_common(stationary, true);
  auto* couple = app.add_subcommand("couple", "measure coupling times of two initial states");
  add_common(couple, true);
  auto* acceptance = app.add_subcommand("acceptance", "run an acceptance suite");
  add_common(acceptance, false);
  acceptance->add_option("--suite", opts.suite, "suite name (default from config, else 'all')");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return run_mode(opts, "forward");
  if (stationary->parsed()) return run_mode(opts, "stationary");
  if (couple->parsed()) return run_mode(opts, "couple");
  return run_mode(opts, "acceptance");
}
