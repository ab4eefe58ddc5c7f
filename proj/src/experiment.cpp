#include "sbd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "sbd/acceptance.hpp"
#include "sbd/parallel.hpp"
#include "sbd/stats.hpp"

namespace sbd {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SpaceSpec space_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "torus") return SpaceSpec::torus(j.at("lengths").get<std::vector<double>>());
  if (kind == "interval") {
    if (j.contains("length")) return SpaceSpec::interval(j.at("length").get<double>());
    return SpaceSpec::interval(j.at("lengths").at(0).get<double>());
  }
  if (kind == "box") return SpaceSpec::box(j.at("lengths").get<std::vector<double>>());
  throw std::invalid_argument("space: unknown kind " + kind);
}

nlohmann::json space_to_json(const SpaceSpec& space) {
  const char* kind = space.kind() == SpaceKind::Torus      ? "torus"
                     : space.kind() == SpaceKind::Interval ? "interval"
                                                           : "box";
  return {{"kind", kind}, {"lengths", space.lengths()}};
}

LocationDensity density_from_json(const nlohmann::json& j) {
  const std::string kind = j.value("kind", std::string("uniform"));
  if (kind == "uniform") return LocationDensity::uniform();
  if (kind == "piecewise_constant") {
    return LocationDensity::piecewise_constant(j.at("breakpoints").get<std::vector<double>>(),
                                               j.at("weights").get<std::vector<double>>());
  }
  throw std::invalid_argument("density: unknown kind " + kind);
}

nlohmann::json density_to_json(const LocationDensity& density) {
  if (density.kind() == LocationDensity::Kind::Uniform) return {{"kind", "uniform"}};
  return {{"kind", "piecewise_constant"},
          {"breakpoints", density.breakpoints()},
          {"weights", density.weights()}};
}

InitialCondition initial_from_json(const nlohmann::json& j) {
  InitialCondition init;
  if (j.is_null()) return init;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) init.atoms.push_back(a.get<Point>());
  }
  init.random_uniform = j.value("random_uniform", 0ull);
  return init;
}

nlohmann::json initial_to_json(const InitialCondition& init) {
  return {{"atoms", init.atoms}, {"random_uniform", init.random_uniform}};
}

}  // namespace

ExperimentConfig parse_experiment(const nlohmann::json& j) {
  ExperimentConfig config;
  config.space = space_from_json(j.at("space"));

  const auto& pj = j.at("policy");
  config.policy.kind = policy_kind_from_string(pj.at("kind").get<std::string>());
  config.policy.radius = pj.value("radius", 1.0);

  const auto& sj = j.at("stream");
  LocationDensity density = sj.contains("density") ? density_from_json(sj.at("density"))
                                                   : LocationDensity::uniform();
  const std::uint64_t seed = sj.value("seed", 0ull);
  if (sj.contains("lambda_plus") || sj.contains("lambda_minus")) {
    config.stream = StreamSpec::with_rates(sj.at("lambda_plus").get<double>(),
                                           sj.at("lambda_minus").get<double>(),
                                           std::move(density), seed);
  } else {
    config.stream =
        StreamSpec::with_p_plus(sj.at("p_plus").get<double>(), std::move(density), seed);
  }

  const auto& mj = j.at("mode");
  const std::string kind = mj.at("kind").get<std::string>();
  if (kind == "forward" || kind == "simulate") {
    ForwardMode mode;
    mode.n_events = mj.value("n_events", 0ull);
    mode.start_index = mj.value("start_index", static_cast<std::int64_t>(0));
    mode.initial = initial_from_json(mj.value("initial", nlohmann::json()));
    mode.record_every = std::max<std::uint64_t>(1, mj.value("record_every", 1ull));
    config.mode = mode;
  } else if (kind == "stationary") {
    StationaryMode mode;
    mode.max_depth = mj.value("max_depth", static_cast<std::uint64_t>(1) << 20);
    mode.replicas = mj.value("replicas", 1ull);
    if (mj.contains("window") && !mj.at("window").is_null()) {
      mode.window = region_from_json(mj.at("window"));
    }
    config.mode = mode;
  } else if (kind == "couple") {
    CoupleMode mode;
    mode.initial_a = initial_from_json(mj.value("initial_a", nlohmann::json()));
    mode.initial_b = initial_from_json(mj.value("initial_b", nlohmann::json()));
    mode.max_events = mj.value("max_events", 1000000ull);
    mode.replicas = mj.value("replicas", 1ull);
    config.mode = mode;
  } else if (kind == "acceptance") {
    AcceptanceMode mode;
    mode.suite = mj.value("suite", std::string("all"));
    config.mode = mode;
  } else {
    throw std::invalid_argument("mode: unknown kind " + kind);
  }

  if (j.contains("regions")) {
    for (const auto& r : j.at("regions")) config.regions.push_back(region_from_json(r));
  }
  config.output_dir = j.value("output", std::string("out"));
  config.workers = j.value("workers", 1);
  return config;
}

ExperimentConfig parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_experiment(j);
}

std::string mode_kind(const ExperimentConfig& config) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ForwardMode>) return "forward";
        else if constexpr (std::is_same_v<T, StationaryMode>) return "stationary";
        else if constexpr (std::is_same_v<T, CoupleMode>) return "couple";
        else return "acceptance";
      },
      config.mode);
}

nlohmann::json experiment_to_json(const ExperimentConfig& config) {
  nlohmann::json mode = std::visit(
      [](const auto& m) -> nlohmann::json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ForwardMode>) {
          return {{"kind", "forward"},
                  {"n_events", m.n_events},
                  {"start_index", m.start_index},
                  {"initial", initial_to_json(m.initial)},
                  {"record_every", m.record_every}};
        } else if constexpr (std::is_same_v<T, StationaryMode>) {
          nlohmann::json out = {{"kind", "stationary"},
                                {"max_depth", m.max_depth},
                                {"replicas", m.replicas}};
          if (m.window) out["window"] = region_to_json(*m.window);
          return out;
        } else if constexpr (std::is_same_v<T, CoupleMode>) {
          return {{"kind", "couple"},
                  {"initial_a", initial_to_json(m.initial_a)},
                  {"initial_b", initial_to_json(m.initial_b)},
                  {"max_events", m.max_events},
                  {"replicas", m.replicas}};
        } else {
          return {{"kind", "acceptance"}, {"suite", m.suite}};
        }
      },
      config.mode);

  nlohmann::json regions = nlohmann::json::array();
  for (const auto& r : config.regions) regions.push_back(region_to_json(r));

  // the output path is not part of the experiment's identity and is left
  // out so runs into different directories stay byte-comparable
  return {{"space", space_to_json(config.space)},
          {"policy", {{"kind", to_string(config.policy.kind)}, {"radius", config.policy.radius}}},
          {"stream",
           {{"p_plus", config.stream.p_plus},
            {"lambda_plus", config.stream.lambda_plus},
            {"lambda_minus", config.stream.lambda_minus},
            {"density", density_to_json(config.stream.density)},
            {"seed", config.stream.seed}}},
          {"mode", std::move(mode)},
          {"regions", std::move(regions)}};
}

std::vector<Diagnostic> validate(const ExperimentConfig& config) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string msg) {
    out.push_back({Diagnostic::Severity::Error, std::move(msg)});
  };
  auto warning = [&](std::string msg) {
    out.push_back({Diagnostic::Severity::Warning, std::move(msg)});
  };

  try {
    validate_policy_space(config.policy, config.space);
  } catch (const std::exception& e) {
    error(e.what());
  }
  try {
    config.stream.density.validate_on(config.space);
  } catch (const std::exception& e) {
    error(e.what());
  }
  if (std::holds_alternative<StationaryMode>(config.mode) && config.stream.p_plus >= 0.5) {
    warning("p_plus >= 1/2: outside the stability regime, the backward iterates "
            "are unlikely to converge");
  }
  if (std::holds_alternative<AcceptanceMode>(config.mode)) {
    try {
      suite_criteria(std::get<AcceptanceMode>(config.mode).suite);
    } catch (const std::exception& e) {
      error(e.what());
    }
  }
  for (const auto& region : config.regions) {
    if (const auto* ball = std::get_if<BallRegion>(&region)) {
      if (!config.space.contains(ball->center)) error("region: ball center outside the space");
    } else if (const auto* box = std::get_if<BoxRegion>(&region)) {
      if (!config.space.contains(box->lower) || !config.space.contains(box->upper)) {
        error("region: box corners outside the space");
      }
    }
  }
  auto check_initial = [&](const InitialCondition& init, const char* which) {
    for (const auto& a : init.atoms) {
      if (!config.space.contains(a)) {
        error(std::string("initial ") + which + ": atom outside the space");
        break;
      }
    }
  };
  if (const auto* fwd = std::get_if<ForwardMode>(&config.mode)) {
    check_initial(fwd->initial, "configuration");
  } else if (const auto* couple = std::get_if<CoupleMode>(&config.mode)) {
    check_initial(couple->initial_a, "A");
    check_initial(couple->initial_b, "B");
  }
  return out;
}

Configuration make_initial(const InitialCondition& initial, const SpaceSpec& space,
                           std::uint64_t seed) {
  Configuration config;
  for (const auto& a : initial.atoms) {
    if (!space.contains(a)) throw std::invalid_argument("initial atom outside the space");
    config.add(a);
  }
  rng::Stream stream(rng::derive(seed, 0xA70B5));
  for (std::uint64_t k = 0; k < initial.random_uniform; ++k) {
    config.add(uniform_point(space, stream));
  }
  return config;
}

namespace {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string provenance_line(const ExperimentConfig& config) {
  nlohmann::json j = experiment_to_json(config);
  return "# " + j.dump() + "\n";
}

int run_forward(const ExperimentConfig& config, const ForwardMode& mode) {
  const fs::path dir(config.output_dir);
  EventHistory history(config.space, config.stream);
  Configuration state = make_initial(mode.initial, config.space, config.stream.seed);

  std::ofstream trajectory(dir / "trajectory.csv", std::ios::binary);
  if (!trajectory) throw std::runtime_error("cannot write trajectory.csv");
  trajectory << provenance_line(config);
  trajectory << "step,index,kind";
  for (int i = 0; i < config.space.dim(); ++i) trajectory << ",x" << i;
  trajectory << ",mass";
  for (std::size_t r = 0; r < config.regions.size(); ++r) trajectory << ",region_" << r;
  trajectory << "\n";

  // summaries are accumulated online so long runs stay in constant memory
  std::map<std::uint64_t, double> mass_histogram;
  rng::Stream hold_rng(rng::derive(config.stream.seed, 0x9A1A));
  const double hold_rate = config.stream.lambda_plus + config.stream.lambda_minus;
  double palm_weighted = 0.0, palm_total = 0.0;
  std::uint64_t step_no = 0;
  StepObserver observer = [&](std::int64_t index, const Event& e, const Configuration& c) {
    ++step_no;
    mass_histogram[c.total_mass()] += 1.0;
    const double hold = hold_rng.next_exponential(hold_rate);
    palm_weighted += hold * static_cast<double>(c.total_mass());
    palm_total += hold;
    if (step_no % mode.record_every != 0) return;
    trajectory << step_no << "," << index << "," << (e.kind == EventKind::Plus ? "+" : "-");
    for (double v : e.location) trajectory << "," << format_double(v);
    trajectory << "," << c.total_mass();
    for (const auto& region : config.regions) {
      trajectory << "," << count_in_region(c, config.space, region);
    }
    trajectory << "\n";
  };

  const std::vector<StepObserver> observers{observer};
  state = simulate_forward(std::move(state), mode.n_events, history, mode.start_index,
                           config.policy, config.space, observers);
  trajectory.close();

  std::ostringstream final_csv;
  final_csv << provenance_line(config);
  write_configuration_csv(final_csv, state, config.space);
  write_text_file(dir / "final.csv", final_csv.str());

  nlohmann::json summary = {{"config", experiment_to_json(config)},
                            {"final", configuration_to_json(state)},
                            {"n_events", mode.n_events}};
  if (step_no > 0) {
    for (auto& [k, v] : mass_histogram) v /= static_cast<double>(step_no);
    std::ostringstream hist_csv;
    hist_csv << provenance_line(config);
    write_histogram_csv(hist_csv, mass_histogram);
    write_text_file(dir / "mass_histogram.csv", hist_csv.str());
    summary["palm_time_average_mass"] = palm_weighted / palm_total;
  }
  write_json_file(dir / "final.json", configuration_to_json(state));
  write_json_file(dir / "summary.json", summary);
  return 0;
}

int run_stationary(const ExperimentConfig& config, const StationaryMode& mode) {
  const fs::path dir(config.output_dir);
  std::vector<StationarySample> samples(mode.replicas);
  parallel_for(mode.replicas, config.workers, [&](std::uint64_t k) {
    StreamSpec stream = config.stream;
    stream.seed = rng::derive(config.stream.seed, k);
    EventHistory history(config.space, stream);
    samples[k] = sample_minimal_stationary(history, config.policy, config.space,
                                           mode.max_depth, mode.window);
  });

  std::ostringstream csv;
  csv << provenance_line(config);
  csv << "replica";
  for (int i = 0; i < config.space.dim(); ++i) csv << ",x" << i;
  csv << ",multiplicity\n";
  for (std::uint64_t k = 0; k < mode.replicas; ++k) {
    for (const auto& atom : samples[k].config.atoms()) {
      csv << k;
      for (double v : atom.location) csv << "," << format_double(v);
      csv << "," << atom.multiplicity << "\n";
    }
  }
  write_text_file(dir / "samples.csv", csv.str());

  nlohmann::json sidecars = nlohmann::json::array();
  std::uint64_t regenerated = 0, fixpoint = 0, not_converged = 0;
  for (std::uint64_t k = 0; k < mode.replicas; ++k) {
    const auto& s = samples[k];
    switch (s.certificate) {
      case Certificate::EmptyRegeneration: ++regenerated; break;
      case Certificate::DoublingFixpoint: ++fixpoint; break;
      case Certificate::NotConverged: ++not_converged; break;
    }
    nlohmann::json side = {{"replica", k},
                           {"seed", rng::derive(config.stream.seed, k)},
                           {"depth_used", s.depth_used},
                           {"certificate", to_string(s.certificate)},
                           {"mass", s.config.total_mass()},
                           {"policy", to_string(config.policy.kind)},
                           {"space", space_to_json(config.space)}};
    if (s.certificate == Certificate::EmptyRegeneration) {
      side["regeneration_index"] = s.regeneration_index;
    }
    sidecars.push_back(std::move(side));
  }
  write_json_file(dir / "samples.json", sidecars);

  nlohmann::json summary = {{"config", experiment_to_json(config)},
                            {"replicas", mode.replicas},
                            {"certificates",
                             {{"empty_regeneration", regenerated},
                              {"doubling_fixpoint", fixpoint},
                              {"not_converged", not_converged}}}};
  write_json_file(dir / "summary.json", summary);
  return 0;
}

int run_couple(const ExperimentConfig& config, const CoupleMode& mode) {
  const fs::path dir(config.output_dir);
  std::vector<std::optional<std::uint64_t>> times(mode.replicas);
  parallel_for(mode.replicas, config.workers, [&](std::uint64_t k) {
    StreamSpec stream = config.stream;
    stream.seed = rng::derive(config.stream.seed, k);
    EventHistory history(config.space, stream);
    const Configuration a =
        make_initial(mode.initial_a, config.space, rng::derive(stream.seed, 0xA));
    const Configuration b =
        make_initial(mode.initial_b, config.space, rng::derive(stream.seed, 0xB));
    times[k] = coupling_time(a, b, history, 0, config.policy, config.space, mode.max_events);
  });

  std::ostringstream csv;
  csv << provenance_line(config);
  csv << "replica,coupled,time\n";
  std::vector<double> coupled_times;
  for (std::uint64_t k = 0; k < mode.replicas; ++k) {
    if (times[k]) {
      csv << k << ",1," << *times[k] << "\n";
      coupled_times.push_back(static_cast<double>(*times[k]));
    } else {
      csv << k << ",0,\n";
    }
  }
  write_text_file(dir / "coupling.csv", csv.str());

  std::sort(coupled_times.begin(), coupled_times.end());
  auto quantile = [&](double q) -> double {
    if (coupled_times.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(q * (static_cast<double>(coupled_times.size()) - 1));
    return coupled_times[idx];
  };
  nlohmann::json summary = {
      {"config", experiment_to_json(config)},
      {"replicas", mode.replicas},
      {"coupled_fraction",
       static_cast<double>(coupled_times.size()) / static_cast<double>(mode.replicas)},
      {"quantiles",
       {{"q50", quantile(0.5)}, {"q90", quantile(0.9)}, {"q99", quantile(0.99)},
        {"max", coupled_times.empty() ? 0.0 : coupled_times.back()}}}};
  write_json_file(dir / "summary.json", summary);
  return 0;
}

int run_acceptance(const ExperimentConfig& config, const AcceptanceMode& mode,
                   std::ostream* progress) {
  const fs::path dir(config.output_dir);
  SuiteResult result = run_suite(mode.suite, config.stream.seed, config.workers, progress);
  write_json_file(dir / "report.json", suite_result_to_json(result));
  return result.all_pass ? 0 : 1;
}

}  // namespace

int run_experiment(const ExperimentConfig& config) {
  const auto diagnostics = validate(config);
  for (const auto& d : diagnostics) {
    if (d.severity == Diagnostic::Severity::Error) return 1;
  }
  try {
    fs::create_directories(config.output_dir);
  } catch (const std::exception&) {
    return 2;
  }
  try {
    return std::visit(
        [&](const auto& mode) -> int {
          using T = std::decay_t<decltype(mode)>;
          if constexpr (std::is_same_v<T, ForwardMode>) return run_forward(config, mode);
          else if constexpr (std::is_same_v<T, StationaryMode>) return run_stationary(config, mode);
          else if constexpr (std::is_same_v<T, CoupleMode>) return run_couple(config, mode);
          else return run_acceptance(config, mode, &std::cout);
        },
        config.mode);
  } catch (const std::runtime_error&) {
    return 2;
  }
}

}  // namespace sbd
