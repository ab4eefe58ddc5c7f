#include "sbd/sbd.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "sbd/configuration.hpp"
#include "sbd/dynamics.hpp"
#include "sbd/experiment.hpp"
#include "sbd/geometry.hpp"
#include "sbd/loynes.hpp"
#include "sbd/policies.hpp"
#include "sbd/region.hpp"

namespace {

thread_local std::string g_last_error;

sbd_status fail(sbd_status status, const char* message) {
  g_last_error = message;
  return status;
}

/* Runs fn, translating exceptions into error codes. */
template <typename Fn>
sbd_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(SBD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::logic_error& e) {
    return fail(SBD_ERR_PRECONDITION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SBD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SBD_ERR_INTERNAL, e.what());
  }
}

sbd::Point to_point(const double* x, int dim) {
  return sbd::Point(x, x + dim);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct sbd_space {
  sbd::SpaceSpec value;
};
struct sbd_density {
  sbd::LocationDensity value;
};
struct sbd_policy {
  sbd::PolicySpec value;
};
struct sbd_history {
  sbd::EventHistory value;
};
struct sbd_config {
  sbd::Configuration value;
};
struct sbd_region {
  sbd::Region value;
};
struct sbd_sample {
  sbd::StationarySample value;
};
struct sbd_experiment {
  sbd::ExperimentConfig value;
};

extern "C" {

const char* sbd_version(void) { return "0.1.0"; }

const char* sbd_last_error(void) { return g_last_error.c_str(); }

void sbd_string_free(char* s) { delete[] s; }

/* --- spaces ----------------------------------------------------------- */

sbd_status sbd_space_create_torus(const double* lengths, int dim, sbd_space** out) {
  if (!lengths || !out || dim < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sbd_space{sbd::SpaceSpec::torus(std::vector<double>(lengths, lengths + dim))};
    return SBD_OK;
  });
}

sbd_status sbd_space_create_interval(double length, sbd_space** out) {
  if (!out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sbd_space{sbd::SpaceSpec::interval(length)};
    return SBD_OK;
  });
}

sbd_status sbd_space_create_box(const double* lengths, int dim, sbd_space** out) {
  if (!lengths || !out || dim < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sbd_space{sbd::SpaceSpec::box(std::vector<double>(lengths, lengths + dim))};
    return SBD_OK;
  });
}

void sbd_space_free(sbd_space* space) { delete space; }

sbd_status sbd_space_dim(const sbd_space* space, int* out) {
  if (!space || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = space->value.dim();
  return SBD_OK;
}

sbd_status sbd_space_get_kind(const sbd_space* space, sbd_space_kind* out) {
  if (!space || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  switch (space->value.kind()) {
    case sbd::SpaceKind::Torus: *out = SBD_SPACE_TORUS; break;
    case sbd::SpaceKind::Interval: *out = SBD_SPACE_INTERVAL; break;
    case sbd::SpaceKind::Box: *out = SBD_SPACE_BOX; break;
  }
  return SBD_OK;
}

sbd_status sbd_space_distance(const sbd_space* space, const double* x, const double* y,
                              int dim, double* out) {
  if (!space || !x || !y || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = sbd::distance(space->value, to_point(x, dim), to_point(y, dim));
    return SBD_OK;
  });
}

sbd_status sbd_space_translate(const sbd_space* space, const double* x, const double* shift,
                               int dim, double* out) {
  if (!space || !x || !shift || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const sbd::Point moved =
        sbd::translate(space->value, to_point(x, dim), to_point(shift, dim));
    std::copy(moved.begin(), moved.end(), out);
    return SBD_OK;
  });
}

sbd_status sbd_leq_orthant(const double* x, const double* y, int dim, int* out) {
  if (!x || !y || !out || dim < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = sbd::leq_orthant(to_point(x, dim), to_point(y, dim)) ? 1 : 0;
    return SBD_OK;
  });
}

/* --- densities --------------------------------------------------------- */

sbd_status sbd_density_create_uniform(sbd_density** out) {
  if (!out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = new sbd_density{sbd::LocationDensity::uniform()};
  return SBD_OK;
}

sbd_status sbd_density_create_piecewise(const double* breakpoints, int n_breakpoints,
                                        const double* weights, int n_weights,
                                        sbd_density** out) {
  if (!breakpoints || !weights || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sbd_density{sbd::LocationDensity::piecewise_constant(
        std::vector<double>(breakpoints, breakpoints + n_breakpoints),
        std::vector<double>(weights, weights + n_weights))};
    return SBD_OK;
  });
}

void sbd_density_free(sbd_density* density) { delete density; }

/* --- policies ------------------------------------------------------------ */

sbd_status sbd_policy_create(const char* kind, double radius, sbd_policy** out) {
  if (!kind || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    sbd::PolicySpec spec{sbd::policy_kind_from_string(kind), radius};
    if (!(radius > 0.0)) throw std::invalid_argument("policy: radius must be positive");
    *out = new sbd_policy{spec};
    return SBD_OK;
  });
}

void sbd_policy_free(sbd_policy* policy) { delete policy; }

/* --- histories -------------------------------------------------------------- */

sbd_status sbd_history_create(const sbd_space* space, const sbd_density* density,
                              double p_plus, uint64_t seed, sbd_history** out) {
  if (!space || !density || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto stream = sbd::StreamSpec::with_p_plus(p_plus, density->value, seed);
    *out = new sbd_history{sbd::EventHistory(space->value, std::move(stream))};
    return SBD_OK;
  });
}

sbd_status sbd_history_create_rates(const sbd_space* space, const sbd_density* density,
                                    double lambda_plus, double lambda_minus, uint64_t seed,
                                    sbd_history** out) {
  if (!space || !density || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto stream = sbd::StreamSpec::with_rates(lambda_plus, lambda_minus, density->value, seed);
    *out = new sbd_history{sbd::EventHistory(space->value, std::move(stream))};
    return SBD_OK;
  });
}

void sbd_history_free(sbd_history* history) { delete history; }

sbd_status sbd_history_event(const sbd_history* history, int64_t index,
                             sbd_event_kind* kind, double* location, uint64_t* tie_seed) {
  if (!history || !kind || !location || !tie_seed) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const sbd::Event& e = history->value.at(index);
    *kind = e.kind == sbd::EventKind::Plus ? SBD_EVENT_PLUS : SBD_EVENT_MINUS;
    std::copy(e.location.begin(), e.location.end(), location);
    *tie_seed = e.tie_seed;
    return SBD_OK;
  });
}

/* --- configurations ------------------------------------------------------------ */

sbd_status sbd_config_create(sbd_config** out) {
  if (!out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = new sbd_config{};
  return SBD_OK;
}

sbd_status sbd_config_clone(const sbd_config* config, sbd_config** out) {
  if (!config || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = new sbd_config{config->value};
  return SBD_OK;
}

void sbd_config_free(sbd_config* config) { delete config; }

sbd_status sbd_config_add_atom(sbd_config* config, const double* x, int dim) {
  if (!config || !x || dim < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  config->value.add(to_point(x, dim));
  return SBD_OK;
}

sbd_status sbd_config_remove_atom(sbd_config* config, const double* x, int dim) {
  if (!config || !x || dim < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    config->value.remove(to_point(x, dim));
    return SBD_OK;
  });
}

sbd_status sbd_config_mass(const sbd_config* config, uint64_t* out) {
  if (!config || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = config->value.total_mass();
  return SBD_OK;
}

sbd_status sbd_config_distinct_atoms(const sbd_config* config, uint64_t* out) {
  if (!config || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = config->value.atoms().size();
  return SBD_OK;
}

sbd_status sbd_config_atom(const sbd_config* config, uint64_t index, double* location,
                           uint32_t* multiplicity) {
  if (!config || !location || !multiplicity) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (index >= config->value.atoms().size()) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "atom index out of range");
  }
  const auto& atom = config->value.atoms()[static_cast<std::size_t>(index)];
  std::copy(atom.location.begin(), atom.location.end(), location);
  *multiplicity = atom.multiplicity;
  return SBD_OK;
}

sbd_status sbd_config_equals(const sbd_config* a, const sbd_config* b, int* out) {
  if (!a || !b || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = a->value == b->value ? 1 : 0;
  return SBD_OK;
}

sbd_status sbd_config_is_dominated(const sbd_config* p, const sbd_config* q, int* out) {
  if (!p || !q || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = sbd::is_dominated(p->value, q->value) ? 1 : 0;
  return SBD_OK;
}

sbd_status sbd_config_count_in_ball(const sbd_config* config, const sbd_space* space,
                                    const double* x, int dim, double radius, uint64_t* out) {
  if (!config || !space || !x || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = sbd::count_in_ball(config->value, space->value, to_point(x, dim), radius);
    return SBD_OK;
  });
}

sbd_status sbd_config_has_point_in_orthant(const sbd_config* config, const sbd_space* space,
                                           const double* x, int dim, int* out) {
  if (!config || !space || !x || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = sbd::has_point_in_orthant(config->value, space->value, to_point(x, dim)) ? 1 : 0;
    return SBD_OK;
  });
}

sbd_status sbd_config_write_csv(const sbd_config* config, const sbd_space* space,
                                const char* path) {
  if (!config || !space || !path) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail(SBD_ERR_IO, "cannot open output file");
  sbd::write_configuration_csv(out, config->value, space->value);
  return out ? SBD_OK : fail(SBD_ERR_IO, "write failed");
}

sbd_status sbd_config_to_json(const sbd_config* config, char** out) {
  if (!config || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup_string(sbd::configuration_to_json(config->value).dump());
    return SBD_OK;
  });
}

/* --- regions -------------------------------------------------------------------- */

sbd_status sbd_region_create_ball(const double* center, int dim, double radius,
                                  sbd_region** out) {
  if (!center || !out || dim < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = new sbd_region{sbd::BallRegion{to_point(center, dim), radius}};
  return SBD_OK;
}

sbd_status sbd_region_create_box(const double* lower, const double* upper, int dim,
                                 sbd_region** out) {
  if (!lower || !upper || !out || dim < 1) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = new sbd_region{sbd::BoxRegion{to_point(lower, dim), to_point(upper, dim)}};
  return SBD_OK;
}

sbd_status sbd_region_create_boundary_strip(double delta, sbd_region** out) {
  if (!out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = new sbd_region{sbd::BoundaryStripRegion{delta}};
  return SBD_OK;
}

void sbd_region_free(sbd_region* region) { delete region; }

sbd_status sbd_config_count_in_region(const sbd_config* config, const sbd_space* space,
                                      const sbd_region* region, uint64_t* out) {
  if (!config || !space || !region || !out) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = sbd::count_in_region(config->value, space->value, region->value);
    return SBD_OK;
  });
}

/* --- dynamics ---------------------------------------------------------------------- */

sbd_status sbd_select_target(const sbd_policy* policy, const sbd_space* space,
                             const sbd_config* config, const double* x, int dim,
                             uint64_t tie_seed, int* found, double* target) {
  if (!policy || !space || !config || !x || !found || !target) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    sbd::TieBreaker tie(tie_seed);
    auto picked =
        sbd::select_target(policy->value, space->value, config->value, to_point(x, dim), tie);
    if (picked) {
      *found = 1;
      std::copy(picked->begin(), picked->end(), target);
    } else {
      *found = 0;
    }
    return SBD_OK;
  });
}

sbd_status sbd_step(sbd_config* config, const sbd_history* history, const sbd_policy* policy,
                    int64_t index) {
  if (!config || !history || !policy) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    sbd::step_in_place(config->value, history->value.at(index), policy->value,
                       history->value.space());
    return SBD_OK;
  });
}

sbd_status sbd_simulate_forward(sbd_config* config, const sbd_history* history,
                                const sbd_policy* policy, int64_t start_index,
                                uint64_t n_events) {
  if (!config || !history || !policy) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    config->value = sbd::simulate_forward(std::move(config->value), n_events, history->value,
                                          start_index, policy->value, history->value.space());
    return SBD_OK;
  });
}

/* --- backward coupling ---------------------------------------------------------------- */

sbd_status sbd_backward_iterate(const sbd_history* history, const sbd_policy* policy,
                                uint64_t depth, sbd_config** out) {
  if (!history || !policy || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sbd_config{sbd::backward_iterate(history->value, policy->value,
                                                history->value.space(), depth)};
    return SBD_OK;
  });
}

sbd_status sbd_sample_stationary(const sbd_history* history, const sbd_policy* policy,
                                 uint64_t max_depth, const sbd_region* window,
                                 sbd_sample** out) {
  if (!history || !policy || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<sbd::Region> w;
    if (window) w = window->value;
    *out = new sbd_sample{sbd::sample_minimal_stationary(
        history->value, policy->value, history->value.space(), max_depth, w)};
    return SBD_OK;
  });
}

void sbd_sample_free(sbd_sample* sample) { delete sample; }

sbd_status sbd_sample_config(const sbd_sample* sample, sbd_config** out) {
  if (!sample || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = new sbd_config{sample->value.config};
  return SBD_OK;
}

sbd_status sbd_sample_depth_used(const sbd_sample* sample, uint64_t* out) {
  if (!sample || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = sample->value.depth_used;
  return SBD_OK;
}

sbd_status sbd_sample_certificate(const sbd_sample* sample, sbd_certificate* out) {
  if (!sample || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  switch (sample->value.certificate) {
    case sbd::Certificate::EmptyRegeneration: *out = SBD_CERT_EMPTY_REGENERATION; break;
    case sbd::Certificate::DoublingFixpoint: *out = SBD_CERT_DOUBLING_FIXPOINT; break;
    case sbd::Certificate::NotConverged: *out = SBD_CERT_NOT_CONVERGED; break;
  }
  return SBD_OK;
}

sbd_status sbd_sample_regeneration_index(const sbd_sample* sample, int64_t* out) {
  if (!sample || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = sample->value.regeneration_index;
  return SBD_OK;
}

sbd_status sbd_coupling_time(const sbd_config* initial_a, const sbd_config* initial_b,
                             const sbd_history* history, const sbd_policy* policy,
                             int64_t start_index, uint64_t max_events, int* coupled,
                             uint64_t* time) {
  if (!initial_a || !initial_b || !history || !policy || !coupled || !time) {
    return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    auto t = sbd::coupling_time(initial_a->value, initial_b->value, history->value,
                                start_index, policy->value, history->value.space(), max_events);
    *coupled = t.has_value() ? 1 : 0;
    *time = t.value_or(0);
    return SBD_OK;
  });
}

/* --- experiments ------------------------------------------------------------------------ */

sbd_status sbd_experiment_create_from_file(const char* path, sbd_experiment** out) {
  if (!path || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = new sbd_experiment{sbd::parse_experiment_file(path)};
    return SBD_OK;
  } catch (const nlohmann::json::exception& e) {
    return fail(SBD_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(SBD_ERR_PARSE, e.what());
  }
}

sbd_status sbd_experiment_create_from_string(const char* json, sbd_experiment** out) {
  if (!json || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = new sbd_experiment{sbd::parse_experiment(nlohmann::json::parse(json))};
    return SBD_OK;
  } catch (const std::exception& e) {
    return fail(SBD_ERR_PARSE, e.what());
  }
}

void sbd_experiment_free(sbd_experiment* experiment) { delete experiment; }

sbd_status sbd_experiment_set_seed(sbd_experiment* experiment, uint64_t seed) {
  if (!experiment) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  experiment->value.stream.seed = seed;
  return SBD_OK;
}

sbd_status sbd_experiment_set_workers(sbd_experiment* experiment, int workers) {
  if (!experiment || workers < 1) return fail(SBD_ERR_INVALID_ARGUMENT, "bad worker count");
  experiment->value.workers = workers;
  return SBD_OK;
}

sbd_status sbd_experiment_set_output_dir(sbd_experiment* experiment, const char* dir) {
  if (!experiment || !dir) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  experiment->value.output_dir = dir;
  return SBD_OK;
}

sbd_status sbd_experiment_set_suite(sbd_experiment* experiment, const char* suite) {
  if (!experiment || !suite) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  if (auto* mode = std::get_if<sbd::AcceptanceMode>(&experiment->value.mode)) {
    mode->suite = suite;
    return SBD_OK;
  }
  return fail(SBD_ERR_PRECONDITION, "experiment is not in acceptance mode");
}

sbd_status sbd_experiment_mode_kind(const sbd_experiment* experiment, char** out) {
  if (!experiment || !out) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  *out = dup_string(sbd::mode_kind(experiment->value));
  return SBD_OK;
}

sbd_status sbd_experiment_validate(const sbd_experiment* experiment, char** diagnostics) {
  if (!experiment || !diagnostics) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& d : sbd::validate(experiment->value)) {
      out.push_back(
          {{"severity", d.severity == sbd::Diagnostic::Severity::Error ? "error" : "warning"},
           {"message", d.message}});
    }
    *diagnostics = dup_string(out.dump());
    return SBD_OK;
  });
}

sbd_status sbd_experiment_run(const sbd_experiment* experiment, int* exit_status) {
  if (!experiment || !exit_status) return fail(SBD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *exit_status = sbd::run_experiment(experiment->value);
    return SBD_OK;
  });
}

}  // extern "C"
