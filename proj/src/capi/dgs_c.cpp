#include "dgs/dgs.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "dgs/basis.hpp"
#include "dgs/benchmarks.hpp"
#include "dgs/error.hpp"
#include "dgs/estimators.hpp"
#include "dgs/harness.hpp"
#include "dgs/metrics.hpp"
#include "dgs/objective.hpp"
#include "dgs/optimizer.hpp"
#include "dgs/parallel.hpp"
#include "dgs/quadrature.hpp"
#include "dgs/rng.hpp"

struct dgs_objective {
  std::unique_ptr<dgs::Objective> impl;
};

struct dgs_trajectory {
  dgs::Trajectory impl;
};

struct dgs_experiment {
  dgs::ExperimentConfig cfg;
  std::vector<std::string> outputs;
};

namespace {

thread_local std::string g_last_error;

dgs_status fail(dgs_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps the exception currently being handled onto a status code.
dgs_status translate() {
  try {
    throw;
  } catch (const dgs::OptimizationAborted& e) {
    dgs_status status = DGS_E_INTERNAL;
    if (e.cause()) {
      try {
        std::rethrow_exception(e.cause());
      } catch (...) {
        status = translate();
      }
    }
    return fail(status, e.what());
  } catch (const dgs::InvalidArgument& e) {
    return fail(DGS_E_INVALID_ARGUMENT, e.what());
  } catch (const dgs::EvaluationError& e) {
    return fail(DGS_E_EVALUATION, e.what());
  } catch (const dgs::RankDeficientError& e) {
    return fail(DGS_E_RANK_DEFICIENT, e.what());
  } catch (const dgs::DivergenceError& e) {
    return fail(DGS_E_DIVERGED, e.what());
  } catch (const dgs::ConfigError& e) {
    return fail(DGS_E_CONFIG, e.what());
  } catch (const dgs::IoError& e) {
    return fail(DGS_E_IO, e.what());
  } catch (const dgs::MetricError& e) {
    return fail(DGS_E_METRIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DGS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DGS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(DGS_E_INTERNAL, "unknown error");
  }
}

template <class Body>
dgs_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return DGS_OK;
  } catch (...) {
    return translate();
  }
}

#define DGS_REQUIRE(cond, msg) \
  do {                         \
    if (!(cond)) return fail(DGS_E_INVALID_ARGUMENT, msg); \
  } while (0)

dgs::Vector copy_in(const double* x, std::size_t d) {
  return Eigen::Map<const dgs::Vector>(x, static_cast<Eigen::Index>(d));
}

void copy_out(const dgs::Vector& v, double* out) {
  std::copy(v.data(), v.data() + v.size(), out);
}

void report(const dgs::GradientEstimate& est, double* gradient, uint64_t* evaluations) {
  copy_out(est.gradient, gradient);
  if (evaluations) *evaluations = est.evaluations_used;
}

dgs::BenchmarkInfo named_benchmark(const char* name, std::size_t dim) {
  if (!name) throw dgs::InvalidArgument("benchmark name is null");
  auto kind = dgs::parse_benchmark(name);
  if (!kind) throw dgs::InvalidArgument(std::string("unknown benchmark '") + name + "'");
  return dgs::make_benchmark(*kind, dim);
}

dgs::Schedule to_schedule(const dgs_schedule& s, std::size_t horizon) {
  return dgs::Schedule{s.initial, s.final_value, s.power, horizon};
}

}  // namespace

extern "C" {

const char* dgs_version(void) { return "1.0.0"; }

const char* dgs_status_name(dgs_status status) {
  switch (status) {
    case DGS_OK: return "ok";
    case DGS_E_INVALID_ARGUMENT: return "invalid argument";
    case DGS_E_EVALUATION: return "evaluation failure";
    case DGS_E_RANK_DEFICIENT: return "rank deficient";
    case DGS_E_DIVERGED: return "diverged";
    case DGS_E_CONFIG: return "configuration error";
    case DGS_E_IO: return "i/o error";
    case DGS_E_METRIC: return "metric undefined";
    case DGS_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dgs_last_error(void) { return g_last_error.c_str(); }

dgs_status dgs_gauss_hermite(int order, double* nodes, double* weights) {
  DGS_REQUIRE(nodes && weights, "nodes and weights must be non-null");
  return guarded([&] {
    const auto rule = dgs::gauss_hermite_rule(order);
    std::copy(rule.nodes.begin(), rule.nodes.end(), nodes);
    std::copy(rule.weights.begin(), rule.weights.end(), weights);
  });
}

dgs_status dgs_objective_from_callback(size_t dim, dgs_eval_fn fn, void* user,
                                       dgs_objective** out) {
  DGS_REQUIRE(out, "out must be non-null");
  *out = nullptr;
  DGS_REQUIRE(fn, "callback must be non-null");
  DGS_REQUIRE(dim > 0, "dimension must be positive");
  return guarded([&] {
    auto call = [fn, user](std::span<const double> x) {
      double value = 0.0;
      const int rc = fn(x.data(), x.size(), user, &value);
      if (rc != 0) throw std::runtime_error("callback returned " + std::to_string(rc));
      return value;
    };
    *out = new dgs_objective{std::make_unique<dgs::Objective>(dim, call)};
  });
}

dgs_status dgs_objective_from_benchmark(const char* name, size_t dim, dgs_objective** out) {
  DGS_REQUIRE(out, "out must be non-null");
  *out = nullptr;
  return guarded([&] {
    const auto bench = named_benchmark(name, dim);
    const auto n = static_cast<Eigen::Index>(dim);
    auto fn = [bench](std::span<const double> x) { return dgs::evaluate(bench, x); };
    *out = new dgs_objective{std::make_unique<dgs::Objective>(
        dim, fn, dgs::Box{dgs::Vector::Constant(n, bench.lower), dgs::Vector::Constant(n, bench.upper)})};
  });
}

void dgs_objective_free(dgs_objective* objective) { delete objective; }

size_t dgs_objective_dimension(const dgs_objective* objective) {
  return objective ? objective->impl->dimension() : 0;
}

uint64_t dgs_objective_evaluations(const dgs_objective* objective) {
  return objective ? objective->impl->evaluations() : 0;
}

dgs_status dgs_objective_evaluate(dgs_objective* objective, const double* x, double* value) {
  DGS_REQUIRE(objective && x && value, "null argument");
  return guarded([&] {
    *value = (*objective->impl)(std::span<const double>(x, objective->impl->dimension()));
  });
}

dgs_status dgs_benchmark_gradient(const char* name, size_t dim, const double* x,
                                  double* gradient) {
  DGS_REQUIRE(x && gradient, "null argument");
  return guarded([&] {
    const auto bench = named_benchmark(name, dim);
    copy_out(dgs::reference_gradient(bench, std::span<const double>(x, dim)), gradient);
  });
}

dgs_status dgs_estimate_dgs(dgs_objective* objective, const double* x, const double* basis,
                            const double* sigmas, int order, int share_center, double* gradient,
                            uint64_t* evaluations) {
  DGS_REQUIRE(objective && x && sigmas && gradient, "null argument");
  return guarded([&] {
    const std::size_t d = objective->impl->dimension();
    const auto d_idx = static_cast<Eigen::Index>(d);
    dgs::OrthonormalBasis frame = dgs::identity_basis(d);
    if (basis) {
      const dgs::Matrix m = Eigen::Map<const dgs::Matrix>(basis, d_idx, d_idx);
      const double err = (m.transpose() * m - dgs::Matrix::Identity(d_idx, d_idx)).cwiseAbs().maxCoeff();
      if (!(err <= 1e-8)) throw dgs::InvalidArgument("basis is not orthonormal");
      frame = dgs::orthonormalize(m);
    }
    const auto rule = dgs::gauss_hermite_rule(order);
    dgs::DgsStencilOptions options;
    options.share_center = share_center != 0;
    report(dgs::dgs_gradient(*objective->impl, copy_in(x, d), frame, copy_in(sigmas, d), rule,
                             options),
           gradient, evaluations);
  });
}

dgs_status dgs_estimate_mc_gs(dgs_objective* objective, const double* x, double sigma,
                              size_t samples, uint64_t seed, double* gradient,
                              uint64_t* evaluations) {
  DGS_REQUIRE(objective && x && gradient, "null argument");
  return guarded([&] {
    dgs::Rng rng(seed);
    const std::size_t d = objective->impl->dimension();
    report(dgs::mc_gs_gradient(*objective->impl, copy_in(x, d), sigma, samples, rng), gradient,
           evaluations);
  });
}

dgs_status dgs_estimate_fd(dgs_objective* objective, const double* x, double step,
                           double* gradient, uint64_t* evaluations) {
  DGS_REQUIRE(objective && x && gradient, "null argument");
  return guarded([&] {
    const std::size_t d = objective->impl->dimension();
    std::optional<double> h;
    if (step > 0) h = step;
    report(dgs::central_difference_gradient(*objective->impl, copy_in(x, d), h), gradient,
           evaluations);
  });
}

dgs_status dgs_estimate_nesterov(dgs_objective* objective, const double* x, double step,
                                 uint64_t seed, double* gradient, uint64_t* evaluations) {
  DGS_REQUIRE(objective && x && gradient, "null argument");
  return guarded([&] {
    dgs::Rng rng(seed);
    const std::size_t d = objective->impl->dimension();
    std::optional<double> h;
    if (step > 0) h = step;
    report(dgs::nesterov_step_direction(*objective->impl, copy_in(x, d), h, rng), gradient,
           evaluations);
  });
}

void dgs_optimizer_params_default(dgs_method method, dgs_optimizer_params* params) {
  if (!params) return;
  const dgs::DgsConfig dcfg;
  const dgs::BaselineConfig bcfg;
  *params = dgs_optimizer_params{};
  params->method = method;
  params->iterations = 100;
  params->learning_rate = {bcfg.learning_rate.initial, bcfg.learning_rate.final_value,
                           bcfg.learning_rate.power};
  params->sigma = {dcfg.sigma.initial, dcfg.sigma.final_value, dcfg.sigma.power};
  params->order = dcfg.order;
  params->basis_update = DGS_BASIS_RESET;
  params->share_center = 1;
  params->samples = 1;
  params->step = 0.0;
  params->workers = 1;
}

dgs_status dgs_minimize(dgs_objective* objective, const double* x0,
                        const dgs_optimizer_params* params, dgs_trajectory** out) {
  DGS_REQUIRE(out, "out must be non-null");
  *out = nullptr;
  DGS_REQUIRE(objective && x0 && params, "null argument");
  DGS_REQUIRE(params->workers > 0, "workers must be positive");
  try {
    const std::size_t d = objective->impl->dimension();
    const std::size_t T = params->iterations;
    dgs::WorkerPool pool(params->workers);
    dgs::Trajectory traj;
    if (params->method == DGS_METHOD_DGS) {
      dgs::DgsConfig cfg;
      cfg.order = params->order;
      cfg.learning_rate = to_schedule(params->learning_rate, T);
      cfg.sigma = to_schedule(params->sigma, T);
      cfg.alpha = params->alpha;
      cfg.beta = params->beta;
      cfg.gamma = params->gamma;
      cfg.perturb = params->perturb != 0;
      cfg.basis_update = params->basis_update == DGS_BASIS_CUMULATIVE ? dgs::BasisUpdate::cumulative
                                                                      : dgs::BasisUpdate::reset;
      cfg.share_center = params->share_center != 0;
      cfg.iterations = T;
      cfg.seed = params->seed;
      traj = dgs::dgs_es_minimize(*objective->impl, copy_in(x0, d), cfg, pool);
    } else {
      dgs::BaselineConfig cfg;
      switch (params->method) {
        case DGS_METHOD_MC_GS: cfg.method = dgs::BaselineMethod::mc_gs; break;
        case DGS_METHOD_FD: cfg.method = dgs::BaselineMethod::fd; break;
        case DGS_METHOD_NESTEROV: cfg.method = dgs::BaselineMethod::nesterov; break;
        default: return fail(DGS_E_INVALID_ARGUMENT, "unknown method");
      }
      cfg.learning_rate = to_schedule(params->learning_rate, T);
      cfg.sigma = to_schedule(params->sigma, T);
      cfg.samples = params->samples;
      if (params->step > 0) cfg.step = params->step;
      cfg.iterations = T;
      cfg.seed = params->seed;
      traj = dgs::baseline_minimize(*objective->impl, copy_in(x0, d), cfg, pool);
    }
    *out = new dgs_trajectory{std::move(traj)};
    g_last_error.clear();
    return DGS_OK;
  } catch (const dgs::OptimizationAborted& e) {
    if (!e.partial().records.empty()) *out = new (std::nothrow) dgs_trajectory{e.partial()};
    return translate();
  } catch (...) {
    return translate();
  }
}

void dgs_trajectory_free(dgs_trajectory* trajectory) { delete trajectory; }

size_t dgs_trajectory_size(const dgs_trajectory* trajectory) {
  return trajectory ? trajectory->impl.records.size() : 0;
}

size_t dgs_trajectory_dimension(const dgs_trajectory* trajectory) {
  if (!trajectory || trajectory->impl.records.empty()) return 0;
  return static_cast<size_t>(trajectory->impl.records.front().state.size());
}

dgs_status dgs_trajectory_record(const dgs_trajectory* trajectory, size_t index,
                                 size_t* iteration, double* loss, double* grad_norm,
                                 uint64_t* evaluations, int* perturbed) {
  DGS_REQUIRE(trajectory, "null trajectory");
  DGS_REQUIRE(index < trajectory->impl.records.size(), "record index out of range");
  const auto& r = trajectory->impl.records[index];
  if (iteration) *iteration = r.iteration;
  if (loss) *loss = r.loss;
  if (grad_norm) *grad_norm = r.has_gradient() ? r.gradient.norm() : std::nan("");
  if (evaluations) *evaluations = r.evaluations;
  if (perturbed) *perturbed = r.perturbed ? 1 : 0;
  g_last_error.clear();
  return DGS_OK;
}

dgs_status dgs_trajectory_state(const dgs_trajectory* trajectory, size_t index, double* state) {
  DGS_REQUIRE(trajectory && state, "null argument");
  DGS_REQUIRE(index < trajectory->impl.records.size(), "record index out of range");
  copy_out(trajectory->impl.records[index].state, state);
  g_last_error.clear();
  return DGS_OK;
}

dgs_status dgs_trajectory_cos_dist(const dgs_trajectory* trajectory, const double* x_star,
                                   double* value) {
  DGS_REQUIRE(trajectory && x_star && value, "null argument");
  return guarded([&] {
    const auto d = static_cast<std::size_t>(dgs_trajectory_dimension(trajectory));
    *value = dgs::cos_dist(trajectory->impl, copy_in(x_star, d)).value;
  });
}

dgs_status dgs_trajectory_grad_norm_std(const dgs_trajectory* trajectory, double* value) {
  DGS_REQUIRE(trajectory && value, "null argument");
  return guarded([&] { *value = dgs::grad_norm_std(trajectory->impl); });
}

dgs_status dgs_experiment_new(dgs_experiment** out) {
  DGS_REQUIRE(out, "out must be non-null");
  *out = nullptr;
  return guarded([&] { *out = new dgs_experiment{}; });
}

dgs_status dgs_experiment_load(const char* path, dgs_experiment** out) {
  DGS_REQUIRE(out, "out must be non-null");
  *out = nullptr;
  DGS_REQUIRE(path, "path must be non-null");
  return guarded([&] { *out = new dgs_experiment{dgs::load_config(path), {}}; });
}

void dgs_experiment_free(dgs_experiment* experiment) { delete experiment; }

dgs_status dgs_experiment_set(dgs_experiment* experiment, const char* key, const char* value) {
  DGS_REQUIRE(experiment && key && value, "null argument");
  return guarded([&] { experiment->cfg.set(key, value); });
}

dgs_status dgs_experiment_validate(const dgs_experiment* experiment) {
  DGS_REQUIRE(experiment, "null experiment");
  return guarded([&] { experiment->cfg.validate(); });
}

static dgs_status run_experiment_impl(dgs_experiment* experiment, bool all) {
  DGS_REQUIRE(experiment, "null experiment");
  return guarded([&] {
    experiment->outputs.clear();
    for (const auto& p : dgs::run_to_directory(experiment->cfg, all)) {
      experiment->outputs.push_back(p.string());
      experiment->outputs.push_back(dgs::metrics_path_for(p).string());
    }
  });
}

dgs_status dgs_experiment_run(dgs_experiment* experiment) {
  return run_experiment_impl(experiment, false);
}

dgs_status dgs_experiment_compare(dgs_experiment* experiment) {
  return run_experiment_impl(experiment, true);
}

size_t dgs_experiment_output_count(const dgs_experiment* experiment) {
  return experiment ? experiment->outputs.size() : 0;
}

const char* dgs_experiment_output_path(const dgs_experiment* experiment, size_t index) {
  if (!experiment || index >= experiment->outputs.size()) return nullptr;
  return experiment->outputs[index].c_str();
}

dgs_status dgs_aggregate_table(const char* results_dir, char** text) {
  DGS_REQUIRE(results_dir, "results_dir must be non-null");
  if (text) *text = nullptr;
  return guarded([&] {
    const std::filesystem::path dir(results_dir);
    const auto rows = dgs::aggregate_table(dir);
    dgs::write_table(rows, dir / "table.csv");
    if (text) {
      const std::string s = dgs::format_table(rows);
      char* buf = static_cast<char*>(std::malloc(s.size() + 1));
      if (!buf) throw std::bad_alloc();
      std::memcpy(buf, s.c_str(), s.size() + 1);
      *text = buf;
    }
  });
}

void dgs_string_free(char* text) { std::free(text); }

size_t dgs_preset_count(void) { return dgs::presets().size(); }

const char* dgs_preset_name(size_t index) {
  const auto& all = dgs::presets();
  return index < all.size() ? all[index].name.c_str() : nullptr;
}

const char* dgs_preset_description(size_t index) {
  static thread_local std::string buffer;
  const auto& all = dgs::presets();
  if (index >= all.size()) return nullptr;
  buffer = dgs::describe_preset(all[index]);
  return buffer.c_str();
}

}  // extern "C"
