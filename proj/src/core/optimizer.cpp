#include "dgs/optimizer.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dgs/quadrature.hpp"
#include "dgs/rng.hpp"

namespace dgs {

namespace {

// Stream ids under the run seed.
constexpr std::uint64_t kBasisStream = 1;
constexpr std::uint64_t kSigmaStream = 2;
constexpr std::uint64_t kEstimatorStream = 3;

void require_start(const Objective& f, const Vector& x0) {
  if (static_cast<std::size_t>(x0.size()) != f.dimension()) {
    throw InvalidArgument("initial state has " + std::to_string(x0.size()) +
                          " coordinates, objective expects " + std::to_string(f.dimension()));
  }
  if (!x0.allFinite()) throw InvalidArgument("initial state must be finite");
}

bool reached(const std::optional<double>& target, double loss) {
  return target.has_value() && loss <= *target;
}

// Drives the shared loop: `step` computes the estimate at x_t and reports F(x_t).
template <typename Step, typename AfterUpdate>
Trajectory descend(const Objective& f, const Vector& x0, std::size_t iterations,
                   const Schedule& learning_rate, const std::optional<double>& target_loss,
                   Step&& step, AfterUpdate&& after_update) {
  Trajectory traj;
  traj.records.reserve(iterations + 1);
  Vector x = x0;
  std::uint64_t spent = 0;
  const std::uint64_t counter_start = f.evaluations();

  auto abort = [&](const std::string& what) {
    throw OptimizationAborted(what, std::move(traj), std::current_exception(),
                              f.evaluations() - counter_start);
  };

  try {
    for (std::size_t t = 0; t < iterations; ++t) {
      auto [estimate, loss, loss_cost] = step(t, x);
      spent += estimate.evaluations_used + loss_cost;
      const double grad_norm = estimate.gradient.norm();
      const bool fired = after_update.trigger(grad_norm);
      traj.records.push_back({t, x, loss, estimate.gradient, spent, fired});
      if (reached(target_loss, loss)) return traj;

      x -= learning_rate.value(t) * estimate.gradient;
      if (!x.allFinite()) {
        throw DivergenceError("iterate became non-finite after update " + std::to_string(t) +
                              " (learning rate " + std::to_string(learning_rate.value(t)) +
                              " overshoots)");
      }
      if (fired) after_update.perturb(t);
    }
    const double loss = f(x);
    ++spent;
    traj.records.push_back({iterations, x, loss, Vector(), spent, false});
  } catch (const OptimizationAborted&) {
    throw;
  } catch (const std::exception& e) {
    abort(std::string("optimization aborted after ") + std::to_string(traj.records.size()) +
          " records: " + e.what());
  }
  return traj;
}

struct NoPerturbation {
  bool trigger(double) const { return false; }
  void perturb(std::size_t) const {}
};

struct StepResult {
  GradientEstimate estimate;
  double loss;
  std::uint64_t loss_cost;
};

}  // namespace

double Schedule::value(std::size_t t) const {
  if (t >= horizon) return final_value;
  const double remaining = 1.0 - static_cast<double>(t) / static_cast<double>(horizon);
  return (initial - final_value) * std::pow(remaining, power) + final_value;
}

void Schedule::validate(const std::string& name) const {
  if (horizon < 1) throw ConfigError(name + ".horizon", "schedule horizon must be at least 1");
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw ConfigError(name + ".power", "schedule power must be finite and non-negative");
  }
  if (!std::isfinite(initial)) throw ConfigError(name + ".initial", "must be finite");
  if (!std::isfinite(final_value)) throw ConfigError(name + ".final", "must be finite");
}

double schedule_value(const Schedule& s, std::size_t t) { return s.value(t); }

void DgsConfig::validate() const {
  if (order < 2) throw ConfigError("order", "quadrature order must be at least 2");
  learning_rate.validate("lr");
  sigma.validate("sigma");
  if (!(sigma.min_value() > 0.0)) throw ConfigError("sigma", "smoothing radius must stay positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha", "must be >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta", "must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma", "must be >= 0");
  if (perturb && !(beta < sigma.min_value())) {
    throw ConfigError("beta", "must be smaller than every mean radius r_t so sampled radii stay positive");
  }
}

void BaselineConfig::validate() const {
  learning_rate.validate("lr");
  if (method == BaselineMethod::mc_gs) {
    sigma.validate("sigma");
    if (!(sigma.min_value() > 0.0)) throw ConfigError("sigma", "smoothing radius must stay positive");
    if (samples == 0) throw ConfigError("samples", "must be at least 1");
  }
  if (step && (!(*step > 0.0) || !std::isfinite(*step))) {
    throw ConfigError("step", "difference step must be positive");
  }
}

Trajectory dgs_es_minimize(const Objective& f, const Vector& x0, const DgsConfig& cfg,
                           WorkerPool& pool, const DgsObserver& observer) {
  cfg.validate();
  require_start(f, x0);
  const std::size_t d = f.dimension();
  const auto n = static_cast<Eigen::Index>(d);
  const GaussHermiteRule rule = gauss_hermite_rule(cfg.order);

  Rng basis_rng(cfg.seed, kBasisStream);
  Rng sigma_rng(cfg.seed, kSigmaStream);
  OrthonormalBasis basis = identity_basis(d);
  // sigma_i = r_t + offset_i; offsets are redrawn on each trigger and persist.
  Vector offsets = Vector::Zero(n);
  Vector sigmas(n);

  struct Perturbation {
    const DgsConfig& cfg;
    OrthonormalBasis& basis;
    Vector& offsets;
    Rng& basis_rng;
    Rng& sigma_rng;
    bool trigger(double grad_norm) const { return cfg.perturb && grad_norm < cfg.gamma; }
    void perturb(std::size_t) {
      basis = perturb_basis(basis, cfg.alpha, basis_rng, cfg.basis_update);
      for (Eigen::Index i = 0; i < offsets.size(); ++i) {
        offsets(i) = sigma_rng.uniform(-cfg.beta, cfg.beta);
      }
    }
  } perturbation{cfg, basis, offsets, basis_rng, sigma_rng};

  auto step = [&](std::size_t t, const Vector& x) -> StepResult {
    const double r = cfg.sigma.value(t);
    sigmas = (offsets.array() + r).matrix();
    DgsStencilOptions options;
    options.share_center = cfg.share_center;
    GradientEstimate estimate = dgs_gradient(f, x, basis, sigmas, rule, options, pool);
    if (observer) observer(DgsIterationView{t, basis, sigmas, estimate});
    if (estimate.anchor_value) {
      const double loss = *estimate.anchor_value;
      return {std::move(estimate), loss, 0};
    }
    const double loss = f(x);
    return {std::move(estimate), loss, 1};
  };

  return descend(f, x0, cfg.iterations, cfg.learning_rate, cfg.target_loss, step, perturbation);
}

Trajectory baseline_minimize(const Objective& f, const Vector& x0, const BaselineConfig& cfg,
                             WorkerPool& pool) {
  cfg.validate();
  require_start(f, x0);
  Rng rng(cfg.seed, kEstimatorStream);

  auto step = [&](std::size_t t, const Vector& x) -> StepResult {
    const double loss = f(x);
    switch (cfg.method) {
      case BaselineMethod::mc_gs:
        return {mc_gs_gradient(f, x, cfg.sigma.value(t), cfg.samples, rng, pool), loss, 1};
      case BaselineMethod::fd:
        return {central_difference_gradient(f, x, cfg.step, pool), loss, 1};
      case BaselineMethod::nesterov:
        return {nesterov_step_direction(f, x, cfg.step, rng, loss), loss, 1};
    }
    throw InvalidArgument("unknown baseline method");
  };

  return descend(f, x0, cfg.iterations, cfg.learning_rate, cfg.target_loss, step, NoPerturbation{});
}

}  // namespace dgs
