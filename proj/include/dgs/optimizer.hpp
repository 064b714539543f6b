#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dgs/basis.hpp"
#include "dgs/error.hpp"
#include "dgs/estimators.hpp"
#include "dgs/objective.hpp"
#include "dgs/parallel.hpp"

namespace dgs {

// Polynomial decay v_t = (v0 - vT) (1 - t / T)^power + vT. Queries past the
// horizon return vT; with power 0 the value is v0 for every t < T.
struct Schedule {
  double initial = 0.0;
  double final_value = 0.0;
  double power = 1.0;
  std::size_t horizon = 1;

  static Schedule constant(double value, std::size_t horizon = 1) {
    return Schedule{value, value, 0.0, horizon};
  }

  double value(std::size_t t) const;
  void validate(const std::string& name) const;
  double min_value() const noexcept { return initial < final_value ? initial : final_value; }
};

double schedule_value(const Schedule& s, std::size_t t);

struct DgsConfig {
  int order = 3;
  Schedule learning_rate = Schedule::constant(0.1);
  Schedule sigma = Schedule::constant(1.0);  // mean radius r_t
  double alpha = 0.0;                        // skew entry scale
  double beta = 0.0;                         // sigma half-width
  double gamma = 0.0;                        // trigger: ||g|| < gamma
  bool perturb = false;
  BasisUpdate basis_update = BasisUpdate::reset;
  bool share_center = true;
  std::size_t iterations = 1;
  std::uint64_t seed = 0;
  // Stop once F(x_t) <= target_loss. Off by default.
  std::optional<double> target_loss;

  void validate() const;
};

struct TrajectoryRecord {
  std::size_t iteration = 0;
  Vector state;
  double loss = 0.0;
  // Estimate computed at `state`; empty on the terminal record.
  Vector gradient;
  // Objective evaluations spent up to and including this record.
  std::uint64_t evaluations = 0;
  bool perturbed = false;

  bool has_gradient() const noexcept { return gradient.size() > 0; }
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;

  const Vector& final_state() const { return records.back().state; }
  double final_loss() const { return records.back().loss; }
  std::uint64_t evaluations() const { return records.empty() ? 0 : records.back().evaluations; }
  std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
};

// Run aborted by an evaluation failure or a non-finite iterate; carries the
// records completed so far. evaluations_spent() also counts the queries of the
// step that failed, which no record accounts for.
class OptimizationAborted : public Error {
 public:
  OptimizationAborted(const std::string& what, Trajectory partial, std::exception_ptr cause,
                      std::uint64_t evaluations_spent)
      : Error(what),
        partial_(std::move(partial)),
        cause_(std::move(cause)),
        evaluations_spent_(evaluations_spent) {}
  const Trajectory& partial() const noexcept { return partial_; }
  std::exception_ptr cause() const noexcept { return cause_; }
  std::uint64_t evaluations_spent() const noexcept { return evaluations_spent_; }

 private:
  Trajectory partial_;
  std::exception_ptr cause_;
  std::uint64_t evaluations_spent_;
};

// Optimizer-internal state exposed to observers once per iteration, after the
// estimate at x_t and before the update.
struct DgsIterationView {
  std::size_t iteration;
  const OrthonormalBasis& basis;
  const Vector& sigmas;
  const GradientEstimate& estimate;
};

using DgsObserver = std::function<void(const DgsIterationView&)>;

// Gradient descent on the DGS estimate with gradient-norm-triggered random
// perturbation of the frame and radii. Exactly cfg.iterations updates unless
// target_loss is reached.
Trajectory dgs_es_minimize(const Objective& f, const Vector& x0, const DgsConfig& cfg,
                           WorkerPool& pool = WorkerPool::serial(),
                           const DgsObserver& observer = {});

enum class BaselineMethod { mc_gs, fd, nesterov };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::fd;
  Schedule learning_rate = Schedule::constant(0.1);
  Schedule sigma = Schedule::constant(1.0);  // MC-GS only
  std::size_t samples = 1;                  // MC-GS only
  std::optional<double> step;               // FD / Nesterov difference step
  std::size_t iterations = 1;
  std::uint64_t seed = 0;
  std::optional<double> target_loss;

  static BaselineConfig defaults(BaselineMethod m) {
    BaselineConfig cfg;
    cfg.method = m;
    return cfg;
  }

  void validate() const;
};

// Plain descent x_{t+1} = x_t - lr_t g_t with the named estimator.
Trajectory baseline_minimize(const Objective& f, const Vector& x0, const BaselineConfig& cfg,
                             WorkerPool& pool = WorkerPool::serial());

}  // namespace dgs
