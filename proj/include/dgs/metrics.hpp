#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dgs/objective.hpp"
#include "dgs/optimizer.hpp"

namespace dgs {

struct CosDist {
  double value = 0.0;
  std::size_t steps_used = 0;
  // Steps skipped because ||x_t - x_{t-1}|| or ||x* - x_{t-1}|| <= 1e-14.
  std::size_t degenerate_steps = 0;
};

// Mean over steps of 1 - cos(angle between the realized step and x* - x_{t-1}).
// Throws MetricError when every step is degenerate.
CosDist cos_dist(std::span<const Vector> states, const Vector& x_star);
CosDist cos_dist(const Trajectory& traj, const Vector& x_star);

// Population standard deviation of the estimate norms.
double grad_norm_std(std::span<const double> norms);
double grad_norm_std(const Trajectory& traj);

std::vector<double> gradient_norms(const Trajectory& traj);

struct MetricReport {
  double cos_dist = 0.0;
  double grad_norm_std = 0.0;
  double mean_grad_norm = 0.0;
  std::size_t iterations = 0;
  std::size_t degenerate_steps = 0;
};

MetricReport metric_report(const Trajectory& traj, const Vector& x_star);

}  // namespace dgs
