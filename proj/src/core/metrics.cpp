#include "dgs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgs/error.hpp"

namespace dgs {

namespace {

constexpr double kDegenerate = 1e-14;

double mean(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace

CosDist cos_dist(std::span<const Vector> states, const Vector& x_star) {
  if (states.size() < 2) throw MetricError("cos_dist needs at least one step");
  if (!x_star.allFinite()) throw MetricError("cos_dist target must be finite");
  CosDist result;
  double total = 0.0;
  for (std::size_t t = 1; t < states.size(); ++t) {
    const Vector step = states[t] - states[t - 1];
    const Vector target = x_star - states[t - 1];
    const double step_norm = step.norm();
    const double target_norm = target.norm();
    if (step_norm <= kDegenerate || target_norm <= kDegenerate) {
      ++result.degenerate_steps;
      continue;
    }
    const double cosine = std::clamp(step.dot(target) / (step_norm * target_norm), -1.0, 1.0);
    total += 1.0 - cosine;
    ++result.steps_used;
  }
  if (result.steps_used == 0) {
    throw MetricError("cos_dist undefined: all " + std::to_string(result.degenerate_steps) +
                      " steps are degenerate");
  }
  result.value = total / static_cast<double>(result.steps_used);
  return result;
}

CosDist cos_dist(const Trajectory& traj, const Vector& x_star) {
  std::vector<Vector> states;
  states.reserve(traj.records.size());
  for (const auto& record : traj.records) states.push_back(record.state);
  return cos_dist(std::span<const Vector>(states), x_star);
}

double grad_norm_std(std::span<const double> norms) {
  if (norms.empty()) throw MetricError("grad_norm_std needs at least one gradient record");
  const double mu = mean(norms);
  double s = 0.0;
  for (double v : norms) s += (v - mu) * (v - mu);
  return std::sqrt(s / static_cast<double>(norms.size()));
}

std::vector<double> gradient_norms(const Trajectory& traj) {
  std::vector<double> norms;
  for (const auto& record : traj.records) {
    if (record.has_gradient()) norms.push_back(record.gradient.norm());
  }
  return norms;
}

double grad_norm_std(const Trajectory& traj) { return grad_norm_std(gradient_norms(traj)); }

MetricReport metric_report(const Trajectory& traj, const Vector& x_star) {
  const std::vector<double> norms = gradient_norms(traj);
  const CosDist cd = cos_dist(traj, x_star);
  MetricReport report;
  report.cos_dist = cd.value;
  report.degenerate_steps = cd.degenerate_steps;
  report.grad_norm_std = grad_norm_std(norms);
  report.mean_grad_norm = mean(norms);
  report.iterations = traj.iterations();
  return report;
}

}  // namespace dgs
