#include "dgs/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dgs/error.hpp"

namespace dgs {

namespace {

void require_dimension(const Objective& f, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != f.dimension()) {
    throw InvalidArgument("point has " + std::to_string(x.size()) +
                          " coordinates, objective expects " + std::to_string(f.dimension()));
  }
}

void require_finite(const Vector& g, const Vector& x, std::string_view estimator) {
  if (!g.allFinite()) {
    throw EvaluationError(std::string(estimator) + " estimate overflowed",
                          {x.data(), x.data() + x.size()});
  }
}

double checked_step(std::optional<double> step, const Vector& x) {
  const double h = step ? *step : default_difference_step(x);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("difference step must be positive and finite");
  }
  return h;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::dgs: return "DGS";
    case EstimatorKind::mc_gs: return "MC-GS";
    case EstimatorKind::fd: return "FD";
    case EstimatorKind::nesterov: return "NESTEROV";
  }
  return "?";
}

GradientEstimate dgs_gradient(const Objective& f, const Vector& x, const OrthonormalBasis& basis,
                              const Vector& sigmas, const GaussHermiteRule& rule,
                              const DgsStencilOptions& options, WorkerPool& pool) {
  require_dimension(f, x);
  const std::size_t d = f.dimension();
  if (basis.dimension() != d || static_cast<std::size_t>(sigmas.size()) != d) {
    throw InvalidArgument("point, basis and sigma vector dimensions disagree");
  }
  if (rule.order < 2) throw InvalidArgument("Gauss-Hermite order must be at least 2");
  for (Eigen::Index i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas(i) > 0.0) || !std::isfinite(sigmas(i))) {
      throw InvalidArgument("smoothing radius " + std::to_string(i) + " must be positive");
    }
  }

  const std::size_t order = rule.nodes.size();
  const bool share = options.share_center && rule.has_center_node();
  const std::size_t center = rule.center_index();

  GradientEstimate estimate;
  estimate.kind = EstimatorKind::dgs;

  std::vector<double> values(d * order, 0.0);
  if (share) {
    double anchor = 0.0;
    if (options.cached_anchor) {
      anchor = *options.cached_anchor;
    } else {
      try {
        anchor = f(x);
      } catch (const EvaluationError& e) {
        throw e.with_location(std::nullopt, center);
      }
      estimate.evaluations_used += 1;
    }
    estimate.anchor_value = anchor;
    for (std::size_t i = 0; i < d; ++i) values[i * order + center] = anchor;
  }

  std::vector<std::vector<double>> offsets(d);
  for (std::size_t i = 0; i < d; ++i) offsets[i] = stencil_offsets(rule, sigmas(static_cast<Eigen::Index>(i)));

  // Flattened (direction, node) tasks, skipping shared centers.
  std::vector<std::size_t> tasks;
  tasks.reserve(d * order);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t m = 0; m < order; ++m) {
      if (share && m == center) continue;
      tasks.push_back(i * order + m);
    }
  }
  pool.parallel_for(tasks.size(), [&](std::size_t k) {
    const std::size_t i = tasks[k] / order;
    const std::size_t m = tasks[k] % order;
    const Vector point = x + offsets[i][m] * basis.column(i);
    try {
      values[tasks[k]] = f(point);
    } catch (const EvaluationError& e) {
      throw e.with_location(i, m);
    }
  });
  estimate.evaluations_used += tasks.size();
  if (!share && rule.has_center_node()) estimate.anchor_value = values[center];

  estimate.gradient = Vector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const double derivative = directional_derivative_from_values(
        rule, sigmas(static_cast<Eigen::Index>(i)),
        std::span<const double>(values.data() + i * order, order));
    estimate.gradient += derivative * basis.column(i);
  }
  require_finite(estimate.gradient, x, "DGS");
  return estimate;
}

GradientEstimate mc_gs_gradient(const Objective& f, const Vector& x, double sigma,
                                std::size_t samples, Rng& rng, WorkerPool& pool) {
  require_dimension(f, x);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("smoothing radius must be positive and finite");
  }
  if (samples == 0) throw InvalidArgument("sample count must be at least 1");
  const auto d = static_cast<Eigen::Index>(f.dimension());
  const auto n = static_cast<Eigen::Index>(samples);

  Matrix directions(d, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index j = 0; j < d; ++j) directions(j, m) = rng.normal();
  }
  std::vector<double> values(samples);
  pool.parallel_for(samples, [&](std::size_t m) {
    const Vector point = x + sigma * directions.col(static_cast<Eigen::Index>(m));
    values[m] = f(point);
  });

  Vector g = Vector::Zero(d);
  for (Eigen::Index m = 0; m < n; ++m) g += values[static_cast<std::size_t>(m)] * directions.col(m);
  g /= static_cast<double>(samples) * sigma;
  require_finite(g, x, "MC-GS");
  return GradientEstimate{std::move(g), samples, EstimatorKind::mc_gs, std::nullopt};
}

double default_difference_step(const Vector& x) {
  const double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  return 1e-6 * std::max(1.0, scale);
}

GradientEstimate central_difference_gradient(const Objective& f, const Vector& x,
                                             std::optional<double> step, WorkerPool& pool) {
  require_dimension(f, x);
  const double h = checked_step(step, x);
  const std::size_t d = f.dimension();
  std::vector<double> values(2 * d);
  pool.parallel_for(2 * d, [&](std::size_t k) {
    Vector point = x;
    const auto i = static_cast<Eigen::Index>(k / 2);
    point(i) += (k % 2 == 0) ? h : -h;
    try {
      values[k] = f(point);
    } catch (const EvaluationError& e) {
      throw e.with_location(k / 2, k % 2);
    }
  });
  Vector g(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    g(static_cast<Eigen::Index>(i)) = (values[2 * i] - values[2 * i + 1]) / (2.0 * h);
  }
  require_finite(g, x, "FD");
  return GradientEstimate{std::move(g), 2 * d, EstimatorKind::fd, std::nullopt};
}

GradientEstimate nesterov_step_direction(const Objective& f, const Vector& x,
                                         std::optional<double> step, Rng& rng,
                                         std::optional<double> cached_anchor) {
  require_dimension(f, x);
  const double h = checked_step(step, x);
  const auto d = static_cast<Eigen::Index>(f.dimension());
  Vector u(d);
  for (Eigen::Index j = 0; j < d; ++j) u(j) = rng.normal();

  std::uint64_t used = 0;
  double base = 0.0;
  if (cached_anchor) {
    base = *cached_anchor;
  } else {
    base = f(x);
    ++used;
  }
  const double shifted = f(Vector(x + h * u));
  ++used;
  Vector g = ((shifted - base) / h) * u;
  require_finite(g, x, "Nesterov");
  return GradientEstimate{std::move(g), used, EstimatorKind::nesterov, base};
}

}  // namespace dgs
