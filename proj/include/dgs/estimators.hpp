#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "dgs/basis.hpp"
#include "dgs/objective.hpp"
#include "dgs/parallel.hpp"
#include "dgs/quadrature.hpp"
#include "dgs/rng.hpp"

namespace dgs {

enum class EstimatorKind { dgs, mc_gs, fd, nesterov };

std::string_view to_string(EstimatorKind kind) noexcept;

struct GradientEstimate {
  Vector gradient;
  std::uint64_t evaluations_used = 0;
  EstimatorKind kind = EstimatorKind::dgs;
  // F(x) when the estimator observed it (center node, forward-difference base).
  std::optional<double> anchor_value;
};

struct DgsStencilOptions {
  // With an odd-order rule, evaluate F(x) once and reuse it as the center node
  // of every direction: (M - 1) * d + 1 evaluations instead of M * d.
  bool share_center = true;
  // Known F(x); saves the single shared center evaluation.
  std::optional<double> cached_anchor;
};

// Directional Gaussian smoothing gradient: one Gauss-Hermite directional
// estimate per column xi_i of the frame (radius sigmas[i]), assembled as
// sum_i D_i xi_i in direction order.
GradientEstimate dgs_gradient(const Objective& f, const Vector& x, const OrthonormalBasis& basis,
                              const Vector& sigmas, const GaussHermiteRule& rule,
                              const DgsStencilOptions& options = {},
                              WorkerPool& pool = WorkerPool::serial());

// Monte Carlo Gaussian-smoothing gradient, (1 / (N sigma)) sum F(x + sigma u) u
// with u ~ N(0, I). All directions are drawn from rng before any evaluation.
GradientEstimate mc_gs_gradient(const Objective& f, const Vector& x, double sigma,
                                std::size_t samples, Rng& rng,
                                WorkerPool& pool = WorkerPool::serial());

// 1e-6 * max(1, ||x||_inf).
double default_difference_step(const Vector& x);

GradientEstimate central_difference_gradient(const Objective& f, const Vector& x,
                                             std::optional<double> step = std::nullopt,
                                             WorkerPool& pool = WorkerPool::serial());

// Two-point random search direction ((F(x + h u) - F(x)) / h) u, u ~ N(0, I).
// cached_anchor supplies F(x) and saves one evaluation.
GradientEstimate nesterov_step_direction(const Objective& f, const Vector& x,
                                         std::optional<double> step, Rng& rng,
                                         std::optional<double> cached_anchor = std::nullopt);

}  // namespace dgs
