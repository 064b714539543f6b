#include "dgs/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "dgs/error.hpp"

namespace dgs {

namespace {

// Orthonormal Hermite recurrence: returns (p_M(x), p_M'(x)).
std::pair<double, double> normalized_hermite(int order, double x) {
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (int j = 1; j <= order; ++j) {
    const double next = x * std::sqrt(2.0 / j) * cur -
                        std::sqrt(static_cast<double>(j - 1) / j) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, std::sqrt(2.0 * order) * prev};
}

}  // namespace

GaussHermiteRule gauss_hermite_rule(int order) {
  if (order < 2) {
    throw InvalidArgument("Gauss-Hermite order must be at least 2 (got " + std::to_string(order) +
                          "); a one-point rule makes every directional estimate zero");
  }
  const auto m = static_cast<Eigen::Index>(order);

  // Jacobi matrix of H_k: zero diagonal, off-diagonal sqrt(k / 2).
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(m - 1);
  for (Eigen::Index k = 1; k < m; ++k) off(k - 1) = std::sqrt(static_cast<double>(k) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("Hermite Jacobi eigensolver failed");

  std::vector<double> nodes(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::vector<double> weights(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double x = nodes[i];
    for (int iter = 0; iter < 8; ++iter) {
      const auto [p, dp] = normalized_hermite(order, x);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    nodes[i] = x;
  }
  std::sort(nodes.begin(), nodes.end());

  // Weights from the polished nodes, then exact mirror symmetry.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double dp = normalized_hermite(order, nodes[i]).second;
    weights[i] = 2.0 / (dp * dp);
  }
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double node = 0.5 * (nodes[j] - nodes[i]);
    const double weight = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -node;
    nodes[j] = node;
    weights[i] = weight;
    weights[j] = weight;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  return GaussHermiteRule{order, std::move(nodes), std::move(weights)};
}

DirectionalQuery::DirectionalQuery(Vector anchor, Vector direction, double radius)
    : anchor_(std::move(anchor)), direction_(std::move(direction)), radius_(radius) {
  if (anchor_.size() != direction_.size()) {
    throw InvalidArgument("query anchor and direction have different dimensions");
  }
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw InvalidArgument("smoothing radius must be positive and finite");
  }
  if (std::abs(direction_.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("query direction must have unit norm");
  }
}

std::vector<double> stencil_offsets(const GaussHermiteRule& rule, double radius) {
  std::vector<double> offsets(rule.nodes.size());
  for (std::size_t m = 0; m < offsets.size(); ++m) {
    offsets[m] = std::numbers::sqrt2 * radius * rule.nodes[m];
  }
  return offsets;
}

double directional_derivative_from_values(const GaussHermiteRule& rule, double radius,
                                          std::span<const double> values) {
  if (values.size() != rule.nodes.size()) {
    throw InvalidArgument("expected one objective value per quadrature node");
  }
  // Mirrored nodes share |v| and w, so pairing them keeps the sum exactly odd
  // in F (constants and even cross-sections give exactly 0). The center node
  // contributes v = 0. Pairs are visited outermost first, a fixed order.
  const std::size_t m = values.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < m / 2; ++k) {
    const std::size_t hi = m - 1 - k;
    sum += rule.weights[hi] * rule.nodes[hi] * (values[hi] - values[k]);
  }
  return std::numbers::sqrt2 * sum / (std::sqrt(std::numbers::pi) * radius);
}

double dgs_directional_derivative(const Objective& f, const DirectionalQuery& query,
                                  const GaussHermiteRule& rule, std::optional<double> cached_anchor,
                                  WorkerPool& pool) {
  if (static_cast<std::size_t>(query.anchor().size()) != f.dimension()) {
    throw InvalidArgument("query dimension does not match the objective");
  }
  const std::vector<double> offsets = stencil_offsets(rule, query.radius());
  std::vector<double> values(offsets.size(), 0.0);
  const bool reuse_center = cached_anchor.has_value() && rule.has_center_node();
  if (reuse_center) values[rule.center_index()] = *cached_anchor;

  pool.parallel_for(offsets.size(), [&](std::size_t m) {
    if (reuse_center && m == rule.center_index()) return;
    const Vector point = query.anchor() + offsets[m] * query.direction();
    try {
      values[m] = f(point);
    } catch (const EvaluationError& e) {
      throw e.with_location(std::nullopt, m);
    }
  });
  return directional_derivative_from_values(rule, query.radius(), values);
}

}  // namespace dgs
