#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dgs/objective.hpp"
#include "dgs/parallel.hpp"

namespace dgs {

// M-point Gauss-Hermite rule for the weight exp(-v^2): nodes are the roots of
// the physicists' Hermite polynomial H_M, ascending and exactly symmetric
// about zero (the middle node is exactly 0 for odd M).
struct GaussHermiteRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  bool has_center_node() const noexcept { return order % 2 == 1; }
  std::size_t center_index() const noexcept { return static_cast<std::size_t>(order / 2); }
};

// Golub-Welsch eigenvalues of the Hermite Jacobi matrix, polished by Newton
// steps on the normalized recurrence. Requires order >= 2: a one-point rule
// only has the node v = 0 and every directional estimate would vanish.
GaussHermiteRule gauss_hermite_rule(int order);

// A 1D cross-section y -> F(anchor + y * direction) smoothed with radius sigma.
class DirectionalQuery {
 public:
  DirectionalQuery(Vector anchor, Vector direction, double radius);

  const Vector& anchor() const noexcept { return anchor_; }
  const Vector& direction() const noexcept { return direction_; }
  double radius() const noexcept { return radius_; }

 private:
  Vector anchor_;
  Vector direction_;
  double radius_;
};

// sqrt(2) * sigma * v_m for every node, in node order.
std::vector<double> stencil_offsets(const GaussHermiteRule& rule, double radius);

// (1 / (sqrt(pi) sigma)) * sum_m w_m F_m sqrt(2) v_m, accumulated in ascending
// node order. values[m] is F at anchor + stencil_offsets[m] * direction.
double directional_derivative_from_values(const GaussHermiteRule& rule, double radius,
                                          std::span<const double> values);

// Gauss-Hermite estimate of the derivative at 0 of the Gaussian-smoothed
// cross-section. Spends M evaluations, or M - 1 when the rule has a center
// node and cached_anchor supplies F(anchor).
double dgs_directional_derivative(const Objective& f, const DirectionalQuery& query,
                                  const GaussHermiteRule& rule,
                                  std::optional<double> cached_anchor = std::nullopt,
                                  WorkerPool& pool = WorkerPool::serial());

}  // namespace dgs
