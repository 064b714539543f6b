#pragma once

#include <Eigen/Core>

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

namespace dgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline std::span<const double> as_span(const Vector& v) noexcept {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Axis-aligned box. Informational only: optimizers never project onto it.
struct Box {
  Vector lower;
  Vector upper;
};

// Black-box scalar field F: R^d -> R. The evaluation counter is the only
// budget ledger in the library; every estimator's reported cost is checked
// against it in the tests.
//
// The wrapped function must be pure and, when used with a multi-worker pool,
// safe to call concurrently.
class Objective {
 public:
  using Function = std::function<double(std::span<const double>)>;

  Objective(std::size_t dimension, Function fn, std::optional<Box> domain = std::nullopt);
  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  std::size_t dimension() const noexcept { return dimension_; }
  const std::optional<Box>& domain() const noexcept { return domain_; }

  // Counts one evaluation. Throws EvaluationError (carrying x) on a non-finite
  // value or a failing callback.
  double operator()(std::span<const double> x) const;
  double operator()(const Vector& x) const { return (*this)(as_span(x)); }

  std::uint64_t evaluations() const noexcept { return count_.load(std::memory_order_relaxed); }

 private:
  std::size_t dimension_;
  Function fn_;
  std::optional<Box> domain_;
  mutable std::atomic<std::uint64_t> count_{0};
};

}  // namespace dgs
