#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "dgs/objective.hpp"
#include "dgs/rng.hpp"

namespace dgs {

enum class BenchmarkKind { sphere, sharp_ridge, ackley, rastrigin, schaffer, schwefel };

inline constexpr std::array<BenchmarkKind, 6> kAllBenchmarks = {
    BenchmarkKind::sphere,    BenchmarkKind::sharp_ridge, BenchmarkKind::ackley,
    BenchmarkKind::rastrigin, BenchmarkKind::schaffer,    BenchmarkKind::schwefel};

// Stable identifiers: Sphere, SharpRidge, Ackley, Rastrigin, Schaffer, Schwefel.
std::string_view benchmark_name(BenchmarkKind kind) noexcept;

// Case-insensitive; '-' and '_' are ignored ("sharp-ridge" == "SharpRidge").
std::optional<BenchmarkKind> parse_benchmark(std::string_view name);

struct AckleyConstants {
  static constexpr double a = 20.0;
  static constexpr double b = 0.2;
  static constexpr double c = 2.0 * 3.14159265358979323846;
};

struct BenchmarkInfo {
  BenchmarkKind kind = BenchmarkKind::sphere;
  std::size_t dimension = 0;
  // Initialization box [lower, upper]^d.
  double lower = 0.0;
  double upper = 0.0;
  Vector minimizer;
  // Documented minimum. Schwefel's printed constant 418.9829 is rounded, so
  // its true value at the minimizer is about 1.27e-5 * d rather than 0.
  double minimum = 0.0;
};

// Throws InvalidArgument for d == 0, and for d < 2 on Schaffer / SharpRidge.
BenchmarkInfo make_benchmark(BenchmarkKind kind, std::size_t dimension);

double evaluate(const BenchmarkInfo& bench, std::span<const double> x);

// Analytic gradient, for diagnostics and tests only. Throws InvalidArgument at
// the non-differentiable loci: the SharpRidge ridge (x_2 = ... = x_d = 0), the
// Ackley origin, and any Schaffer pair with x_i = x_{i+1} = 0.
Vector reference_gradient(const BenchmarkInfo& bench, std::span<const double> x);

Objective make_objective(const BenchmarkInfo& bench);

// Uniform draw from the initialization box.
Vector sample_initial_state(const BenchmarkInfo& bench, Rng& rng);

}  // namespace dgs
