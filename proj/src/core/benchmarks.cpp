#include "dgs/benchmarks.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dgs/error.hpp"

namespace dgs {

namespace {

constexpr double kSchwefelOffset = 418.9829;
constexpr double kSchwefelMinimizer = 420.9687;

void require_dimension(const BenchmarkInfo& bench, std::span<const double> x) {
  if (x.size() != bench.dimension) {
    throw InvalidArgument(std::string(benchmark_name(bench.kind)) + " expects " +
                          std::to_string(bench.dimension) + " coordinates, got " +
                          std::to_string(x.size()));
  }
}

double sum_squares(std::span<const double> x, std::size_t from = 0) {
  double s = 0.0;
  for (std::size_t i = from; i < x.size(); ++i) s += x[i] * x[i];
  return s;
}

// Schaffer pair term h(s) = sqrt(s) (1 + sin^2(50 s^0.2)).
double schaffer_term(double s) {
  const double t = std::sin(50.0 * std::pow(s, 0.2));
  return std::sqrt(s) * (1.0 + t * t);
}

double schaffer_term_derivative(double s) {
  const double theta = 50.0 * std::pow(s, 0.2);
  const double t = std::sin(theta);
  return (1.0 + t * t) / (2.0 * std::sqrt(s)) + 10.0 * std::pow(s, -0.3) * std::sin(2.0 * theta);
}

}  // namespace

std::string_view benchmark_name(BenchmarkKind kind) noexcept {
  switch (kind) {
    case BenchmarkKind::sphere: return "Sphere";
    case BenchmarkKind::sharp_ridge: return "SharpRidge";
    case BenchmarkKind::ackley: return "Ackley";
    case BenchmarkKind::rastrigin: return "Rastrigin";
    case BenchmarkKind::schaffer: return "Schaffer";
    case BenchmarkKind::schwefel: return "Schwefel";
  }
  return "?";
}

std::optional<BenchmarkKind> parse_benchmark(std::string_view name) {
  std::string key;
  for (char ch : name) {
    if (ch == '-' || ch == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  for (BenchmarkKind kind : kAllBenchmarks) {
    std::string candidate;
    for (char ch : benchmark_name(kind)) {
      candidate.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (candidate == key) return kind;
  }
  return std::nullopt;
}

BenchmarkInfo make_benchmark(BenchmarkKind kind, std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("benchmark dimension must be at least 1");
  if ((kind == BenchmarkKind::schaffer || kind == BenchmarkKind::sharp_ridge) && dimension < 2) {
    throw InvalidArgument(std::string(benchmark_name(kind)) + " needs at least 2 dimensions");
  }
  BenchmarkInfo bench;
  bench.kind = kind;
  bench.dimension = dimension;
  const auto n = static_cast<Eigen::Index>(dimension);
  bench.minimizer = Vector::Zero(n);
  switch (kind) {
    case BenchmarkKind::sphere:
    case BenchmarkKind::rastrigin:
      bench.lower = -5.12;
      bench.upper = 5.12;
      break;
    case BenchmarkKind::sharp_ridge:
      bench.lower = -10.0;
      bench.upper = 10.0;
      break;
    case BenchmarkKind::ackley:
      bench.lower = -32.768;
      bench.upper = 32.768;
      break;
    case BenchmarkKind::schaffer:
      bench.lower = -100.0;
      bench.upper = 100.0;
      break;
    case BenchmarkKind::schwefel:
      bench.lower = -500.0;
      bench.upper = 500.0;
      bench.minimizer = Vector::Constant(n, kSchwefelMinimizer);
      break;
  }
  return bench;
}

double evaluate(const BenchmarkInfo& bench, std::span<const double> x) {
  require_dimension(bench, x);
  const auto d = static_cast<double>(bench.dimension);
  switch (bench.kind) {
    case BenchmarkKind::sphere:
      return sum_squares(x);
    case BenchmarkKind::sharp_ridge:
      return x[0] * x[0] + 100.0 * std::sqrt(sum_squares(x, 1));
    case BenchmarkKind::ackley: {
      using K = AckleyConstants;
      double cosines = 0.0;
      for (double xi : x) cosines += std::cos(K::c * xi);
      return -K::a * std::exp(-K::b * std::sqrt(sum_squares(x) / d)) - std::exp(cosines / d) +
             K::a + std::numbers::e;
    }
    case BenchmarkKind::rastrigin: {
      double s = 10.0 * d;
      for (double xi : x) s += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi);
      return s;
    }
    case BenchmarkKind::schaffer: {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        s += schaffer_term(std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1]));
      }
      return s * s / (d - 1.0);
    }
    case BenchmarkKind::schwefel: {
      double s = kSchwefelOffset * d;
      for (double xi : x) s -= xi * std::sin(std::sqrt(std::abs(xi)));
      return s;
    }
  }
  throw InvalidArgument("unknown benchmark");
}

Vector reference_gradient(const BenchmarkInfo& bench, std::span<const double> x) {
  require_dimension(bench, x);
  const std::size_t n = x.size();
  const auto d = static_cast<double>(n);
  Vector g(static_cast<Eigen::Index>(n));
  switch (bench.kind) {
    case BenchmarkKind::sphere:
      for (std::size_t i = 0; i < n; ++i) g(i) = 2.0 * x[i];
      return g;
    case BenchmarkKind::sharp_ridge: {
      const double ridge = std::sqrt(sum_squares(x, 1));
      if (ridge == 0.0) {
        throw InvalidArgument("SharpRidge is not differentiable on the ridge x_2 = ... = x_d = 0");
      }
      g(0) = 2.0 * x[0];
      for (std::size_t i = 1; i < n; ++i) g(i) = 100.0 * x[i] / ridge;
      return g;
    }
    case BenchmarkKind::ackley: {
      using K = AckleyConstants;
      const double r = std::sqrt(sum_squares(x) / d);
      if (r == 0.0) throw InvalidArgument("Ackley is not differentiable at the origin");
      double cosines = 0.0;
      for (double xi : x) cosines += std::cos(K::c * xi);
      const double radial = K::a * K::b * std::exp(-K::b * r) / (d * r);
      const double periodic = std::exp(cosines / d) * K::c / d;
      for (std::size_t i = 0; i < n; ++i) g(i) = radial * x[i] + periodic * std::sin(K::c * x[i]);
      return g;
    }
    case BenchmarkKind::rastrigin:
      for (std::size_t i = 0; i < n; ++i) {
        g(i) = 2.0 * x[i] + 20.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * x[i]);
      }
      return g;
    case BenchmarkKind::schaffer: {
      double total = 0.0;
      std::vector<double> pair(n - 1);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        pair[i] = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1]);
        if (pair[i] == 0.0) {
          throw InvalidArgument("Schaffer is not differentiable where x_" + std::to_string(i + 1) +
                                " = x_" + std::to_string(i + 2) + " = 0");
        }
        total += schaffer_term(pair[i]);
      }
      g.setZero();
      const double outer = 2.0 * total / (d - 1.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double inner = outer * schaffer_term_derivative(pair[i]) / pair[i];
        g(i) += inner * x[i];
        g(i + 1) += inner * x[i + 1];
      }
      return g;
    }
    case BenchmarkKind::schwefel:
      for (std::size_t i = 0; i < n; ++i) {
        const double root = std::sqrt(std::abs(x[i]));
        g(i) = -std::sin(root) - 0.5 * root * std::cos(root);
      }
      return g;
  }
  throw InvalidArgument("unknown benchmark");
}

Objective make_objective(const BenchmarkInfo& bench) {
  const auto n = static_cast<Eigen::Index>(bench.dimension);
  Box box{Vector::Constant(n, bench.lower), Vector::Constant(n, bench.upper)};
  return Objective(
      bench.dimension, [bench](std::span<const double> x) { return evaluate(bench, x); },
      std::move(box));
}

Vector sample_initial_state(const BenchmarkInfo& bench, Rng& rng) {
  Vector x(static_cast<Eigen::Index>(bench.dimension));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(bench.lower, bench.upper);
  return x;
}

}  // namespace dgs
