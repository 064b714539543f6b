#include <gtest/gtest.h>

#include <cmath>

#include "dgs/basis.hpp"
#include "dgs/benchmarks.hpp"
#include "dgs/error.hpp"
#include "dgs/estimators.hpp"
#include "test_util.hpp"

using namespace dgs;

namespace {

Objective sphere(std::size_t d) { return make_objective(make_benchmark(BenchmarkKind::sphere, d)); }

Objective affine(Vector c, double offset = 0.0) {
  const auto d = static_cast<std::size_t>(c.size());
  return Objective(d, [c, offset](std::span<const double> x) {
    return offset + c.dot(Eigen::Map<const Vector>(x.data(), c.size()));
  });
}

}  // namespace

TEST(DgsGradient, SphereWithIdentityBasisIsExact) {
  Rng rng(1);
  for (double sigma : {0.01, 1.0, 7.0}) {
    const auto f = sphere(10);
    const Vector x = test::random_vector(10, rng, -5, 5);
    const auto est = dgs_gradient(f, x, identity_basis(10), Vector::Constant(10, sigma),
                                  gauss_hermite_rule(3));
    EXPECT_LE(test::relative_error(est.gradient, 2 * x), 1e-10);
    EXPECT_EQ(est.kind, EstimatorKind::dgs);
  }
}

TEST(DgsGradient, SphereWithRotatedBasisIsExact) {
  Rng rng(2);
  const auto f = sphere(8);
  const auto basis = orthonormalize(test::random_gaussian_matrix(8, rng));
  const Vector x = test::random_vector(8, rng, -3, 3);
  const auto est = dgs_gradient(f, x, basis, Vector::Constant(8, 0.9), gauss_hermite_rule(3));
  EXPECT_LE(test::relative_error(est.gradient, 2 * x), 1e-10);
}

TEST(DgsGradient, RotatedSphereMatchesBruteForceSmoothing) {
  // Independent check of the smoothed directional derivative by a dense
  // trapezoid rule on d/dy E[G(y + sigma u)] = E[G(sigma u) u] / sigma.
  Rng rng(3);
  const std::size_t d = 4;
  const auto basis = orthonormalize(test::random_gaussian_matrix(d, rng));
  const Vector x = test::random_vector(d, rng, -2, 2);
  const double sigma = 1.3;
  const auto f = sphere(d);
  const auto est = dgs_gradient(f, x, basis, Vector::Constant(d, sigma), gauss_hermite_rule(4));
  Vector row(d);
  for (std::size_t i = 0; i < d; ++i) {
    const Vector xi = basis.column(i);
    double acc = 0.0;
    const int n = 20000;
    const double lim = 10.0, du = 2 * lim / n;
    for (int k = 0; k <= n; ++k) {
      const double u = -lim + k * du;
      const double w = (k == 0 || k == n) ? 0.5 : 1.0;
      const Vector p = x + sigma * u * xi;
      acc += w * p.squaredNorm() * u * std::exp(-0.5 * u * u);
    }
    row(static_cast<Eigen::Index>(i)) = acc * du / (std::sqrt(2 * std::numbers::pi) * sigma);
  }
  const Vector brute = basis.matrix() * row;
  EXPECT_LE(test::relative_error(est.gradient, brute), 1e-10);
}

TEST(DgsGradient, ZeroAtSphereMinimum) {
  const auto f = sphere(5);
  const auto est = dgs_gradient(f, Vector::Zero(5), identity_basis(5), Vector::Constant(5, 0.3),
                                gauss_hermite_rule(5));
  EXPECT_TRUE(est.gradient.isZero(0.0));
}

TEST(DgsGradient, QuadraticAgreementAnyOrderAndBasis) {
  Rng rng(4);
  const std::size_t d = 6;
  Matrix a = test::random_gaussian_matrix(d, rng);
  const Matrix h = a * a.transpose();
  const Vector b = test::random_vector(d, rng);
  const Objective f(d, [&](std::span<const double> x) {
    Eigen::Map<const Vector> v(x.data(), static_cast<Eigen::Index>(d));
    return 0.5 * v.dot(h * v) + b.dot(v) + 3.0;
  });
  for (int m = 2; m <= 8; ++m) {
    const auto basis = orthonormalize(test::random_gaussian_matrix(d, rng));
    const Vector x = test::random_vector(d, rng, -2, 2);
    const Vector sig = test::random_vector(d, rng, 0.01, 10.0);
    const auto est = dgs_gradient(f, x, basis, sig, gauss_hermite_rule(m));
    EXPECT_LE(test::relative_error(est.gradient, h * x + b), 1e-8) << "M=" << m;
  }
}

TEST(DgsGradient, EvaluationBudget) {
  const std::size_t d = 7;
  for (int m : {2, 3, 4, 5}) {
    for (bool share : {true, false}) {
      const auto f = sphere(d);
      DgsStencilOptions opt;
      opt.share_center = share;
      const auto est = dgs_gradient(f, Vector::Ones(d), identity_basis(d), Vector::Ones(d),
                                    gauss_hermite_rule(m), opt);
      const std::uint64_t expected =
          (m % 2 == 1 && share) ? static_cast<std::uint64_t>((m - 1) * d + 1) : m * d;
      EXPECT_EQ(est.evaluations_used, expected) << "M=" << m << " share=" << share;
      EXPECT_EQ(f.evaluations(), est.evaluations_used);
      if (m % 2 == 1) {
        ASSERT_TRUE(est.anchor_value.has_value());
        EXPECT_EQ(*est.anchor_value, static_cast<double>(d));
      }
    }
  }
}

TEST(DgsGradient, CachedAnchorSkipsCenter) {
  const auto f = sphere(4);
  DgsStencilOptions opt;
  opt.cached_anchor = 4.0;
  const auto est = dgs_gradient(f, Vector::Ones(4), identity_basis(4), Vector::Ones(4),
                                gauss_hermite_rule(3), opt);
  EXPECT_EQ(est.evaluations_used, 8u);
  EXPECT_EQ(f.evaluations(), 8u);
}

TEST(DgsGradient, SharingDoesNotChangeGradient) {
  Rng rng(12);
  const Objective f(5, [](std::span<const double> x) {
    double s = 0;
    for (double v : x) s += std::sin(v) + 0.1 * v * v * v;
    return s;
  });
  const Vector x = test::random_vector(5, rng);
  const auto basis = orthonormalize(test::random_gaussian_matrix(5, rng));
  DgsStencilOptions on, off;
  off.share_center = false;
  const auto a = dgs_gradient(f, x, basis, Vector::Constant(5, 0.4), gauss_hermite_rule(5), on);
  const auto b = dgs_gradient(f, x, basis, Vector::Constant(5, 0.4), gauss_hermite_rule(5), off);
  EXPECT_TRUE(a.gradient == b.gradient);
}

TEST(DgsGradient, WorkerCountDoesNotChangeResult) {
  Rng rng(13);
  const auto f = make_objective(make_benchmark(BenchmarkKind::ackley, 30));
  const Vector x = test::random_vector(30, rng, -30, 30);
  const auto basis = orthonormalize(test::random_gaussian_matrix(30, rng));
  WorkerPool pool(4);
  const auto a = dgs_gradient(f, x, basis, Vector::Constant(30, 2.0), gauss_hermite_rule(7));
  const auto b =
      dgs_gradient(f, x, basis, Vector::Constant(30, 2.0), gauss_hermite_rule(7), {}, pool);
  EXPECT_TRUE(a.gradient == b.gradient);
}

TEST(DgsGradient, FailureCarriesDirectionAndNode) {
  const Objective f(3, [](std::span<const double> x) {
    return x[2] > 0.5 ? std::numeric_limits<double>::infinity() : 0.0;
  });
  try {
    dgs_gradient(f, Vector::Zero(3), identity_basis(3), Vector::Ones(3), gauss_hermite_rule(3));
    FAIL();
  } catch (const EvaluationError& e) {
    ASSERT_TRUE(e.direction().has_value());
    ASSERT_TRUE(e.node().has_value());
    EXPECT_EQ(*e.direction(), 2u);
    EXPECT_EQ(*e.node(), 2u);
  }
}

TEST(DgsGradient, RejectsMismatchedInputs) {
  const auto f = sphere(3);
  EXPECT_THROW(dgs_gradient(f, Vector::Zero(4), identity_basis(3), Vector::Ones(3),
                            gauss_hermite_rule(3)),
               InvalidArgument);
  EXPECT_THROW(dgs_gradient(f, Vector::Zero(3), identity_basis(3), Vector::Ones(2),
                            gauss_hermite_rule(3)),
               InvalidArgument);
  Vector bad = Vector::Ones(3);
  bad(1) = 0.0;
  EXPECT_THROW(dgs_gradient(f, Vector::Zero(3), identity_basis(3), bad, gauss_hermite_rule(3)),
               InvalidArgument);
}

TEST(McGs, ZeroFunctionGivesZero) {
  const Objective f(6, [](std::span<const double>) { return 0.0; });
  Rng rng(1);
  const auto est = mc_gs_gradient(f, Vector::Ones(6), 0.5, 40, rng);
  EXPECT_TRUE(est.gradient.isZero(0.0));
  EXPECT_EQ(est.evaluations_used, 40u);
  EXPECT_EQ(f.evaluations(), 40u);
  EXPECT_EQ(est.kind, EstimatorKind::mc_gs);
}

TEST(McGs, ConvergesOnAffine) {
  Vector c(5);
  c << 1.0, -2.0, 0.5, 3.0, 0.0;
  const auto f = affine(c, 0.0);
  Rng rng(2024);
  const auto est = mc_gs_gradient(f, Vector::Zero(5), 1.0, 100000, rng);
  EXPECT_LE((est.gradient - c).norm() / c.norm(), 0.05);
}

TEST(McGs, UnbiasedOverSeeds) {
  const std::size_t d = 10;
  Rng crng(7);
  const Vector c = test::random_vector(d, crng, -2, 2);
  const auto f = affine(c, 1.5);
  const Vector x = test::random_vector(d, crng);
  const int seeds = 200;
  Matrix samples(static_cast<Eigen::Index>(d), seeds);
  for (int s = 0; s < seeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s), 77);
    samples.col(s) = mc_gs_gradient(f, x, 0.7, 100, rng).gradient;
  }
  const Vector mean = samples.rowwise().mean();
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double var = (samples.row(i).array() - mean(i)).square().sum() / (seeds - 1);
    const double se = std::sqrt(var / seeds);
    EXPECT_LE(std::abs(mean(i) - c(i)), 5 * se) << "coordinate " << i;
  }
}

TEST(McGs, SeedDeterminismAndWorkerIndependence) {
  const auto f = make_objective(make_benchmark(BenchmarkKind::rastrigin, 12));
  const Vector x = Vector::Constant(12, 0.3);
  Rng a(5), b(5), c(5);
  WorkerPool pool(3);
  const auto ea = mc_gs_gradient(f, x, 0.5, 64, a);
  const auto eb = mc_gs_gradient(f, x, 0.5, 64, b);
  const auto ec = mc_gs_gradient(f, x, 0.5, 64, c, pool);
  EXPECT_TRUE(ea.gradient == eb.gradient);
  EXPECT_TRUE(ea.gradient == ec.gradient);
  EXPECT_EQ(a.draws(), c.draws());
}

TEST(McGs, RejectsBadParameters) {
  const auto f = sphere(2);
  Rng rng(1);
  EXPECT_THROW(mc_gs_gradient(f, Vector::Zero(2), 0.0, 10, rng), InvalidArgument);
  EXPECT_THROW(mc_gs_gradient(f, Vector::Zero(2), 1.0, 0, rng), InvalidArgument);
}

TEST(CentralDifference, ExactOnAffineAndQuadratic) {
  Vector c(3);
  c << 2.0, -1.0, 0.25;
  // Dyadic steps and coordinates keep the arithmetic exact.
  const auto f = affine(c, 1.0);
  const auto est = central_difference_gradient(f, Vector::Constant(3, 0.5), 0.125);
  EXPECT_TRUE(est.gradient == c);
  EXPECT_EQ(est.evaluations_used, 6u);
  EXPECT_EQ(f.evaluations(), 6u);

  const auto s = sphere(3);
  Vector x(3);
  x << 1.5, -0.25, 2.0;
  const auto es = central_difference_gradient(s, x, 0.0625);
  EXPECT_TRUE(es.gradient == 2 * x);
}

TEST(CentralDifference, CubicExample) {
  const Objective f(2, [](std::span<const double> x) { return x[0] * x[0] * x[0]; });
  const auto est = central_difference_gradient(f, Vector::Zero(2), 0.1);
  EXPECT_NEAR(est.gradient(0), 0.01, 1e-15);
  EXPECT_EQ(est.gradient(1), 0.0);
}

TEST(CentralDifference, DefaultStep) {
  Vector x(3);
  x << 0.5, -20.0, 3.0;
  EXPECT_DOUBLE_EQ(default_difference_step(x), 2e-5);
  EXPECT_DOUBLE_EQ(default_difference_step(Vector::Constant(2, 0.1)), 1e-6);
  const auto f = sphere(3);
  EXPECT_LE(test::relative_error(central_difference_gradient(f, x).gradient, 2 * x), 1e-8);
  EXPECT_THROW(central_difference_gradient(f, x, -1.0), InvalidArgument);
}

TEST(Nesterov, ConstantGivesZero) {
  const Objective f(4, [](std::span<const double>) { return 2.0; });
  Rng rng(3);
  const auto est = nesterov_step_direction(f, Vector::Ones(4), 1e-3, rng);
  EXPECT_TRUE(est.gradient.isZero(0.0));
  EXPECT_EQ(est.evaluations_used, 2u);
  EXPECT_EQ(f.evaluations(), 2u);
  EXPECT_EQ(est.kind, EstimatorKind::nesterov);
}

TEST(Nesterov, QuadraticReplay) {
  const auto f = sphere(3);
  Vector x = Vector::Zero(3);
  x(0) = 1.0;
  Rng rng(17);
  const auto est = nesterov_step_direction(f, x, 1e-6, rng);
  Rng replay(17);
  Vector u(3);
  for (Eigen::Index i = 0; i < 3; ++i) u(i) = replay.normal();
  EXPECT_LE((est.gradient - 2 * u(0) * u).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Nesterov, AxisDirectionOnLinear) {
  // Along u the forward difference of a linear function is exact: g = (c.u) u.
  Vector c = Vector::Zero(2);
  c(0) = 1.0;
  const auto f = affine(c);
  Rng rng(8);
  const auto est = nesterov_step_direction(f, Vector::Zero(2), 0.5, rng);
  Rng replay(8);
  Vector u(2);
  u << replay.normal(), replay.normal();
  EXPECT_LE((est.gradient - u(0) * u).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Nesterov, CachedAnchorSavesEvaluation) {
  const auto f = sphere(3);
  Rng rng(1);
  const auto est = nesterov_step_direction(f, Vector::Ones(3), 1e-4, rng, 3.0);
  EXPECT_EQ(est.evaluations_used, 1u);
  EXPECT_EQ(f.evaluations(), 1u);
}

TEST(Estimators, Tags) {
  EXPECT_EQ(to_string(EstimatorKind::dgs), "DGS");
  EXPECT_EQ(to_string(EstimatorKind::mc_gs), "MC-GS");
  EXPECT_EQ(to_string(EstimatorKind::fd), "FD");
  EXPECT_EQ(to_string(EstimatorKind::nesterov), "NESTEROV");
}
