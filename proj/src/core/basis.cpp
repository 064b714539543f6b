#include "dgs/basis.hpp"

#include <cmath>
#include <string>

#include "dgs/error.hpp"

namespace dgs {

double OrthonormalBasis::orthonormality_error() const {
  const Matrix gram = frame_.transpose() * frame_;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

OrthonormalBasis identity_basis(std::size_t d) {
  if (d == 0) throw InvalidArgument("basis dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(d);
  return OrthonormalBasis(Matrix::Identity(n, n));
}

Matrix random_skew(std::size_t d, double alpha, Rng& rng) {
  if (d == 0) throw InvalidArgument("skew matrix dimension must be at least 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("perturbation scale alpha must be finite and non-negative");
  }
  const auto n = static_cast<Eigen::Index>(d);
  Matrix skew = Matrix::Zero(n, n);
  if (alpha == 0.0) return skew;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double entry = rng.uniform(-alpha, alpha);
      skew(i, j) = entry;
      skew(j, i) = -entry;
    }
  }
  return skew;
}

OrthonormalBasis orthonormalize(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument("orthonormalize expects a non-empty square matrix");
  }
  if (!m.allFinite()) throw InvalidArgument("orthonormalize received non-finite entries");
  Matrix q = m;
  const Eigen::Index n = q.cols();
  for (Eigen::Index j = 0; j < n; ++j) {
    auto v = q.col(j);
    const double original = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) {
        v -= q.col(k).dot(v) * q.col(k);
      }
    }
    const double remaining = v.norm();
    if (!(remaining > 1e-12 * original) || remaining == 0.0) {
      throw RankDeficientError("Gram-Schmidt breakdown: column " + std::to_string(j) +
                                   " is numerically dependent on the previous columns",
                               static_cast<std::size_t>(j));
    }
    v /= remaining;
  }
  return OrthonormalBasis(std::move(q));
}

OrthonormalBasis perturb_basis(const OrthonormalBasis& base, double alpha, Rng& rng,
                               BasisUpdate mode) {
  const std::size_t d = base.dimension();
  const Matrix skew = random_skew(d, alpha, rng);
  const auto n = static_cast<Eigen::Index>(d);
  const Matrix start = mode == BasisUpdate::reset ? Matrix(Matrix::Identity(n, n)) : base.matrix();
  return orthonormalize(start + skew);
}

}  // namespace dgs
