#pragma once

#include <cstddef>

#include "dgs/objective.hpp"
#include "dgs/rng.hpp"

namespace dgs {

// How a triggered perturbation builds the next frame.
enum class BasisUpdate {
  reset,       // orthonormalize(I + dXi)
  cumulative,  // orthonormalize(Xi + dXi)
};

// d x d matrix whose columns xi_1..xi_d are orthonormal. Only constructible
// through identity_basis / orthonormalize / perturb_basis, so every instance
// satisfies max|Xi^T Xi - I| <= 1e-10.
class OrthonormalBasis {
 public:
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(frame_.cols()); }
  const Matrix& matrix() const noexcept { return frame_; }
  auto column(std::size_t i) const { return frame_.col(static_cast<Eigen::Index>(i)); }

  // max |Xi^T Xi - I|.
  double orthonormality_error() const;

 private:
  explicit OrthonormalBasis(Matrix frame) : frame_(std::move(frame)) {}
  friend OrthonormalBasis identity_basis(std::size_t d);
  friend OrthonormalBasis orthonormalize(const Matrix& m);

  Matrix frame_;
};

OrthonormalBasis identity_basis(std::size_t d);

// Skew-symmetric A = -A^T: strict upper triangle i.i.d. uniform on
// [-alpha, alpha] drawn row by row, mirrored with a sign flip, zero diagonal.
Matrix random_skew(std::size_t d, double alpha, Rng& rng);

// Modified Gram-Schmidt over the columns with one re-orthogonalization pass.
// Throws RankDeficientError when a column loses all but 1e-12 of its norm.
OrthonormalBasis orthonormalize(const Matrix& m);

// Small random rotation of the frame: orthonormalize(I + A) in reset mode,
// orthonormalize(base + A) in cumulative mode, with A = random_skew(d, alpha).
OrthonormalBasis perturb_basis(const OrthonormalBasis& base, double alpha, Rng& rng,
                               BasisUpdate mode = BasisUpdate::reset);

}  // namespace dgs
