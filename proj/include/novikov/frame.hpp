#pragma once

#include <span>
#include <vector>

namespace novikov {

using Vec = std::vector<double>;
using IntVec = std::vector<int>;

/// Affine n-dimensional subspace of R^N: orthonormal basis u_1..u_n plus a
/// shift a. The linear part is the direction of the subspace, a point of the
/// Grassmannian G(N, n).
///
/// Frames are only built through make_frame(), which orthonormalizes raw
/// direction vectors by ordered Gram-Schmidt, so identical raw input always
/// produces bit-identical frames.
class EmbeddingFrame {
 public:
  EmbeddingFrame() = default;

  int ambient_dim() const { return static_cast<int>(shift_.size()); }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }
  const Vec& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  const Vec& shift() const { return shift_; }
  /// Raw direction vectors the frame was built from (kept for reports).
  const std::vector<Vec>& raw_basis() const { return raw_; }

  /// Lifts plane coordinates x in R^n to the point a + sum x_i u_i in R^N.
  Vec lift(std::span<const double> x) const;

  /// Same basis, different shift.
  EmbeddingFrame with_shift(Vec shift) const;

 private:
  friend EmbeddingFrame make_frame(std::vector<Vec> raw, Vec shift);
  std::vector<Vec> raw_;
  std::vector<Vec> basis_;
  Vec shift_;
};

/// Ordered Gram-Schmidt (modified, two passes). Throws InputError on rank
/// deficiency: a pivot below 1e-10 of the input vector norm.
EmbeddingFrame make_frame(std::vector<Vec> raw, Vec shift);

}  // namespace novikov
