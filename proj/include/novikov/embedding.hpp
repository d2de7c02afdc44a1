#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "novikov/frame.hpp"
#include "novikov/potential.hpp"

namespace novikov {

/// Restriction f(x) = F(a + sum x_i u_i) of a periodic function to an affine
/// subspace. Each term is stored with its projected frequency
/// kappa = (k.u_1, ..., k.u_n) and effective phase 2 pi k.a + phase, so
/// evaluation never lifts to R^N.
class QuasiperiodicFunction {
 public:
  static constexpr int kMaxDim = 3;

  struct ProjectedTerm {
    std::array<double, kMaxDim> kappa{};
    double amplitude = 0.0;
    double phase = 0.0;
  };

  QuasiperiodicFunction() = default;
  QuasiperiodicFunction(const PeriodicFunction& source, const EmbeddingFrame& frame);

  int dim() const { return dim_; }
  const PeriodicFunction& source() const { return source_; }
  const EmbeddingFrame& frame() const { return frame_; }
  const std::vector<ProjectedTerm>& terms() const { return terms_; }
  double constant() const { return constant_; }

  double operator()(std::span<const double> x) const;
  double operator()(double x, double y) const;
  double operator()(double x, double y, double z) const;
  std::array<double, kMaxDim> gradient(std::span<const double> x) const;

  /// Inherited from the source: an isometric restriction cannot increase
  /// the Lipschitz constant.
  double lipschitz_bound() const { return lipschitz_; }
  /// 1 / max |kappa| over oscillatory terms (1 if there are none).
  double period_scale() const;

 private:
  int dim_ = 0;
  PeriodicFunction source_;
  EmbeddingFrame frame_;
  std::vector<ProjectedTerm> terms_;
  double constant_ = 0.0;
  double lipschitz_ = 0.0;
};

QuasiperiodicFunction restrict_to(const PeriodicFunction& f, const EmbeddingFrame& frame);

enum class DirectionLabel {
  kRationalContent,
  kPartiallyIrrational,
  kCompletelyIrrational,
  kPossiblyNonSpecial,
};

std::string to_string(DirectionLabel label);

/// Advisory irrationality screen from a bounded integer-relation search.
struct DirectionClass {
  DirectionLabel label = DirectionLabel::kPossiblyNonSpecial;
  /// Primitive integer vectors lying in the direction (up to eps).
  std::vector<IntVec> in_plane;
  /// Primitive integer normals k with |k.u_i| < eps for all i: the direction
  /// lies in the integer hyperplane k.z = const.
  std::vector<IntVec> hyperplane_normals;
  int search_bound = 0;
  double tolerance = 0.0;
};

/// Exhaustive search over |k|_inf <= bound; one representative per projective
/// class (primitive, first nonzero entry positive).
DirectionClass classify_direction(const EmbeddingFrame& frame, int bound, double eps);

/// Same basis, shift a + m.
EmbeddingFrame integer_shift(const EmbeddingFrame& frame, std::span<const int> m);

/// |P_perp (a2 - a1)| with P_perp the projection onto the orthogonal
/// complement of the (shared) direction. Throws InputError when the bases
/// differ.
double transverse_distance(const EmbeddingFrame& a, const EmbeddingFrame& b);

/// Orthonormal basis of the orthogonal complement of the frame's direction
/// (N - n vectors), used to parameterize transverse shifts.
std::vector<Vec> transverse_basis(const EmbeddingFrame& frame);

}  // namespace novikov
