#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <span>
#include <vector>

#include "novikov/frame.hpp"

namespace novikov {

/// One Fourier mode amplitude * cos(2 pi k.z + phase).
struct FrequencyComponent {
  IntVec k;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// N-periodic function on R^N given as a finite trigonometric sum
///
///   F(z) = c0 + sum_j amplitude_j * cos(2 pi k_j . z + phase_j).
///
/// The representation is canonical: terms with equal frequency (and with
/// opposite frequencies, since cos is even) are merged by phasor addition,
/// each stored k has a positive first nonzero entry, amplitudes are positive
/// and phases lie in [0, 2 pi). The k = 0 mode is folded into constant().
/// Immutable after construction.
class PeriodicFunction {
 public:
  PeriodicFunction() = default;
  PeriodicFunction(int dimension, std::vector<FrequencyComponent> terms);

  int dimension() const { return dimension_; }
  const std::vector<FrequencyComponent>& terms() const { return terms_; }
  double constant() const { return constant_; }

  double evaluate(std::span<const double> z) const;
  Vec gradient(std::span<const double> z) const;

  /// C = 2 pi sum |amplitude| |k|_2 >= sup |grad F|.
  double lipschitz_bound() const;
  /// sum |amplitude| over oscillatory terms; |F - c0| never exceeds it.
  double amplitude_sum() const;

 private:
  int dimension_ = 0;
  double constant_ = 0.0;
  std::vector<FrequencyComponent> terms_;
};

double evaluate(const PeriodicFunction& f, std::span<const double> z);
Vec gradient(const PeriodicFunction& f, std::span<const double> z);
double lipschitz_bound(const PeriodicFunction& f);

struct RangeEstimate {
  double f_min_est = 0.0;
  double f_max_est = 0.0;
  int grid_resolution = 0;
  /// Half-width added on each side by widened(): C * h * sqrt(N) / 2.
  double lipschitz_margin = 0.0;

  /// Bracket guaranteed to contain the true range of F.
  std::pair<double, double> widened() const {
    return {f_min_est - lipschitz_margin, f_max_est + lipschitz_margin};
  }
};

/// Grid points visited by range_estimate before it refuses with ResourceError.
inline constexpr std::uint64_t kDefaultRangePointBudget = std::uint64_t{1} << 30;

/// Min/max of F over the uniform grid with `resolution` cells per axis on
/// [0,1)^N. The grid is streamed, so only the point count is budgeted.
RangeEstimate range_estimate(const PeriodicFunction& f, int resolution,
                             std::uint64_t point_budget = kDefaultRangePointBudget);

/// One planar wave amplitude * cos(2 pi e.x / period + phase) with
/// e = (cos theta, sin theta).
struct PlanarWave {
  double theta_deg = 0.0;
  double period = 1.0;
  double amplitude = 1.0;
  double phase = 0.0;
};

/// Result of from_superposition(). The plane of `frame` carries orthonormal
/// coordinates s; the planar coordinates x of the wave formula map to them by
/// s = planar_to_frame * x (row-major 2x2, upper triangular). The restriction
/// of `potential` to `frame` evaluated at planar_to_frame * x equals the wave
/// superposition at x.
struct SuperpositionEmbedding {
  PeriodicFunction potential;
  EmbeddingFrame frame;
  std::array<double, 4> planar_to_frame{};

  std::array<double, 2> to_frame(double x, double y) const {
    return {planar_to_frame[0] * x + planar_to_frame[1] * y,
            planar_to_frame[2] * x + planar_to_frame[3] * y};
  }
};

/// Lifts a superposition of M >= 2 planar waves to the M-periodic function
/// F(z) = sum amplitude_i cos(2 pi z_i + phase_i) and the plane spanned by the
/// columns of the M x 2 matrix whose row i is e_i / period_i.
SuperpositionEmbedding from_superposition(std::span<const PlanarWave> waves);

/// Direct planar formula, for cross-checks.
double superposition_value(std::span<const PlanarWave> waves, double x, double y);

}  // namespace novikov
