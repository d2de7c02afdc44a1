#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "novikov/embedding.hpp"

namespace novikov {

using PlaneEval = std::function<double(double, double)>;
using SpaceEval = std::function<double(double, double, double)>;

/// Square window around (cx, cy) sampled with step h. The half-size is
/// rounded up to a whole number of steps, so the window covers
/// [cx - L, cx + L]^2 and its vertices are cx + m h, cy + m h.
class Window {
 public:
  Window(double cx, double cy, double half_size, double step);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double half_size() const { return half_; }
  double step() const { return h_; }
  /// Cells per axis; vertices per axis is cells() + 1.
  int cells() const { return cells_; }
  int vertices() const { return cells_ + 1; }
  // Written as center + m h so a lattice point has the same coordinates in
  // every window that contains it.
  double x(int i) const { return cx_ + (i - cells_ / 2) * h_; }
  double y(int j) const { return cy_ + (j - cells_ / 2) * h_; }
  double x0() const { return cx_ - half_; }
  double y0() const { return cy_ - half_; }

 private:
  double cx_, cy_, half_, h_;
  int cells_;
};

/// Vertex samples of a plane function on a Window, row-major (j * nv + i).
/// Carries the exact evaluator (for saddle-cell centers and probes) and the
/// Lipschitz bound of the sampled function.
struct ScalarField {
  Window window{0.0, 0.0, 1.0, 1.0};
  std::vector<double> values;
  PlaneEval exact;
  double lipschitz = 0.0;

  int nv() const { return window.vertices(); }
  double at(int i, int j) const { return values[std::size_t(j) * std::size_t(nv()) + std::size_t(i)]; }
  double min() const;
  double max() const;
};

inline constexpr std::uint64_t kDefaultVertexBudget = std::uint64_t{80} << 20;

/// OpenMP kernel. Each term is factored as
/// cos(a_i + b_j) = cos a_i cos b_j - sin a_i sin b_j with per-column and
/// per-row tables, so a vertex costs two multiply-adds per term.
ScalarField sample_grid(const QuasiperiodicFunction& f, const Window& w,
                        std::uint64_t vertex_budget = kDefaultVertexBudget);

/// Serial reference: direct evaluation at every vertex.
ScalarField sample_grid_reference(const QuasiperiodicFunction& f, const Window& w,
                                  std::uint64_t vertex_budget = kDefaultVertexBudget);

/// Arbitrary (not necessarily quasiperiodic) plane function, e.g. the test
/// stubs; `lipschitz` must bound |grad f| on the window.
ScalarField sample_grid(PlaneEval f, double lipschitz, const Window& w,
                        std::uint64_t vertex_budget = kDefaultVertexBudget);

/// Centered sub-window of half-size `half_size` on the same lattice (no
/// resampling). Throws InputError when it does not fit inside `f`.
ScalarField crop(const ScalarField& f, double half_size);

/// Cube around `center` with half-size rounded up like Window.
class BoxWindow {
 public:
  BoxWindow(std::array<double, 3> center, double half_size, double step);

  const std::array<double, 3>& center() const { return center_; }
  double half_size() const { return half_; }
  double step() const { return h_; }
  int cells() const { return cells_; }
  int vertices() const { return cells_ + 1; }
  double coord(int axis, int i) const { return center_[std::size_t(axis)] + (i - cells_ / 2) * h_; }

 private:
  std::array<double, 3> center_;
  double half_, h_;
  int cells_;
};

/// Vertex samples on a BoxWindow, index (k * nv + j) * nv + i.
struct VoxelField {
  BoxWindow box{{0.0, 0.0, 0.0}, 1.0, 1.0};
  std::vector<double> values;
  SpaceEval exact;
  double lipschitz = 0.0;

  int nv() const { return box.vertices(); }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * std::size_t(nv()) + std::size_t(j)) * std::size_t(nv()) + std::size_t(i);
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
};

VoxelField sample_box(const QuasiperiodicFunction& f, const BoxWindow& b,
                      std::uint64_t vertex_budget = kDefaultVertexBudget);
VoxelField sample_box_reference(const QuasiperiodicFunction& f, const BoxWindow& b,
                                std::uint64_t vertex_budget = kDefaultVertexBudget);
VoxelField sample_box(SpaceEval f, double lipschitz, const BoxWindow& b,
                      std::uint64_t vertex_budget = kDefaultVertexBudget);

VoxelField crop(const VoxelField& f, double half_size);

}  // namespace novikov
