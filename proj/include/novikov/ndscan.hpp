#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "novikov/critical.hpp"
#include "novikov/sampling.hpp"
#include "novikov/tracer2d.hpp"

namespace novikov {

/// Vertex samples on a square (dims = 2) or cubic (dims = 3) lattice with
/// `cells` cells per axis, x fastest. Built from a ScalarField or a
/// VoxelField; the 2D path exists to cross-check against tracer2d.
struct NdGrid {
  int dims = 3;
  int cells = 0;
  double half_size = 0.0;
  double step = 0.0;
  std::array<double, 3> center{};
  std::vector<double> values;
  std::function<double(std::span<const double>)> exact;
  double lipschitz = 0.0;

  int nv() const { return cells + 1; }
  double coord(int axis, int i) const { return center[std::size_t(axis)] + (i - cells / 2) * step; }
  std::size_t vertex(int i, int j, int k) const {
    return (std::size_t(k) * std::size_t(nv()) + std::size_t(j)) * std::size_t(nv()) + std::size_t(i);
  }
  std::size_t voxel_count() const;
};

NdGrid to_nd(const ScalarField& f);
NdGrid to_nd(const VoxelField& f);

struct VoxelRegionComponent {
  Sign sign = Sign::kBelow;
  std::int64_t voxel_count = 0;
  bool touches_boundary = false;
  bool spans_window = false;
  /// Voxel index bounds per axis, inclusive.
  std::array<int, 3> lo{};
  std::array<int, 3> hi{};
  double bbox_diameter = 0.0;
};

/// 2n-connected components of pure voxels (every vertex strictly on the
/// requested side of c), in scan order of their first voxel.
std::vector<VoxelRegionComponent> region_components_nd(const NdGrid& g, double c, Sign sign);

enum class BandKind { kElectronic, kHole, kBoundaryTruncated, kUndetermined };
std::string to_string(BandKind k);

struct LevelBandComponent {
  std::int64_t voxel_count = 0;
  bool touches_boundary = false;
  bool spans_window = false;
  BandKind kind = BandKind::kBoundaryTruncated;
  /// Bounding box of the interpolated edge crossings.
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  /// Diagonal of that box.
  double diameter = 0.0;
};

/// Face-connected components of mixed voxels (neither pure below nor pure
/// above). Kind of a component away from the boundary: the sign of the voxel
/// one step past its largest-x voxel (first in scan order among ties). That
/// voxel is outside the band, hence pure; electronic if it is above c.
std::vector<LevelBandComponent> level_components_nd(const NdGrid& g, double c);

/// Per-scale census in the tracer2d record format. Level components are
/// bands; truncated_count counts bands touching the boundary.
ScaleRecord scan_scale_nd(const NdGrid& g, double c);

struct NdParams {
  /// Box half-sizes in period-scale units.
  std::vector<double> scales{1.0, 1.5, 2.0};
  StepRule step_rule{0.025, 0.5};
  std::uint64_t vertex_budget = kDefaultVertexBudget;
};

/// Box scans of f = c around the origin of a 3-dimensional restriction, one
/// per scale, with the tracer2d level nudge and verdict rules, except that a
/// spanning band without boundary-touching Omega- and Omega+ gives an undetermined
/// verdict and a warning instead of ConsistencyError.
ScaleReport multiscale_scan_nd(const QuasiperiodicFunction& f, double c, const NdParams& params);

SituationLabel classify_situation_nd(const QuasiperiodicFunction& f, double c, const NdParams& params);

std::vector<LabeledSample> situation_sweep_nd(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                              const std::vector<double>& levels, int shift_samples,
                                              const NdParams& params, std::uint64_t seed = 0);

struct NdIntervalParams {
  int level_grid = 16;
  int refinements = 10;
  int shift_samples = 4;
  std::uint64_t seed = 0;
  NdParams scan;
  int range_resolution = 0;
};

CriticalIntervalEstimate estimate_interval_nd(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                              const NdIntervalParams& params = {});

/// Max closed band diameter over shifts and scales. Throws
/// ContradictionError when some shift has a spanning band.
DiameterBoundEstimate uniform_diameter_check_nd(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                                int shift_samples, const NdParams& params,
                                                std::uint64_t seed = 0);

}  // namespace novikov
