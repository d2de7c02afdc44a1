#pragma once

#include <vector>

#include "novikov/tracer2d.hpp"

namespace novikov {

/// Vertex grid with `cells` cells per axis in `dims` (2 or 3) dimensions,
/// x fastest. Cell and vertex layouts follow ScalarField / VoxelField.
struct GridShape {
  int dims = 2;
  int cells = 0;
  double half_size = 0.0;
  double step = 0.0;
};

/// Exact spanning threshold of the pure-cell regions of one sign.
/// For kBelow returns t such that the cells with every vertex < c contain a
/// spanning component exactly when c > t; for kAbove, cells with every
/// vertex > c span exactly when c < t. Spanning follows spans_window,
/// extended to contacts on any axis for dims = 3.
double spanning_onset(const std::vector<double>& values, const GridShape& shape, Sign sign);

/// Spanning test for contact extents measured in half-cell units.
inline bool spans_half_units(long extent_half_cells, int cells) {
  // extent * h/2 >= L - 2.25 h with L = cells * h / 2.
  return 2 * extent_half_cells >= 2L * cells - 9;
}

}  // namespace novikov
