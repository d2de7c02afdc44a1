#pragma once

#include <cstdint>
#include <vector>

namespace novikov {

/// Randomly rotated Halton sequence in [0,1)^dim (Cranley-Patterson shift
/// derived from `seed`). Point 0 of every sequence with seed 0 is the origin,
/// so sample 0 always reproduces the unshifted plane.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);

  int dim() const { return int(rotation_.size()); }
  std::vector<double> point(std::uint64_t index) const;

 private:
  std::vector<double> rotation_;
};

/// Radical inverse of `index` in base `base`.
double radical_inverse(std::uint64_t index, unsigned base);

}  // namespace novikov
