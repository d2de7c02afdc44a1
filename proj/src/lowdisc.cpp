#include "novikov/lowdisc.hpp"

#include <cmath>
#include <random>

#include "novikov/errors.hpp"

namespace novikov {

namespace {
constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += double(index % base) * f;
    index /= base;
    f *= inv;
  }
  return r;
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) : rotation_(std::size_t(dim), 0.0) {
  if (dim < 0 || dim > int(std::size(kPrimes))) throw InputError("HaltonSequence: unsupported dimension");
  if (seed == 0) return;
  // Raw engine output only: std distributions are not portable across
  // standard libraries, and reports must be byte-stable.
  std::mt19937_64 eng(seed);
  for (auto& r : rotation_) r = double(eng() >> 11) * 0x1.0p-53;
}

std::vector<double> HaltonSequence::point(std::uint64_t index) const {
  std::vector<double> p(rotation_.size());
  for (std::size_t d = 0; d < p.size(); ++d) {
    double v = radical_inverse(index, kPrimes[d]) + rotation_[d];
    p[d] = v - std::floor(v);
  }
  return p;
}

}  // namespace novikov
