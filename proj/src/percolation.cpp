#include "novikov/percolation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>

#include "novikov/errors.hpp"

namespace novikov {

namespace {

// Contact bounding box in half-cell units; empty while lo > hi.
template <int D>
struct Box {
  std::array<std::int32_t, D> lo;
  std::array<std::int32_t, D> hi;

  Box() {
    lo.fill(INT32_MAX);
    hi.fill(INT32_MIN);
  }
  void add(const std::array<std::int32_t, D>& p) {
    for (int a = 0; a < D; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  void merge(const Box& o) {
    for (int a = 0; a < D; ++a) {
      lo[a] = std::min(lo[a], o.lo[a]);
      hi[a] = std::max(hi[a], o.hi[a]);
    }
  }
  long extent() const {
    long e = 0;
    for (int a = 0; a < D; ++a) {
      if (hi[a] >= lo[a]) e = std::max(e, long(hi[a]) - lo[a]);
    }
    return e;
  }
};

// Stable LSD radix sort of cell indices by key, 16 bits per pass, over the
// usual order-preserving map from doubles to unsigned integers.
std::vector<std::uint32_t> sorted_by_key(const std::vector<double>& key) {
  const std::size_t m = key.size();
  std::vector<std::uint64_t> bits(m), bits_tmp(m);
  std::vector<std::uint32_t> order(m), order_tmp(m);
  for (std::size_t c = 0; c < m; ++c) {
    const std::uint64_t b = std::bit_cast<std::uint64_t>(key[c]);
    bits[c] = (b >> 63) ? ~b : (b | (std::uint64_t{1} << 63));
    order[c] = std::uint32_t(c);
  }
  std::vector<std::size_t> count(1u << 16);
  for (int shift = 0; shift < 64; shift += 16) {
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t c = 0; c < m; ++c) ++count[(bits[c] >> shift) & 0xffffu];
    if (count[(bits[0] >> shift) & 0xffffu] == m) continue;  // digit constant
    std::size_t sum = 0;
    for (auto& v : count) {
      const std::size_t t = v;
      v = sum;
      sum += t;
    }
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t dst = count[(bits[c] >> shift) & 0xffffu]++;
      bits_tmp[dst] = bits[c];
      order_tmp[dst] = order[c];
    }
    bits.swap(bits_tmp);
    order.swap(order_tmp);
  }
  return order;
}

std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

namespace {

template <int D>
double onset_impl(const std::vector<double>& values, int n, Sign sign) {
  const std::size_t nv = std::size_t(n) + 1;
  std::size_t cell_count = 1, vertex_count = 1;
  for (int a = 0; a < D; ++a) {
    cell_count *= std::size_t(n);
    vertex_count *= nv;
  }
  if (values.size() != vertex_count) throw InputError("spanning_onset: value count does not match the grid");
  if (cell_count >= std::size_t(UINT32_MAX)) throw ResourceError("spanning_onset: too many cells");

  // Key = level at which a cell turns pure, in a frame where regions grow
  // with the key (above-sets are handled by negation).
  const double s = sign == Sign::kBelow ? 1.0 : -1.0;
  std::vector<double> key(cell_count);
  const std::size_t sy = nv, sz = nv * nv;
  for (std::size_t c = 0; c < cell_count; ++c) {
    const std::size_t i = c % std::size_t(n), j = (c / std::size_t(n)) % std::size_t(n);
    const std::size_t k = D == 3 ? c / (std::size_t(n) * std::size_t(n)) : 0;
    const std::size_t base = k * sz + j * sy + i;
    double m = -HUGE_VAL;
    for (int corner = 0; corner < (1 << D); ++corner) {
      std::size_t v = base + std::size_t(corner & 1) + std::size_t((corner >> 1) & 1) * sy +
                      std::size_t((corner >> 2) & 1) * sz;
      m = std::max(m, s * values[v]);
    }
    key[c] = m;
  }
  const std::vector<std::uint32_t> order = sorted_by_key(key);

  constexpr std::uint32_t kAbsent = UINT32_MAX;
  std::vector<std::uint32_t> parent(cell_count, kAbsent);
  std::vector<std::uint8_t> rank(cell_count, 0);
  std::vector<Box<D>> box(cell_count);
  for (std::uint32_t c : order) {
    parent[c] = c;
    std::array<std::int32_t, 3> idx{std::int32_t(c % std::uint32_t(n)),
                                    std::int32_t((c / std::uint32_t(n)) % std::uint32_t(n)),
                                    D == 3 ? std::int32_t(c / (std::uint32_t(n) * std::uint32_t(n))) : 0};
    // Contacts at the centers of outer faces.
    for (int a = 0; a < D; ++a) {
      for (int side = 0; side < 2; ++side) {
        if (idx[std::size_t(a)] != (side == 0 ? 0 : n - 1)) continue;
        std::array<std::int32_t, D> p;
        for (int b = 0; b < D; ++b) p[b] = 2 * idx[std::size_t(b)] + 1;
        p[a] = side == 0 ? 0 : 2 * n;
        box[c].add(p);
      }
    }
    std::uint32_t root = c;
    std::uint32_t stride = 1;
    for (int a = 0; a < D; ++a, stride *= std::uint32_t(n)) {
      for (int dir = -1; dir <= 1; dir += 2) {
        const int q = idx[std::size_t(a)] + dir;
        if (q < 0 || q >= n) continue;
        const std::uint32_t nb = dir < 0 ? c - stride : c + stride;
        if (parent[nb] == kAbsent) continue;
        std::uint32_t r = find(parent, nb);
        if (r == root) continue;
        if (rank[r] > rank[root]) std::swap(r, root);
        if (rank[r] == rank[root]) ++rank[root];
        parent[r] = root;
        box[root].merge(box[r]);
      }
    }
    if (spans_half_units(box[root].extent(), n)) return s * key[c];
  }
  return s * HUGE_VAL;
}

}  // namespace

double spanning_onset(const std::vector<double>& values, const GridShape& shape, Sign sign) {
  if (shape.dims == 2) return onset_impl<2>(values, shape.cells, sign);
  if (shape.dims == 3) return onset_impl<3>(values, shape.cells, sign);
  throw InputError("spanning_onset: dims must be 2 or 3");
}

}  // namespace novikov
