#include "novikov/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "novikov/errors.hpp"

namespace novikov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int cells_for(double half_size, double step) {
  if (!(half_size > 0.0) || !(step > 0.0)) throw InputError("window: half-size and step must be positive");
  if (step > half_size) throw InputError("window: step must not exceed the half-size");
  // Even cell count with the step kept exact: vertices sit on center + m*h,
  // so windows of different sizes around one center share a lattice.
  double n = 2.0 * std::ceil(half_size / step - 1e-9);
  if (n > 1e9) throw ResourceError("window: cell count overflows");
  return std::max(2, int(n));
}

void check_budget(std::uint64_t count, std::uint64_t budget) {
  if (count > budget) {
    throw ResourceError("grid of " + std::to_string(count) + " vertices exceeds the budget of " +
                        std::to_string(budget));
  }
}

PlaneEval plane_eval(const QuasiperiodicFunction& f) {
  if (f.dim() != 2) throw InputError("plane sampling needs a 2-dimensional restriction");
  return [f](double x, double y) { return f(x, y); };
}

SpaceEval space_eval(const QuasiperiodicFunction& f) {
  if (f.dim() != 3) throw InputError("box sampling needs a 3-dimensional restriction");
  return [f](double x, double y, double z) { return f(x, y, z); };
}

}  // namespace

Window::Window(double cx, double cy, double half_size, double step)
    : cx_(cx), cy_(cy), half_(0.0), h_(step), cells_(cells_for(half_size, step)) {
  half_ = 0.5 * cells_ * h_;
}

double ScalarField::min() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

ScalarField sample_grid(const QuasiperiodicFunction& f, const Window& w, std::uint64_t vertex_budget) {
  const int nv = w.vertices();
  check_budget(std::uint64_t(nv) * std::uint64_t(nv), vertex_budget);
  ScalarField out{w, {}, plane_eval(f), f.lipschitz_bound()};
  out.values.assign(std::size_t(nv) * std::size_t(nv), f.constant());

  const std::size_t nt = f.terms().size();
  // Tables [term][index]; amplitudes folded into the column tables.
  std::vector<double> ca(nt * std::size_t(nv)), sa(nt * std::size_t(nv));
  std::vector<double> cb(nt * std::size_t(nv)), sb(nt * std::size_t(nv));
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& term = f.terms()[t];
    for (int i = 0; i < nv; ++i) {
      double a = kTwoPi * term.kappa[0] * w.x(i);
      ca[t * nv + std::size_t(i)] = term.amplitude * std::cos(a);
      sa[t * nv + std::size_t(i)] = term.amplitude * std::sin(a);
      double b = kTwoPi * term.kappa[1] * w.y(i) + term.phase;
      cb[t * nv + std::size_t(i)] = std::cos(b);
      sb[t * nv + std::size_t(i)] = std::sin(b);
    }
  }

  double* vals = out.values.data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nv; ++j) {
    double* row = vals + std::size_t(j) * std::size_t(nv);
    for (std::size_t t = 0; t < nt; ++t) {
      const double cbj = cb[t * nv + std::size_t(j)];
      const double sbj = sb[t * nv + std::size_t(j)];
      const double* cat = ca.data() + t * nv;
      const double* sat = sa.data() + t * nv;
#pragma omp simd
      for (int i = 0; i < nv; ++i) row[i] += cat[i] * cbj - sat[i] * sbj;
    }
  }
  return out;
}

ScalarField sample_grid_reference(const QuasiperiodicFunction& f, const Window& w,
                                  std::uint64_t vertex_budget) {
  const int nv = w.vertices();
  check_budget(std::uint64_t(nv) * std::uint64_t(nv), vertex_budget);
  ScalarField out{w, {}, plane_eval(f), f.lipschitz_bound()};
  out.values.resize(std::size_t(nv) * std::size_t(nv));
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nv; ++i) out.values[std::size_t(j) * std::size_t(nv) + std::size_t(i)] = f(w.x(i), w.y(j));
  }
  return out;
}

ScalarField sample_grid(PlaneEval f, double lipschitz, const Window& w, std::uint64_t vertex_budget) {
  const int nv = w.vertices();
  check_budget(std::uint64_t(nv) * std::uint64_t(nv), vertex_budget);
  ScalarField out{w, {}, std::move(f), lipschitz};
  out.values.resize(std::size_t(nv) * std::size_t(nv));
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nv; ++i) out.values[std::size_t(j) * std::size_t(nv) + std::size_t(i)] = out.exact(w.x(i), w.y(j));
  }
  return out;
}

ScalarField crop(const ScalarField& f, double half_size) {
  const Window& big = f.window;
  Window w(big.cx(), big.cy(), half_size, big.step());
  if (w.cells() > big.cells()) throw InputError("crop: sub-window larger than the field");
  const int off = (big.cells() - w.cells()) / 2;
  const int nv = w.vertices(), bnv = big.vertices();
  ScalarField out{w, {}, f.exact, f.lipschitz};
  out.values.resize(std::size_t(nv) * std::size_t(nv));
  for (int j = 0; j < nv; ++j) {
    const double* src = f.values.data() + std::size_t(j + off) * std::size_t(bnv) + std::size_t(off);
    std::copy(src, src + nv, out.values.begin() + std::ptrdiff_t(j) * nv);
  }
  return out;
}

BoxWindow::BoxWindow(std::array<double, 3> center, double half_size, double step)
    : center_(center), half_(0.0), h_(step), cells_(cells_for(half_size, step)) {
  half_ = 0.5 * cells_ * h_;
}

VoxelField sample_box(const QuasiperiodicFunction& f, const BoxWindow& b, std::uint64_t vertex_budget) {
  const int nv = b.vertices();
  const std::uint64_t count = std::uint64_t(nv) * std::uint64_t(nv) * std::uint64_t(nv);
  check_budget(count, vertex_budget);
  VoxelField out{b, {}, space_eval(f), f.lipschitz_bound()};
  out.values.assign(count, f.constant());

  // cos(a + b + c) = Re(e^{ia} e^{ib} e^{ic}); the (j, k) factor is formed
  // once per row and the i factor comes from a table.
  const std::size_t nt = f.terms().size();
  const std::size_t n = std::size_t(nv);
  std::vector<double> cx(nt * n), sx(nt * n), cy(nt * n), sy(nt * n), cz(nt * n), sz(nt * n);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& term = f.terms()[t];
    for (std::size_t i = 0; i < n; ++i) {
      double a = kTwoPi * term.kappa[0] * b.coord(0, int(i));
      cx[t * n + i] = term.amplitude * std::cos(a);
      sx[t * n + i] = term.amplitude * std::sin(a);
      double bb = kTwoPi * term.kappa[1] * b.coord(1, int(i));
      cy[t * n + i] = std::cos(bb);
      sy[t * n + i] = std::sin(bb);
      double c = kTwoPi * term.kappa[2] * b.coord(2, int(i)) + term.phase;
      cz[t * n + i] = std::cos(c);
      sz[t * n + i] = std::sin(c);
    }
  }
  double* vals = out.values.data();
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nv; ++k) {
    for (int j = 0; j < nv; ++j) {
      double* row = vals + (std::size_t(k) * n + std::size_t(j)) * n;
      for (std::size_t t = 0; t < nt; ++t) {
        // e^{i(b+c)}
        const double cj = cy[t * n + std::size_t(j)], sj = sy[t * n + std::size_t(j)];
        const double ck = cz[t * n + std::size_t(k)], sk = sz[t * n + std::size_t(k)];
        const double cjk = cj * ck - sj * sk;
        const double sjk = sj * ck + cj * sk;
        const double* cxt = cx.data() + t * n;
        const double* sxt = sx.data() + t * n;
#pragma omp simd
        for (std::size_t i = 0; i < n; ++i) row[i] += cxt[i] * cjk - sxt[i] * sjk;
      }
    }
  }
  return out;
}

VoxelField sample_box_reference(const QuasiperiodicFunction& f, const BoxWindow& b,
                                std::uint64_t vertex_budget) {
  const int nv = b.vertices();
  const std::uint64_t count = std::uint64_t(nv) * std::uint64_t(nv) * std::uint64_t(nv);
  check_budget(count, vertex_budget);
  VoxelField out{b, {}, space_eval(f), f.lipschitz_bound()};
  out.values.resize(count);
  for (int k = 0; k < nv; ++k) {
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nv; ++i) out.values[out.index(i, j, k)] = f(b.coord(0, i), b.coord(1, j), b.coord(2, k));
    }
  }
  return out;
}

VoxelField sample_box(SpaceEval f, double lipschitz, const BoxWindow& b, std::uint64_t vertex_budget) {
  const int nv = b.vertices();
  const std::uint64_t count = std::uint64_t(nv) * std::uint64_t(nv) * std::uint64_t(nv);
  check_budget(count, vertex_budget);
  VoxelField out{b, {}, std::move(f), lipschitz};
  out.values.resize(count);
  for (int k = 0; k < nv; ++k) {
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nv; ++i) out.values[out.index(i, j, k)] = out.exact(b.coord(0, i), b.coord(1, j), b.coord(2, k));
    }
  }
  return out;
}

}  // namespace novikov

namespace novikov {

VoxelField crop(const VoxelField& f, double half_size) {
  const BoxWindow& big = f.box;
  BoxWindow b(big.center(), half_size, big.step());
  if (b.cells() > big.cells()) throw InputError("crop: sub-box larger than the field");
  const int off = (big.cells() - b.cells()) / 2;
  const int nv = b.vertices();
  VoxelField out{b, {}, f.exact, f.lipschitz};
  out.values.resize(std::size_t(nv) * std::size_t(nv) * std::size_t(nv));
  for (int k = 0; k < nv; ++k) {
    for (int j = 0; j < nv; ++j) {
      const double* src = f.values.data() + f.index(off, j + off, k + off);
      std::copy(src, src + nv, out.values.begin() + std::ptrdiff_t(out.index(0, j, k)));
    }
  }
  return out;
}

}  // namespace novikov
