#include "novikov/potential.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "novikov/errors.hpp"

namespace novikov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phasor magnitudes below this (relative to the largest input amplitude)
// are cancellations and get dropped.
constexpr double kCancelTol = 1e-14;

double wrap_phase(double p) {
  double r = std::fmod(p, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void check_dim(const PeriodicFunction& f, std::size_t n) {
  if (static_cast<int>(n) != f.dimension()) {
    throw InputError("point has dimension " + std::to_string(n) + ", function expects " +
                     std::to_string(f.dimension()));
  }
}

double dot(const IntVec& k, std::span<const double> z) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * z[i];
  return s;
}

}  // namespace

PeriodicFunction::PeriodicFunction(int dimension, std::vector<FrequencyComponent> terms)
    : dimension_(dimension) {
  if (dimension < 1) throw InputError("dimension must be positive");
  double scale = 0.0;
  std::map<IntVec, std::complex<double>> merged;
  std::complex<double> constant{0.0, 0.0};
  for (auto& t : terms) {
    if (static_cast<int>(t.k.size()) != dimension) {
      throw InputError("frequency vector has dimension " + std::to_string(t.k.size()) +
                       ", expected " + std::to_string(dimension));
    }
    if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
      throw InputError("non-finite amplitude or phase");
    }
    scale = std::max(scale, std::abs(t.amplitude));
    auto first = std::find_if(t.k.begin(), t.k.end(), [](int v) { return v != 0; });
    std::complex<double> phasor = std::polar(std::abs(t.amplitude),
                                             t.phase + (t.amplitude < 0 ? std::numbers::pi : 0.0));
    if (first == t.k.end()) {
      constant += phasor;
      continue;
    }
    IntVec key = t.k;
    if (*first < 0) {
      // cos(-x + p) = cos(x - p)
      for (auto& v : key) v = -v;
      phasor = std::conj(phasor);
    }
    merged[key] += phasor;
  }
  constant_ = constant.real();
  for (auto& [k, ph] : merged) {
    double amp = std::abs(ph);
    if (amp <= kCancelTol * scale) continue;
    terms_.push_back({k, amp, wrap_phase(std::arg(ph))});
  }
}

double PeriodicFunction::evaluate(std::span<const double> z) const {
  check_dim(*this, z.size());
  double s = constant_;
  for (const auto& t : terms_) s += t.amplitude * std::cos(kTwoPi * dot(t.k, z) + t.phase);
  return s;
}

Vec PeriodicFunction::gradient(std::span<const double> z) const {
  check_dim(*this, z.size());
  Vec g(z.size(), 0.0);
  for (const auto& t : terms_) {
    double s = -kTwoPi * t.amplitude * std::sin(kTwoPi * dot(t.k, z) + t.phase);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += s * t.k[j];
  }
  return g;
}

double PeriodicFunction::lipschitz_bound() const {
  double c = 0.0;
  for (const auto& t : terms_) {
    double n2 = 0.0;
    for (int v : t.k) n2 += double(v) * v;
    c += std::abs(t.amplitude) * std::sqrt(n2);
  }
  return kTwoPi * c;
}

double PeriodicFunction::amplitude_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.amplitude);
  return s;
}

double evaluate(const PeriodicFunction& f, std::span<const double> z) { return f.evaluate(z); }
Vec gradient(const PeriodicFunction& f, std::span<const double> z) { return f.gradient(z); }
double lipschitz_bound(const PeriodicFunction& f) { return f.lipschitz_bound(); }

RangeEstimate range_estimate(const PeriodicFunction& f, int resolution,
                             std::uint64_t point_budget) {
  if (resolution < 2) throw InputError("range_estimate: resolution must be >= 2");
  const int n = f.dimension();
  // Compare in log space so huge N never overflows.
  if (n * std::log(double(resolution)) > std::log(double(point_budget))) {
    throw ResourceError("range_estimate: " + std::to_string(resolution) + "^" +
                        std::to_string(n) + " grid points exceed the budget of " +
                        std::to_string(point_budget));
  }
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= std::uint64_t(resolution);
  const double h = 1.0 / resolution;

  double lo = HUGE_VAL, hi = -HUGE_VAL;
#pragma omp parallel reduction(min : lo) reduction(max : hi)
  {
    Vec z(std::size_t(n), 0.0);
#pragma omp for schedule(static)
    for (std::int64_t idx = 0; idx < std::int64_t(total); ++idx) {
      std::uint64_t rem = std::uint64_t(idx);
      for (int d = 0; d < n; ++d) {
        z[std::size_t(d)] = double(rem % std::uint64_t(resolution)) * h;
        rem /= std::uint64_t(resolution);
      }
      double v = f.evaluate(z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  RangeEstimate r;
  r.f_min_est = lo;
  r.f_max_est = hi;
  r.grid_resolution = resolution;
  r.lipschitz_margin = f.lipschitz_bound() * h * std::sqrt(double(n)) / 2.0;
  return r;
}

double superposition_value(std::span<const PlanarWave> waves, double x, double y) {
  double s = 0.0;
  for (const auto& w : waves) {
    double th = w.theta_deg * std::numbers::pi / 180.0;
    s += w.amplitude * std::cos(kTwoPi * (std::cos(th) * x + std::sin(th) * y) / w.period + w.phase);
  }
  return s;
}

SuperpositionEmbedding from_superposition(std::span<const PlanarWave> waves) {
  const std::size_t m = waves.size();
  if (m < 2) throw InputError("from_superposition: need at least 2 waves");
  Vec col_x(m), col_y(m);
  std::vector<FrequencyComponent> terms;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& w = waves[i];
    if (!(w.period > 0.0)) throw InputError("from_superposition: periods must be positive");
    double th = w.theta_deg * std::numbers::pi / 180.0;
    col_x[i] = std::cos(th) / w.period;
    col_y[i] = std::sin(th) / w.period;
    IntVec k(m, 0);
    k[i] = 1;
    terms.push_back({std::move(k), w.amplitude, w.phase});
  }
  // The matrix with rows e_i/lambda_i has columns col_x, col_y; those are the
  // plane's raw direction vectors. Parallel waves leave one column at rounding
  // level, which a relative pivot test cannot see, so compare the Gram
  // determinant against the matrix scale.
  double xx = 0, yy = 0, xy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    xx += col_x[i] * col_x[i];
    yy += col_y[i] * col_y[i];
    xy += col_x[i] * col_y[i];
  }
  const double scale = std::max(xx, yy);
  if (xx * yy - xy * xy <= 1e-20 * scale * scale) {
    throw InputError("from_superposition: wave vectors are all parallel");
  }
  SuperpositionEmbedding out;
  out.frame = make_frame({col_x, col_y}, Vec(m, 0.0));
  out.potential = PeriodicFunction(int(m), std::move(terms));

  // A = Q R with Q the frame basis as columns, so s = Q^T z = R x.
  const auto& u1 = out.frame.basis(0);
  const auto& u2 = out.frame.basis(1);
  double r11 = 0, r12 = 0, r21 = 0, r22 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    r11 += u1[i] * col_x[i];
    r12 += u1[i] * col_y[i];
    r21 += u2[i] * col_x[i];
    r22 += u2[i] * col_y[i];
  }
  out.planar_to_frame = {r11, r12, r21, r22};
  return out;
}

}  // namespace novikov
