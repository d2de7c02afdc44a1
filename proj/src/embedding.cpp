#include "novikov/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "novikov/errors.hpp"

namespace novikov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dotv(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dotv(a, a)); }

// Modified Gram-Schmidt with one reorthogonalization pass. Returns false on a
// pivot below rel_tol of the input norm.
bool orthonormalize(std::vector<Vec>& vs, double rel_tol) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double in_norm = norm(vs[i]);
    if (in_norm == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        double p = dotv(vs[i], vs[j]);
        for (std::size_t d = 0; d < vs[i].size(); ++d) vs[i][d] -= p * vs[j][d];
      }
    }
    double pivot = norm(vs[i]);
    if (pivot < rel_tol * in_norm) return false;
    for (auto& v : vs[i]) v /= pivot;
  }
  return true;
}

int gcd_all(const IntVec& k) {
  int g = 0;
  for (int v : k) g = std::gcd(g, std::abs(v));
  return g;
}

}  // namespace

Vec EmbeddingFrame::lift(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw InputError("lift: coordinate dimension mismatch");
  Vec z = shift_;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t d = 0; d < z.size(); ++d) z[d] += x[i] * basis_[i][d];
  }
  return z;
}

EmbeddingFrame EmbeddingFrame::with_shift(Vec shift) const {
  if (shift.size() != shift_.size()) throw InputError("with_shift: dimension mismatch");
  EmbeddingFrame f = *this;
  f.shift_ = std::move(shift);
  return f;
}

EmbeddingFrame make_frame(std::vector<Vec> raw, Vec shift) {
  if (raw.empty()) throw InputError("make_frame: need at least one direction vector");
  const std::size_t big_n = shift.size();
  if (raw.size() > big_n) {
    throw InputError("make_frame: subspace dimension exceeds the ambient dimension");
  }
  if (raw.size() > std::size_t(QuasiperiodicFunction::kMaxDim)) {
    throw InputError("make_frame: subspace dimension above 3 is not supported");
  }
  for (const auto& v : raw) {
    if (v.size() != big_n) throw InputError("make_frame: direction vector dimension mismatch");
    for (double x : v) {
      if (!std::isfinite(x)) throw InputError("make_frame: non-finite direction entry");
    }
  }
  for (double x : shift) {
    if (!std::isfinite(x)) throw InputError("make_frame: non-finite shift entry");
  }
  EmbeddingFrame f;
  f.raw_ = raw;
  if (!orthonormalize(raw, 1e-10)) throw InputError("make_frame: direction vectors are rank deficient");
  f.basis_ = std::move(raw);
  f.shift_ = std::move(shift);
  return f;
}

QuasiperiodicFunction::QuasiperiodicFunction(const PeriodicFunction& source,
                                             const EmbeddingFrame& frame)
    : dim_(frame.dim()), source_(source), frame_(frame) {
  if (frame.ambient_dim() != source.dimension()) {
    throw InputError("restrict: frame ambient dimension " + std::to_string(frame.ambient_dim()) +
                     " does not match function dimension " + std::to_string(source.dimension()));
  }
  constant_ = source.constant();
  lipschitz_ = source.lipschitz_bound();
  const auto& a = frame.shift();
  for (const auto& t : source.terms()) {
    ProjectedTerm p;
    for (int i = 0; i < dim_; ++i) {
      const auto& u = frame.basis(i);
      double s = 0.0;
      for (std::size_t d = 0; d < u.size(); ++d) s += t.k[d] * u[d];
      p.kappa[std::size_t(i)] = s;
    }
    double ka = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) ka += t.k[d] * a[d];
    // Only the fractional part of k.a matters; reducing keeps phases small
    // for far-away shifts.
    ka -= std::floor(ka);
    p.amplitude = t.amplitude;
    p.phase = kTwoPi * ka + t.phase;
    terms_.push_back(p);
  }
}

double QuasiperiodicFunction::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw InputError("restricted function: dimension mismatch");
  double s = constant_;
  for (const auto& t : terms_) {
    double arg = 0.0;
    for (int i = 0; i < dim_; ++i) arg += t.kappa[std::size_t(i)] * x[std::size_t(i)];
    s += t.amplitude * std::cos(kTwoPi * arg + t.phase);
  }
  return s;
}

double QuasiperiodicFunction::operator()(double x, double y) const {
  double s = constant_;
  for (const auto& t : terms_) s += t.amplitude * std::cos(kTwoPi * (t.kappa[0] * x + t.kappa[1] * y) + t.phase);
  return s;
}

double QuasiperiodicFunction::operator()(double x, double y, double z) const {
  double s = constant_;
  for (const auto& t : terms_) {
    s += t.amplitude * std::cos(kTwoPi * (t.kappa[0] * x + t.kappa[1] * y + t.kappa[2] * z) + t.phase);
  }
  return s;
}

std::array<double, QuasiperiodicFunction::kMaxDim> QuasiperiodicFunction::gradient(
    std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw InputError("restricted gradient: dimension mismatch");
  std::array<double, kMaxDim> g{};
  for (const auto& t : terms_) {
    double arg = 0.0;
    for (int i = 0; i < dim_; ++i) arg += t.kappa[std::size_t(i)] * x[std::size_t(i)];
    double s = -kTwoPi * t.amplitude * std::sin(kTwoPi * arg + t.phase);
    for (int i = 0; i < dim_; ++i) g[std::size_t(i)] += s * t.kappa[std::size_t(i)];
  }
  return g;
}

double QuasiperiodicFunction::period_scale() const {
  double kmax = 0.0;
  for (const auto& t : terms_) {
    double n2 = 0.0;
    for (int i = 0; i < dim_; ++i) n2 += t.kappa[std::size_t(i)] * t.kappa[std::size_t(i)];
    kmax = std::max(kmax, std::sqrt(n2));
  }
  return kmax > 0.0 ? 1.0 / kmax : 1.0;
}

QuasiperiodicFunction restrict_to(const PeriodicFunction& f, const EmbeddingFrame& frame) {
  return QuasiperiodicFunction(f, frame);
}

std::string to_string(DirectionLabel label) {
  switch (label) {
    case DirectionLabel::kRationalContent: return "rational-content";
    case DirectionLabel::kPartiallyIrrational: return "partially-irrational";
    case DirectionLabel::kCompletelyIrrational: return "completely-irrational";
    case DirectionLabel::kPossiblyNonSpecial: return "possibly-non-special";
  }
  return "unknown";
}

DirectionClass classify_direction(const EmbeddingFrame& frame, int bound, double eps) {
  if (bound < 1) throw InputError("classify_direction: search bound must be >= 1");
  if (!(eps > 0.0)) throw InputError("classify_direction: tolerance must be positive");
  const int big_n = frame.ambient_dim();
  DirectionClass out;
  out.search_bound = bound;
  out.tolerance = eps;

  IntVec k(std::size_t(big_n), -bound);
  const int side = 2 * bound + 1;
  long long total = 1;
  for (int i = 0; i < big_n; ++i) total *= side;
  Vec kd(static_cast<std::size_t>(big_n));
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int d = 0; d < big_n; ++d) {
      k[std::size_t(d)] = int(rem % side) - bound;
      rem /= side;
    }
    auto first = std::find_if(k.begin(), k.end(), [](int v) { return v != 0; });
    if (first == k.end() || *first < 0 || gcd_all(k) != 1) continue;

    for (int d = 0; d < big_n; ++d) kd[std::size_t(d)] = k[std::size_t(d)];
    const double knorm = norm(kd);
    // Residual formed explicitly; |k|^2 - |Pk|^2 cancels catastrophically.
    Vec r = kd;
    bool normal = true;
    for (int i = 0; i < frame.dim(); ++i) {
      const auto& u = frame.basis(i);
      double p = dotv(kd, u);
      if (std::abs(p) >= eps) normal = false;
      for (int d = 0; d < big_n; ++d) r[std::size_t(d)] -= p * u[std::size_t(d)];
    }
    double residual = norm(r);
    if (residual < eps * knorm) out.in_plane.push_back(k);
    if (normal) out.hyperplane_normals.push_back(k);
  }

  // The in-plane count decides first: one integer vector is the partially
  // irrational case even when the plane also lies in an integer hyperplane.
  if (out.in_plane.size() > 1) {
    out.label = DirectionLabel::kRationalContent;
  } else if (out.in_plane.size() == 1) {
    out.label = DirectionLabel::kPartiallyIrrational;
  } else if (!out.hyperplane_normals.empty()) {
    out.label = DirectionLabel::kCompletelyIrrational;
  } else {
    out.label = DirectionLabel::kPossiblyNonSpecial;
  }
  return out;
}

EmbeddingFrame integer_shift(const EmbeddingFrame& frame, std::span<const int> m) {
  if (static_cast<int>(m.size()) != frame.ambient_dim()) {
    throw InputError("integer_shift: dimension mismatch");
  }
  Vec a = frame.shift();
  for (std::size_t d = 0; d < a.size(); ++d) a[d] += m[d];
  return frame.with_shift(std::move(a));
}

double transverse_distance(const EmbeddingFrame& a, const EmbeddingFrame& b) {
  if (a.basis() != b.basis()) throw InputError("transverse_distance: frames have different bases");
  Vec diff(a.shift().size());
  for (std::size_t d = 0; d < diff.size(); ++d) diff[d] = b.shift()[d] - a.shift()[d];
  for (const auto& u : a.basis()) {
    double p = dotv(diff, u);
    for (std::size_t d = 0; d < diff.size(); ++d) diff[d] -= p * u[d];
  }
  return norm(diff);
}

std::vector<Vec> transverse_basis(const EmbeddingFrame& frame) {
  const std::size_t big_n = std::size_t(frame.ambient_dim());
  std::vector<Vec> vs = frame.basis();
  std::vector<Vec> out;
  // Complete with standard basis vectors, keeping those that survive.
  for (std::size_t e = 0; e < big_n && vs.size() < big_n; ++e) {
    Vec cand(big_n, 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : vs) {
        double p = dotv(cand, v);
        for (std::size_t d = 0; d < big_n; ++d) cand[d] -= p * v[d];
      }
    }
    double nn = norm(cand);
    if (nn < 1e-8) continue;
    for (auto& x : cand) x /= nn;
    vs.push_back(cand);
    out.push_back(cand);
  }
  return out;
}

}  // namespace novikov
