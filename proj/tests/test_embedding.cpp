#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "novikov/embedding.hpp"
#include "novikov/errors.hpp"

using namespace novikov;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_orthonormal(const EmbeddingFrame& f) {
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j)
      CHECK(std::abs(dot(f.basis(i), f.basis(j)) - (i == j ? 1.0 : 0.0)) <= 1e-12);
}

Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vec v(static_cast<std::size_t>(n));
  for (auto& x : v) x = d(rng);
  return v;
}

PeriodicFunction random_potential(std::mt19937_64& rng, int n, int count) {
  std::uniform_int_distribution<int> kd(-2, 2);
  std::uniform_real_distribution<double> ad(0.2, 1.0), pd(0.0, kTwoPi);
  std::vector<FrequencyComponent> terms;
  for (int i = 0; i < count; ++i) {
    IntVec k(static_cast<std::size_t>(n));
    for (auto& v : k) v = kd(rng);
    k[std::size_t(i % n)] = 1 + i / n;
    terms.push_back({k, ad(rng), pd(rng)});
  }
  return PeriodicFunction(n, terms);
}

// Independent witness search for the direction screen.
struct Witnesses {
  int in_plane = 0;
  int normals = 0;
};

Witnesses brute_witnesses(const EmbeddingFrame& f, int bound, double eps) {
  const int n = f.ambient_dim();
  Witnesses w;
  IntVec k(std::size_t(n), -bound);
  for (;;) {
    const auto first = std::find_if(k.begin(), k.end(), [](int v) { return v != 0; });
    if (first != k.end() && *first > 0) {
      int g = 0;
      for (int v : k) g = std::gcd(g, std::abs(v));
      if (g == 1) {
        Vec kd(k.begin(), k.end());
        Vec proj(std::size_t(n), 0.0);
        bool normal = true;
        for (int i = 0; i < f.dim(); ++i) {
          const double p = dot(kd, f.basis(i));
          if (std::abs(p) >= eps) normal = false;
          for (int d = 0; d < n; ++d) proj[std::size_t(d)] += p * f.basis(i)[std::size_t(d)];
        }
        double res = 0.0;
        for (int d = 0; d < n; ++d) res += std::pow(kd[std::size_t(d)] - proj[std::size_t(d)], 2);
        if (std::sqrt(res) < eps * std::sqrt(dot(kd, kd))) ++w.in_plane;
        if (normal) ++w.normals;
      }
    }
    int d = 0;
    while (d < n && k[std::size_t(d)] == bound) k[std::size_t(d++)] = -bound;
    if (d == n) break;
    ++k[std::size_t(d)];
  }
  return w;
}

}  // namespace

TEST_CASE("make_frame") {
  const auto id = make_frame({{1, 0, 0}, {0, 1, 0}}, {0, 0, 0});
  CHECK(id.ambient_dim() == 3);
  CHECK(id.dim() == 2);
  CHECK(id.basis(0) == Vec{1, 0, 0});
  CHECK(id.basis(1) == Vec{0, 1, 0});

  const auto sk = make_frame({{1, 1, 0}, {0, 1, 0}}, {0.3, 0.1, 0.2});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(sk.basis(0)[0] == doctest::Approx(r));
  CHECK(sk.basis(0)[1] == doctest::Approx(r));
  CHECK(sk.basis(1)[0] == doctest::Approx(-r));
  CHECK(sk.basis(1)[1] == doctest::Approx(r));
  CHECK(std::abs(sk.basis(1)[2]) < 1e-15);
  CHECK(sk.shift() == Vec{0.3, 0.1, 0.2});
  check_orthonormal(sk);

  CHECK_THROWS_AS(make_frame({{1, 0, 0, 0}, {0, 1, 1, 0}, {1, 1, 1, 0}}, {0, 0, 0, 0}), InputError);
  CHECK_THROWS_AS(make_frame({{1, 0, 0}, {2, 0, 0}}, {0, 0, 0}), InputError);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + t % 4;
    const int m = 2 + t % 2;
    std::vector<Vec> raw;
    for (int i = 0; i < m; ++i) raw.push_back(random_vec(rng, n));
    const auto f = make_frame(raw, Vec(std::size_t(n), 0.0));
    check_orthonormal(f);
    // Same raw input, bit-identical frame.
    const auto g = make_frame(raw, Vec(std::size_t(n), 0.0));
    for (int i = 0; i < m; ++i) CHECK(f.basis(i) == g.basis(i));
  }
}

TEST_CASE("restriction") {
  const PeriodicFunction sep(2, {{{1, 0}, 1.0, 0.0}, {{0, 1}, 1.0, 0.0}});
  const auto f0 = restrict_to(sep, make_frame({{1, 0}, {0, 1}}, {0, 0}));
  const auto f1 = restrict_to(sep, make_frame({{1, 0}, {0, 1}}, {0.5, 0}));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Vec x = random_vec(rng, 2, 3.0);
    const double cx = std::cos(kTwoPi * x[0]), cy = std::cos(kTwoPi * x[1]);
    CHECK(std::abs(f0(x[0], x[1]) - (cx + cy)) <= 1e-12);
    CHECK(std::abs(f1(x[0], x[1]) - (-cx + cy)) <= 1e-12);
  }

  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 3;
    const int m = 2 + t % 2;
    const auto F = random_potential(rng, n, 4);
    std::vector<Vec> raw;
    for (int i = 0; i < m; ++i) raw.push_back(random_vec(rng, n));
    const auto frame = make_frame(raw, random_vec(rng, n, 2.0));
    const auto f = restrict_to(F, frame);
    CHECK(f.lipschitz_bound() == F.lipschitz_bound());
    for (int i = 0; i < 100; ++i) {
      const Vec x = random_vec(rng, m, 5.0);
      Vec z = frame.shift();
      for (int a = 0; a < m; ++a)
        for (int d = 0; d < n; ++d) z[std::size_t(d)] += x[std::size_t(a)] * frame.basis(a)[std::size_t(d)];
      const double expect = F.evaluate(z);
      CHECK(std::abs(f(x) - expect) <= 1e-12 * (1.0 + F.amplitude_sum()));

      // Gradient of f is the projection of grad F.
      const Vec gF = F.gradient(z);
      const auto gf = f.gradient(x);
      for (int a = 0; a < m; ++a)
        CHECK(std::abs(gf[std::size_t(a)] - dot(gF, frame.basis(a))) <= 1e-9 * F.lipschitz_bound());
    }
  }

  const PeriodicFunction F3(3, {{{1, 0, 0}, 1.0, 0.0}});
  CHECK_THROWS_AS(restrict_to(F3, make_frame({{1, 0}, {0, 1}}, {0, 0})), InputError);
}

TEST_CASE("period scale") {
  const PeriodicFunction sep(2, {{{1, 0}, 1.0, 0.0}, {{0, 1}, 1.0, 0.0}});
  CHECK(restrict_to(sep, make_frame({{1, 0}, {0, 1}}, {0, 0})).period_scale() == doctest::Approx(1.0));
  const PeriodicFunction F(2, {{{2, 1}, 1.0, 0.0}});
  CHECK(restrict_to(F, make_frame({{1, 0}, {0, 1}}, {0, 0})).period_scale() == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(restrict_to(PeriodicFunction(2, {}), make_frame({{1, 0}, {0, 1}}, {0, 0})).period_scale() == 1.0);
}

TEST_CASE("classify_direction examples") {
  const auto id = classify_direction(make_frame({{1, 0, 0}, {0, 1, 0}}, {0, 0, 0}), 3, 1e-9);
  CHECK(id.label == DirectionLabel::kRationalContent);
  CHECK(std::find(id.hyperplane_normals.begin(), id.hyperplane_normals.end(), IntVec{0, 0, 1}) !=
        id.hyperplane_normals.end());
  CHECK(!id.in_plane.empty());

  const auto irr = classify_direction(
      make_frame({{1, 0, std::sqrt(2.0)}, {0, 1, std::sqrt(3.0)}}, {0, 0, 0}), 10, 1e-8);
  CHECK(irr.label == DirectionLabel::kPossiblyNonSpecial);
  CHECK(irr.in_plane.empty());
  CHECK(irr.hyperplane_normals.empty());

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const auto part = classify_direction(make_frame({{1, 1, 0, 0}, {0, 0, 1, phi}}, {0, 0, 0, 0}), 10, 1e-8);
  CHECK(part.label == DirectionLabel::kPartiallyIrrational);
  REQUIRE(part.in_plane.size() == 1);
  CHECK(part.in_plane[0] == IntVec{1, 1, 0, 0});

  CHECK_THROWS_AS(classify_direction(make_frame({{1, 0}, {0, 1}}, {0, 0}), 0, 1e-8), InputError);
  CHECK_THROWS_AS(classify_direction(make_frame({{1, 0}, {0, 1}}, {0, 0}), 2, 0.0), InputError);
}

TEST_CASE("classify_direction agrees with an exhaustive witness search") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 2;
    std::vector<Vec> raw;
    for (int i = 0; i < 2; ++i) {
      Vec v(static_cast<std::size_t>(n));
      // Mix integer and generic directions so both outcomes occur.
      for (auto& x : v) x = (t % 3 == 0) ? small(rng) : std::uniform_real_distribution<double>(-1, 1)(rng);
      raw.push_back(v);
    }
    EmbeddingFrame f;
    try {
      f = make_frame(raw, Vec(std::size_t(n), 0.0));
    } catch (const InputError&) {
      continue;
    }
    const auto dc = classify_direction(f, 3, 1e-8);
    const Witnesses w = brute_witnesses(f, 3, 1e-8);
    CHECK(int(dc.in_plane.size()) == w.in_plane);
    CHECK(int(dc.hyperplane_normals.size()) == w.normals);
    if (w.in_plane > 0 || w.normals > 0) CHECK(dc.label != DirectionLabel::kPossiblyNonSpecial);
    if (w.normals > 0) CHECK(dc.label == DirectionLabel::kRationalContent);
    for (const auto& k : dc.hyperplane_normals)
      for (int i = 0; i < f.dim(); ++i) CHECK(std::abs(dot(Vec(k.begin(), k.end()), f.basis(i))) < 1e-8);
  }
}

TEST_CASE("integer shifts") {
  std::mt19937_64 rng(6);
  const auto F = random_potential(rng, 4, 4);
  const auto frame = make_frame({random_vec(rng, 4), random_vec(rng, 4)}, random_vec(rng, 4));
  const IntVec m{3, -1, 0, 7};
  const auto shifted = integer_shift(frame, m);
  CHECK(shifted.basis() == frame.basis());
  const auto f = restrict_to(F, frame);
  const auto g = restrict_to(F, shifted);
  for (int i = 0; i < 100; ++i) {
    const Vec x = random_vec(rng, 2, 4.0);
    Vec z = frame.lift(x);
    for (int d = 0; d < 4; ++d) z[std::size_t(d)] += m[std::size_t(d)];
    CHECK(std::abs(g(x) - F.evaluate(z)) <= 1e-12 * (1.0 + F.amplitude_sum()));
    // F periodic: the shifted plane carries the same function.
    CHECK(std::abs(g(x) - f(x)) <= 1e-11);
  }
}

TEST_CASE("transverse distance") {
  const auto f = make_frame({{1, 0, 0}, {0, 1, 0}}, {0.1, 0.2, 0.3});
  CHECK(transverse_distance(f, f) == 0.0);
  CHECK(transverse_distance(f, f.with_shift({1.1, 0.2, 0.3})) == doctest::Approx(0.0));
  CHECK(transverse_distance(f, f.with_shift({0.1, 0.2, 0.6})) == doctest::Approx(0.3));
  CHECK_THROWS_AS(transverse_distance(f, make_frame({{1, 0, 0}, {0, 0, 1}}, {0, 0, 0})), InputError);

  std::mt19937_64 rng(8);
  const auto g = make_frame({random_vec(rng, 4), random_vec(rng, 4)}, Vec(4, 0.0));
  for (int i = 0; i < 100; ++i) {
    const auto a = g.with_shift(random_vec(rng, 4, 3.0));
    const auto b = g.with_shift(random_vec(rng, 4, 3.0));
    const auto c = g.with_shift(random_vec(rng, 4, 3.0));
    CHECK(transverse_distance(a, c) <= transverse_distance(a, b) + transverse_distance(b, c) + 1e-12);
    CHECK(transverse_distance(a, b) == doctest::Approx(transverse_distance(b, a)));
    // In-plane moves are invisible.
    Vec s = a.shift();
    for (int d = 0; d < 4; ++d) s[std::size_t(d)] += 2.5 * g.basis(0)[std::size_t(d)] - 1.5 * g.basis(1)[std::size_t(d)];
    CHECK(transverse_distance(a, a.with_shift(s)) <= 1e-12);
  }

  // Transverse basis: orthonormal and orthogonal to the plane.
  const auto tb = transverse_basis(g);
  REQUIRE(tb.size() == 2);
  for (const auto& t : tb) {
    CHECK(dot(t, t) == doctest::Approx(1.0));
    for (int i = 0; i < 2; ++i) CHECK(std::abs(dot(t, g.basis(i))) < 1e-12);
  }
  CHECK(std::abs(dot(tb[0], tb[1])) < 1e-12);
}

TEST_CASE("integer shifts of a non-special plane come close") {
  const auto f = make_frame({{1, 0, std::sqrt(2.0)}, {0, 1, std::sqrt(3.0)}}, {0, 0, 0});
  REQUIRE(classify_direction(f, 10, 1e-8).label == DirectionLabel::kPossiblyNonSpecial);
  double best = HUGE_VAL;
  IntVec m(3);
  for (m[0] = -40; m[0] <= 40; ++m[0])
    for (m[1] = -40; m[1] <= 40; ++m[1])
      for (m[2] = -40; m[2] <= 40; ++m[2]) {
        if (m[0] == 0 && m[1] == 0 && m[2] == 0) continue;
        best = std::min(best, transverse_distance(f, integer_shift(f, m)));
      }
  CHECK(best < 0.05);
}
