#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "novikov/errors.hpp"
#include "novikov/potential.hpp"

using namespace novikov;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Direct evaluation from the raw (uncanonicalized) term list.
double direct(const std::vector<FrequencyComponent>& terms, const Vec& z) {
  double s = 0.0;
  for (const auto& t : terms) {
    double kz = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) kz += t.k[j] * z[j];
    s += t.amplitude * std::cos(kTwoPi * kz + t.phase);
  }
  return s;
}

std::vector<FrequencyComponent> random_terms(std::mt19937_64& rng, int n, int count) {
  std::uniform_int_distribution<int> kd(-3, 3);
  std::uniform_real_distribution<double> ad(-1.5, 1.5), pd(0.0, kTwoPi);
  std::vector<FrequencyComponent> terms;
  for (int i = 0; i < count; ++i) {
    IntVec k(static_cast<std::size_t>(n));
    for (auto& v : k) v = kd(rng);
    if (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; })) k[0] = 1;
    terms.push_back({k, ad(rng), pd(rng)});
  }
  return terms;
}

Vec random_point(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vec z(static_cast<std::size_t>(n));
  for (auto& v : z) v = d(rng);
  return z;
}

const PeriodicFunction separable(2, {{{1, 0}, 1.0, 0.0}, {{0, 1}, 1.0, 0.0}});

}  // namespace

TEST_CASE("evaluate on the separable potential") {
  CHECK(separable.evaluate(Vec{0.0, 0.0}) == doctest::Approx(2.0));
  CHECK(separable.evaluate(Vec{0.5, 0.5}) == doctest::Approx(-2.0));
  CHECK(separable.evaluate(Vec{0.25, 0.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(separable.evaluate(Vec{0.0}), InputError);
}

TEST_CASE("gradient: analytic cases and finite differences") {
  const Vec g0 = separable.gradient(Vec{0.0, 0.0});
  CHECK(std::abs(g0[0]) < 1e-12);
  CHECK(std::abs(g0[1]) < 1e-12);
  const Vec g1 = separable.gradient(Vec{0.25, 0.0});
  CHECK(g1[0] == doctest::Approx(-kTwoPi));
  CHECK(std::abs(g1[1]) < 1e-12);
  CHECK_THROWS_AS(separable.gradient(Vec{0.0, 0.0, 0.0}), InputError);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const PeriodicFunction F(n, random_terms(rng, n, 5));
    const Vec z = random_point(rng, n);
    const Vec g = F.gradient(z);
    double gnorm = 0.0, err = 0.0;
    for (int j = 0; j < n; ++j) {
      Vec zp = z, zm = z;
      zp[std::size_t(j)] += 1e-5;
      zm[std::size_t(j)] -= 1e-5;
      const double fd = (F.evaluate(zp) - F.evaluate(zm)) / 2e-5;
      err = std::max(err, std::abs(fd - g[std::size_t(j)]));
      gnorm = std::max(gnorm, std::abs(g[std::size_t(j)]));
    }
    CHECK(err <= 1e-6 * std::max(gnorm, 1.0));
  }
}

TEST_CASE("lipschitz bound") {
  CHECK(separable.lipschitz_bound() == doctest::Approx(4.0 * std::numbers::pi));
  const PeriodicFunction F(2, {{{2, 1}, 3.0, 0.0}});
  CHECK(F.lipschitz_bound() == doctest::Approx(6.0 * std::numbers::pi * std::sqrt(5.0)));

  std::mt19937_64 rng(11);
  const PeriodicFunction R(3, random_terms(rng, 3, 5));
  const double C = R.lipschitz_bound();
  double worst = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    const Vec g = R.gradient(random_point(rng, 3));
    worst = std::max(worst, std::hypot(g[0], g[1], g[2]));
  }
  CHECK(worst <= C);

  // Soundness on pairs.
  for (int i = 0; i < 1000; ++i) {
    const Vec a = random_point(rng, 3, 2.0), b = random_point(rng, 3, 2.0);
    const double d = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
    CHECK(std::abs(R.evaluate(a) - R.evaluate(b)) <= C * d + 1e-12);
  }
}

TEST_CASE("canonical form matches the raw sum") {
  std::mt19937_64 rng(3);
  auto terms = random_terms(rng, 3, 6);
  terms.push_back({{-1, 0, 2}, 0.7, 0.4});
  terms.push_back({{1, 0, -2}, -0.2, 1.9});  // merges with the previous term
  terms.push_back({{0, 0, 0}, 0.5, 0.0});   // constant
  const PeriodicFunction F(3, terms);
  for (const auto& t : F.terms()) {
    CHECK(t.amplitude > 0.0);
    CHECK(t.phase >= 0.0);
    CHECK(t.phase < kTwoPi);
    const auto first = std::find_if(t.k.begin(), t.k.end(), [](int v) { return v != 0; });
    REQUIRE(first != t.k.end());
    CHECK(*first > 0);
  }
  CHECK(F.constant() == doctest::Approx(0.5));
  for (int i = 0; i < 100; ++i) {
    const Vec z = random_point(rng, 3, 3.0);
    CHECK(F.evaluate(z) == doctest::Approx(direct(terms, z)).epsilon(1e-12));
  }
}

TEST_CASE("periodicity") {
  std::mt19937_64 rng(5);
  const PeriodicFunction F(4, random_terms(rng, 4, 5));
  std::uniform_int_distribution<int> md(-10, 10);
  const double tol = 1e-9 * (1.0 + F.amplitude_sum());
  for (int i = 0; i < 100; ++i) {
    const Vec z = random_point(rng, 4);
    for (int r = 0; r < 20; ++r) {
      Vec zm = z;
      for (auto& v : zm) v += md(rng);
      CHECK(std::abs(F.evaluate(zm) - F.evaluate(z)) <= tol);
    }
  }
}

TEST_CASE("range estimate") {
  const RangeEstimate r = range_estimate(separable, 64);
  CHECK(r.f_min_est == doctest::Approx(-2.0));
  CHECK(r.f_max_est == doctest::Approx(2.0));

  const PeriodicFunction c1(1, {{{1}, 1.0, 0.0}});
  const RangeEstimate r3 = range_estimate(c1, 3);
  CHECK(r3.f_min_est == doctest::Approx(-0.5));
  CHECK(r3.f_max_est == doctest::Approx(1.0));
  CHECK(r3.widened().first <= -1.0);
  CHECK(r3.widened().second >= 1.0);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const PeriodicFunction F(2, random_terms(rng, 2, 4));
    const auto coarse = range_estimate(F, 32).widened();
    const RangeEstimate fine = range_estimate(F, 256);
    CHECK(coarse.first <= fine.f_min_est);
    CHECK(coarse.second >= fine.f_max_est);
    CHECK(fine.f_min_est >= -F.amplitude_sum() + F.constant() - 1e-12);
    CHECK(fine.f_max_est <= F.amplitude_sum() + F.constant() + 1e-12);
  }
  CHECK_THROWS_AS(range_estimate(separable, 1), InputError);
  CHECK_THROWS_AS(range_estimate(PeriodicFunction(12, {}), 1024), ResourceError);
}

TEST_CASE("from_superposition reproduces the planar formula") {
  auto check_waves = [](const std::vector<PlanarWave>& waves, int expected_n) {
    const SuperpositionEmbedding se = from_superposition(waves);
    CHECK(se.potential.dimension() == expected_n);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
      const double x = d(rng), y = d(rng);
      // Planar formula written out here, independent of the library helper.
      double expect = 0.0;
      for (const auto& w : waves) {
        const double th = w.theta_deg * std::numbers::pi / 180.0;
        expect += w.amplitude * std::cos(kTwoPi * (std::cos(th) * x + std::sin(th) * y) / w.period + w.phase);
      }
      const auto s = se.to_frame(x, y);
      const Vec z = se.frame.lift(std::vector<double>{s[0], s[1]});
      CHECK(std::abs(se.potential.evaluate(z) - expect) <= 1e-9);
    }
  };
  check_waves({{0, 1, 1, 0}, {90, 1, 1, 0}}, 2);
  check_waves({{0, 1, 1, 0}, {120, 1, 1, 0}, {240, 1, 1, 0}}, 3);
  check_waves({{0, 1, 1, 0}, {90, 1, 1, 0}, {45, std::sqrt(2.0), 1, 0}, {135, std::sqrt(2.0), 1, 0}}, 4);
  check_waves({{10, 1.3, 0.7, 0.4}, {75, 0.8, 1.2, 2.0}, {200, 1.1, 0.5, 1.0}}, 3);

  // Two orthogonal unit waves: identity plane, identity planar map.
  const auto se = from_superposition(std::vector<PlanarWave>{{0, 1, 1, 0}, {90, 1, 1, 0}});
  CHECK(se.planar_to_frame[0] == doctest::Approx(1.0));
  CHECK(se.planar_to_frame[3] == doctest::Approx(1.0));
  CHECK(std::abs(se.planar_to_frame[1]) < 1e-12);

  CHECK_THROWS_AS(from_superposition(std::vector<PlanarWave>{{0, 1, 1, 0}}), InputError);
  CHECK_THROWS_AS(from_superposition(std::vector<PlanarWave>{{0, 1, 1, 0}, {180, 2, 1, 0}}), InputError);
  CHECK_THROWS_AS(from_superposition(std::vector<PlanarWave>{{0, 1, 1, 0}, {90, 0, 1, 0}}), InputError);
}
