// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "novikov/config.hpp"
#include "novikov/critical.hpp"
#include "novikov/errors.hpp"
#include "novikov/ndscan.hpp"
#include "novikov/run.hpp"
#include "novikov/tracer2d.hpp"

using namespace novikov;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const fs::path kPotentials = NOVIKOV_POTENTIALS;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string bracket(const Bracket& b) { return fmt("[%.4f, %.4f]", b.lo, b.hi); }

/// Shipped potential (and optional frame file) resolved through the config loader.
RunConfig shipped(const std::string& task, const std::string& potential, const std::string& frame = "") {
  json j{{"task", task}, {"potential", {{"file", (kPotentials / (potential + ".json")).string()}}}};
  if (!frame.empty()) j["frame"] = {{"file", (kPotentials / (frame + ".json")).string()}};
  return parse_config(j, kPotentials);
}

PeriodicFunction random_function(std::mt19937_64& rng, int n, int count, int kmax = 2) {
  std::uniform_int_distribution<int> kd(-kmax, kmax);
  std::uniform_real_distribution<double> ad(0.3, 1.2), pd(0.0, kTwoPi);
  std::vector<FrequencyComponent> terms;
  for (int i = 0; i < count; ++i) {
    IntVec k(static_cast<std::size_t>(n));
    for (auto& v : k) v = kd(rng);
    if (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; })) k[std::size_t(i % n)] = 1;
    terms.push_back({k, ad(rng), pd(rng)});
  }
  return PeriodicFunction(n, terms);
}

EmbeddingFrame random_plane(std::mt19937_64& rng, int N) {
  std::normal_distribution<double> d;
  std::vector<Vec> basis(2, Vec(static_cast<std::size_t>(N)));
  for (auto& b : basis)
    for (auto& v : b) v = d(rng);
  return make_frame(basis, Vec(static_cast<std::size_t>(N), 0.0));
}

// 1. Separable baseline.
Outcome separable_baseline() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = shipped("interval", "separable");
  const auto est = estimate_interval(cfg.potential, cfg.frame);
  bool ok = est.degenerate && est.c1.contains(0.0) && est.c2.contains(0.0) && est.width() <= 0.02;
  std::string detail = fmt("c1=%s c2=%s width=%.4f", bracket(est.c1).c_str(), bracket(est.c2).c_str(), est.width());

  const auto f = restrict_to(cfg.potential, cfg.frame);
  TraceParams p;
  p.scales = {8, 16, 32, 64};
  for (double c : {-0.2, 0.2}) {
    const ScaleReport r = multiscale_trace(f, c, p);
    double dmax = 0.0;
    int spanning = 0;
    for (const auto& s : r.scales) {
      dmax = std::max(dmax, s.max_closed_diameter);
      spanning += s.spanning_count;
    }
    ok = ok && r.scales.size() == 4 && spanning == 0 && dmax <= 1.5 && r.verdict == Verdict::kClosedBounded;
    detail += fmt("; c=%+.1f %s D=%.3f spanning=%d", c, to_string(r.verdict).c_str(), dmax, spanning);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail += fmt("; %.1f s", secs);
  return {ok && secs <= 60.0, detail};
}

// 2. Triangular three-wave potential against a dense-grid + Newton saddle oracle.
double triangular_saddle_value() {
  const double th[3] = {0.0, 2.0 * std::numbers::pi / 3.0, 4.0 * std::numbers::pi / 3.0};
  auto eval = [&](double x, double y, double& gx, double& gy, double& hxx, double& hxy, double& hyy) {
    double v = 0.0;
    gx = gy = hxx = hxy = hyy = 0.0;
    for (double t : th) {
      const double ux = kTwoPi * std::cos(t), uy = kTwoPi * std::sin(t), a = ux * x + uy * y;
      v += std::cos(a);
      gx -= ux * std::sin(a);
      gy -= uy * std::sin(a);
      hxx -= ux * ux * std::cos(a);
      hxy -= ux * uy * std::cos(a);
      hyy -= uy * uy * std::cos(a);
    }
    return v;
  };
  // The period cell is spanned by (1, 1/sqrt3) and (0, 2/sqrt3); the square
  // [0, 2)^2 covers more than one cell at 640 samples per unit.
  const int n = 1280;
  const double h = 2.0 / n;
  std::vector<double> g2(std::size_t(n) * n);
  double gx, gy, hxx, hxy, hyy;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      eval(i * h, j * h, gx, gy, hxx, hxy, hyy);
      g2[std::size_t(j) * n + i] = gx * gx + gy * gy;
    }
  double best = HUGE_VAL;
  for (int j = 1; j + 1 < n; ++j)
    for (int i = 1; i + 1 < n; ++i) {
      const double v = g2[std::size_t(j) * n + i];
      bool local_min = true;
      for (int dj = -1; dj <= 1 && local_min; ++dj)
        for (int di = -1; di <= 1; ++di)
          if ((di || dj) && g2[std::size_t(j + dj) * n + i + di] < v) local_min = false;
      if (!local_min) continue;
      double x = i * h, y = j * h;
      for (int it = 0; it < 30; ++it) {
        eval(x, y, gx, gy, hxx, hxy, hyy);
        const double det = hxx * hyy - hxy * hxy;
        if (det == 0.0) break;
        x -= (hyy * gx - hxy * gy) / det;
        y -= (hxx * gy - hxy * gx) / det;
      }
      const double val = eval(x, y, gx, gy, hxx, hxy, hyy);
      if (std::hypot(gx, gy) < 1e-10 && hxx * hyy - hxy * hxy < 0.0) best = std::min(best, val);
    }
  return best;
}

Outcome triangular() {
  const RunConfig cfg = shipped("interval", "triangular");
  IntervalParams ip;
  ip.shift_samples = 1;
  const auto est = estimate_interval(cfg.potential, cfg.frame, ip);
  const double saddle = triangular_saddle_value();
  const bool ok = est.degenerate && est.c1.contains(saddle, est.width()) && est.c2.contains(saddle, est.width());
  return {ok, fmt("c1=%s degenerate=%d saddle=%.6f width=%.4f", bracket(est.c1).c_str(), int(est.degenerate),
                  saddle, est.width())};
}

// 3. No consistency error over >= 200 (c, shift, scale) traces.
Outcome consistency() {
  const std::vector<RunConfig> potentials = {shipped("interval", "separable"), shipped("interval", "single_cosine"),
                                             shipped("interval", "golden3", "golden3_frame"),
                                             shipped("interval", "octagonal"), shipped("interval", "triangular")};
  const TraceParams p = sweep_trace_params();
  int traces = 0, errors = 0;
  for (const auto& cfg : potentials) {
    for (const Vec& shift : sample_shifts(cfg.frame, 3, 0)) {
      const auto f = restrict_to(cfg.potential, cfg.frame.with_shift(shift));
      for (double c : auto_levels(cfg.potential, 7)) {
        try {
          const ScaleReport r = multiscale_trace(f, c, p);
          traces += int(r.scales.size());
        } catch (const ConsistencyError&) {
          ++errors;
        }
      }
    }
  }
  return {traces >= 200 && errors == 0, fmt("%d scale traces, %d consistency errors", traces, errors)};
}

struct SweepResult {
  CriticalIntervalEstimate interval;
  std::size_t labels = 0;
  std::size_t violations = 0;
};

SweepResult theorem21_sweep(const RunConfig& cfg) {
  SweepResult out;
  out.interval = estimate_interval(cfg.potential, cfg.frame);
  const auto labels = situation_sweep(cfg.potential, cfg.frame, auto_levels(cfg.potential), 8,
                                      sweep_trace_params());
  out.labels = labels.size();
  out.violations = check_theorem21(out.interval, labels).size();
  return out;
}

// 4 and 5 share the golden and octagonal intervals.
struct Shared {
  RunConfig golden = shipped("check", "golden3", "golden3_frame");
  RunConfig octagonal = shipped("check", "octagonal");
  std::optional<SweepResult> golden_sweep, octagonal_sweep;
};

Outcome theorem21(Shared& s) {
  s.golden_sweep = theorem21_sweep(s.golden);
  s.octagonal_sweep = theorem21_sweep(s.octagonal);
  const auto& g = *s.golden_sweep;
  const auto& o = *s.octagonal_sweep;
  const bool ok = g.labels >= 100 && o.labels >= 100 && g.violations == 0 && o.violations == 0;
  return {ok, fmt("golden3 %zu labels %zu violations; octagonal %zu labels %zu violations", g.labels, g.violations,
                  o.labels, o.violations)};
}

Outcome theorem22(Shared& s) {
  struct Case {
    std::string name;
    RunConfig cfg;
    CriticalIntervalEstimate interval;
  };
  std::vector<Case> cases;
  const RunConfig single = shipped("check", "single_cosine");
  cases.push_back({"single_cosine", single, estimate_interval(single.potential, single.frame)});
  if (s.golden_sweep) cases.push_back({"golden3", s.golden, s.golden_sweep->interval});
  if (s.octagonal_sweep) cases.push_back({"octagonal", s.octagonal, s.octagonal_sweep->interval});

  bool ok = !cases.front().interval.degenerate;
  std::string detail;
  for (const auto& c : cases) {
    if (!detail.empty()) detail += "; ";
    if (c.interval.degenerate) {
      detail += c.name + " degenerate";
      continue;
    }
    const auto r = check_theorem22(c.cfg.potential, c.cfg.frame, c.interval, 9, 5, sweep_trace_params());
    ok = ok && r.pass();
    detail += fmt("%s open %d/%d", c.name.c_str(), r.open_count, r.samples);
    for (const auto& e : r.exceptions) {
      std::string scales;
      for (const auto& sc : e.scales)
        scales += fmt(" L=%.1f span=%d D=%.2f", sc.half_size, sc.spanning_count, sc.max_closed_diameter);
      std::printf("  exception %s shift=%d c=%.4f %s%s\n", c.name.c_str(), e.shift_index, e.c,
                  to_string(e.verdict).c_str(), scales.c_str());
    }
  }
  return {ok, detail};
}

// 6. Lipschitz transfer, library result and a cell-wise brute force.
Outcome transfer() {
  std::mt19937_64 rng(2024);
  const PeriodicFunction F = random_function(rng, 4, 4);
  const EmbeddingFrame plane = random_plane(rng, 4);
  const double C = F.lipschitz_bound();
  const auto range = range_estimate(F, default_range_resolution(4));
  const auto normals = transverse_basis(plane);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  TransferParams tp;
  tp.half_size = 3.0;
  int passed = 0;
  std::int64_t cells = 0, bad_library = 0, bad_brute = 0;
  for (int t = 0; t < 20; ++t) {
    const double c = range.f_min_est + (0.2 + 0.6 * u(rng)) * (range.f_max_est - range.f_min_est);
    const double cp = c - (0.05 + 0.3 * u(rng));
    Vec a(4, 0.0);
    for (const auto& nrm : normals) {
      const double w = nd(rng);
      for (int i = 0; i < 4; ++i) a[std::size_t(i)] += w * nrm[std::size_t(i)];
    }
    const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
    const double len = 0.95 * u(rng) * (c - cp) / C;
    for (auto& v : a) v *= len / norm;

    const auto r = transfer_inclusion_check(F, plane, c, cp, a, tp);
    passed += r.pass;
    cells += r.cells_checked;
    bad_library += r.counterexamples;

    const auto f = restrict_to(F, plane);
    const auto g = restrict_to(F, plane.with_shift(a));
    const double h = tp.step_rule.step(f);
    const Window w(0, 0, 1.0, h);
    for (int j = 0; j < w.cells(); ++j)
      for (int i = 0; i < w.cells(); ++i) {
        double gm = -HUGE_VAL, fm = -HUGE_VAL;
        for (int dj = 0; dj < 2; ++dj)
          for (int di = 0; di < 2; ++di) {
            gm = std::max(gm, g(w.x(i + di), w.y(j + dj)));
            fm = std::max(fm, f(w.x(i + di), w.y(j + dj)));
          }
        bad_brute += gm < cp && !(fm < c);
      }
  }
  return {passed == 20 && bad_library == 0 && bad_brute == 0,
          fmt("%d/20 pass, %lld cells, counterexamples library=%lld brute=%lld", passed, (long long)cells,
              (long long)bad_library, (long long)bad_brute)};
}

// 7. n = 2 voxel census against the tracer census.
Outcome census() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int agree = 0;
  for (int t = 0; t < 10; ++t) {
    const PeriodicFunction F = random_function(rng, 3, 4);
    const auto f = restrict_to(F, random_plane(rng, 3));
    const ScalarField field = sample_grid(f, Window(0, 0, 2.0, 0.03));
    const NdGrid g = to_nd(field);
    const double c = 0.5 * u(rng) * F.amplitude_sum();
    bool same = true;
    for (Sign s : {Sign::kBelow, Sign::kAbove}) {
      const auto a = region_components(field, c, s);
      const auto b = region_components_nd(g, c, s);
      std::vector<std::int64_t> ca, cb;
      for (const auto& r : a) ca.push_back(r.cell_count);
      for (const auto& r : b) cb.push_back(r.voxel_count);
      std::sort(ca.begin(), ca.end());
      std::sort(cb.begin(), cb.end());
      same = same && ca == cb;
    }
    agree += same;
  }
  return {agree == 10, fmt("%d/10 censuses agree", agree)};
}

// 8. Uniform diameter bound in R^3.
Outcome uniform_diameter() {
  const RunConfig cfg = shipped("ndscan", "three_cosine");
  const auto d = uniform_diameter_check_nd(cfg.potential, cfg.frame, 2.0, 8, NdParams{});
  return {d.stable && d.shift_spread < 0.1,
          fmt("D=%.4f stable=%d spread=%.4f", d.d_est, int(d.stable), d.shift_spread)};
}

// 9. Numerical hygiene.
Outcome hygiene() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> md(-20, 20);
  double worst_period = 0.0, worst_grad = 0.0, worst_lip = -HUGE_VAL, worst_residual = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const PeriodicFunction F = random_function(rng, n, 5, 3);
    const double scale = 1.0 + F.amplitude_sum();
    for (int i = 0; i < 50; ++i) {
      Vec z(static_cast<std::size_t>(n)), zm;
      for (auto& v : z) v = 3.0 * u(rng);
      zm = z;
      for (auto& v : zm) v += md(rng);
      worst_period = std::max(worst_period, std::abs(F.evaluate(zm) - F.evaluate(z)) / scale);

      const Vec g = F.gradient(z);
      double gnorm = 1.0, err = 0.0;
      for (int j = 0; j < n; ++j) {
        Vec zp = z, zq = z;
        zp[std::size_t(j)] += 1e-5;
        zq[std::size_t(j)] -= 1e-5;
        err = std::max(err, std::abs((F.evaluate(zp) - F.evaluate(zq)) / 2e-5 - g[std::size_t(j)]));
        gnorm = std::max(gnorm, std::abs(g[std::size_t(j)]));
      }
      worst_grad = std::max(worst_grad, err / gnorm);
    }
    const double C = F.lipschitz_bound();
    for (int i = 0; i < 1000 / 20; ++i) {
      Vec a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
      double d2 = 0.0;
      for (int j = 0; j < n; ++j) {
        a[std::size_t(j)] = 2.0 * u(rng);
        b[std::size_t(j)] = a[std::size_t(j)] + 0.2 * u(rng);
        d2 += (a[std::size_t(j)] - b[std::size_t(j)]) * (a[std::size_t(j)] - b[std::size_t(j)]);
      }
      worst_lip = std::max(worst_lip, std::abs(F.evaluate(a) - F.evaluate(b)) - C * std::sqrt(d2));
    }
    if (n >= 2) {
      const auto f = restrict_to(F, n == 2 ? make_frame({{1, 0}, {0, 1}}, {0, 0}) : random_plane(rng, n));
      const double h = StepRule{}.step(f);
      const ScalarField field = sample_grid(f, Window(0, 0, 1.0, h));
      const double c = 0.3 * u(rng) * F.amplitude_sum();
      for (const auto& comp : extract_level_components(field, c))
        for (const auto& p : comp.polyline)
          worst_residual = std::max(worst_residual, std::abs(f(p.x, p.y) - c) / (C * h));
    }
  }
  const bool ok = worst_period <= 1e-9 && worst_grad <= 1e-6 && worst_lip <= 1e-12 && worst_residual <= 1.0;
  return {ok, fmt("periodicity %.1e, gradient %.1e, lipschitz excess %.1e, residual/(C h) %.3f", worst_period,
                  worst_grad, worst_lip, worst_residual)};
}

// 10. Byte-identical reruns and seed stability of the interval.
Outcome reproducibility() {
  std::vector<json> configs = {
      {{"task", "trace"}, {"potential", {{"file", (kPotentials / "separable.json").string()}}}, {"level", 0.3},
       {"scales", {2, 4, 8}}},
      {{"task", "classify"}, {"potential", {{"file", (kPotentials / "single_cosine.json").string()}}}, {"level", 0.2}},
      {{"task", "interval"}, {"potential", {{"file", (kPotentials / "single_cosine.json").string()}}},
       {"shift_samples", 4}},
      {{"task", "ndscan"}, {"potential", {{"file", (kPotentials / "three_cosine.json").string()}}}, {"level", 2.0},
       {"shift_samples", 2}},
  };
  int identical = 0;
  for (const auto& j : configs) {
    const RunConfig cfg = parse_config(j, kPotentials);
    RunOutputs a, b;
    const auto ra = execute(cfg, a);
    const auto rb = execute(cfg, b);
    identical += ra.config_hash == rb.config_hash && !a.files.empty() && a.files == b.files;
  }

  const RunConfig single = shipped("interval", "single_cosine");
  IntervalParams p0, p1;
  p1.seed = 7;
  const auto e0 = estimate_interval(single.potential, single.frame, p0);
  const auto e1 = estimate_interval(single.potential, single.frame, p1);
  const double tol = 2.0 * std::max(e0.width(), e1.width());
  const double drift = std::max({std::abs(e0.c1.lo - e1.c1.lo), std::abs(e0.c1.hi - e1.c1.hi),
                                 std::abs(e0.c2.lo - e1.c2.lo), std::abs(e0.c2.hi - e1.c2.hi)});
  const bool ok = identical == int(configs.size()) && drift <= tol;
  return {ok, fmt("%d/%zu tasks byte-identical; seed 0 vs 7 drift %.4f (allowed %.4f)", identical, configs.size(),
                  drift, tol)};
}

}  // namespace

int main() {
  Shared shared;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"separable baseline", separable_baseline},
      {"triangular saddle", triangular},
      {"open-line consistency", consistency},
      {"situation checker", [&] { return theorem21(shared); }},
      {"interior levels open", [&] { return theorem22(shared); }},
      {"lipschitz transfer", transfer},
      {"n=2 census equivalence", census},
      {"uniform diameter in R^3", uniform_diameter},
      {"numerical hygiene", hygiene},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
