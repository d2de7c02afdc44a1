#include "novikov/critical.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>

#include "novikov/errors.hpp"
#include "novikov/lowdisc.hpp"
#include "novikov/percolation.hpp"

namespace novikov {

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::kFalse: return "false";
    case Tristate::kTrue: return "true";
    case Tristate::kUndetermined: return "undetermined";
  }
  return "unknown";
}

std::string to_string(Situation s) {
  switch (s) {
    case Situation::kA: return "A";
    case Situation::kB: return "B";
    case Situation::kC: return "C";
    case Situation::kD: return "D";
    case Situation::kOutside: return "outside";
    case Situation::kUndetermined: return "undetermined";
  }
  return "unknown";
}

std::vector<Vec> sample_shifts(const EmbeddingFrame& frame, int count, std::uint64_t seed) {
  if (count < 1) throw InputError("shift_samples must be >= 1");
  HaltonSequence seq(frame.ambient_dim(), seed);
  std::vector<Vec> out;
  out.reserve(std::size_t(count));
  for (int j = 0; j < count; ++j) {
    Vec s = frame.shift();
    Vec p = seq.point(std::uint64_t(j));
    for (std::size_t d = 0; d < s.size(); ++d) s[d] += p[d];
    out.push_back(std::move(s));
  }
  return out;
}

TraceParams sweep_trace_params() {
  TraceParams p;
  p.scales = {4.0, 8.0, 16.0};
  return p;
}

int default_range_resolution(int dim) {
  // About 4M points in total, never coarser than 16 per axis.
  const double r = std::floor(std::pow(double(1 << 22), 1.0 / std::max(dim, 1)));
  return std::max(16, int(r));
}

namespace {

// Runs body(i) for i in [0, n) in parallel and rethrows the first exception
// (lowest index) after the loop.
void parallel_for(int n, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[std::size_t(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Growth alone is not enough on quasiperiodic planes: the smallest window
// often just misses the largest (still bounded) islands. A growing component
// must also be comparable to the largest window.
bool growing(const ScaleReport& r, double ScaleRecord::*field) {
  const double first = r.scales.front().*field, last = r.scales.back().*field;
  return last > 0.0 && last >= kGrowthFactor * first && last >= kLargeWindowFraction * r.scales.back().half_size;
}

}  // namespace

Tristate unboundedness_predicate(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                 int shift_samples, const TraceParams& params, std::uint64_t seed) {
  const auto shifts = sample_shifts(frame, shift_samples, seed);
  std::vector<Verdict> verdicts(shifts.size(), Verdict::kUndetermined);
  parallel_for(int(shifts.size()), [&](int j) {
    QuasiperiodicFunction f = restrict_to(F, frame.with_shift(shifts[std::size_t(j)]));
    try {
      verdicts[std::size_t(j)] = multiscale_trace(f, c, params).verdict;
    } catch (const ConsistencyError&) {
      verdicts[std::size_t(j)] = Verdict::kUndetermined;
    }
  });
  bool all_bounded = true;
  for (Verdict v : verdicts) {
    if (v == Verdict::kOpen || v == Verdict::kClosedGrowing) return Tristate::kTrue;
    if (v != Verdict::kClosedBounded) all_bounded = false;
  }
  return all_bounded ? Tristate::kFalse : Tristate::kUndetermined;
}

ShiftOnsets plane_onsets(const ScalarField& largest, const std::vector<double>& half_sizes) {
  ShiftOnsets out;
  for (double L : half_sizes) {
    ScalarField f = crop(largest, L);
    GridShape shape{2, f.window.cells(), f.window.half_size(), f.window.step()};
    out.below.push_back(spanning_onset(f.values, shape, Sign::kBelow));
    out.above.push_back(spanning_onset(f.values, shape, Sign::kAbove));
  }
  return out;
}

namespace {

struct Locator {
  std::vector<double> grid;
  double f_min, f_max;
  int refinements;
  std::vector<PredicateEval>* log;

  bool eval(const std::string& name, const std::function<bool(double)>& p, double c) const {
    bool v = p(c);
    log->push_back({name, c, v});
    return v;
  }

  // [lo, hi] with p(lo) false and p(hi) true for a predicate that turns on
  // as c grows. The range ends count as false / true without evaluation;
  // `on_grid` reports whether some grid level was true.
  Bracket rising(const std::string& name, const std::function<bool(double)>& p, bool& on_grid) const {
    std::size_t i = 0;
    while (i < grid.size() && !eval(name, p, grid[i])) ++i;
    on_grid = i < grid.size();
    Bracket b{i == 0 ? f_min : grid[i - 1], i == grid.size() ? f_max : grid[i]};
    return refine(name, p, b, true);
  }

  // Mirror for predicates that turn off as c grows: p(lo) true, p(hi) false.
  Bracket falling(const std::string& name, const std::function<bool(double)>& p, bool& on_grid) const {
    std::size_t i = grid.size();
    while (i > 0 && !eval(name, p, grid[i - 1])) --i;
    on_grid = i > 0;
    Bracket b{i == 0 ? f_min : grid[i - 1], i == grid.size() ? f_max : grid[i]};
    return refine(name, p, b, false);
  }

  Bracket refine(const std::string& name, const std::function<bool(double)>& p, Bracket b, bool rise) const {
    for (int r = 0; r < refinements; ++r) {
      const double mid = 0.5 * (b.lo + b.hi);
      if (eval(name, p, mid) == rise) {
        b.hi = mid;
      } else {
        b.lo = mid;
      }
    }
    return b;
  }
};

}  // namespace

CriticalIntervalEstimate interval_from_onsets(std::vector<ShiftOnsets> onsets, double f_min, double f_max,
                                              int level_grid, int refinements) {
  if (level_grid < 8) throw InputError("level grid must have at least 8 points");
  if (refinements < 0) throw InputError("refinements must be >= 0");
  if (!(f_max > f_min)) throw InputError("estimated range is empty");
  if (onsets.empty()) throw InputError("no shifts sampled");
  CriticalIntervalEstimate est;
  est.f_min_est = f_min;
  est.f_max_est = f_max;
  est.shifts_sampled = int(onsets.size());

  // A shift counts only when its region spans at every scale.
  double below_min = HUGE_VAL, below_max = -HUGE_VAL, above_min = HUGE_VAL, above_max = -HUGE_VAL;
  for (const auto& o : onsets) {
    const double tb = *std::max_element(o.below.begin(), o.below.end());
    const double ta = *std::min_element(o.above.begin(), o.above.end());
    below_min = std::min(below_min, tb);
    below_max = std::max(below_max, tb);
    above_min = std::min(above_min, ta);
    above_max = std::max(above_max, ta);
  }
  est.onsets = std::move(onsets);

  Locator loc{{}, f_min, f_max, refinements, &est.log};
  for (int i = 0; i < level_grid; ++i) loc.grid.push_back(f_min + (i + 1) * (f_max - f_min) / (level_grid + 1));

  bool hit_below_any = false, hit_below_all = false, hit_above_all = false, hit_above_any = false;
  const Bracket below_any = loc.rising("below-any", [&](double c) { return c > below_min; }, hit_below_any);
  const Bracket below_all = loc.rising("below-all", [&](double c) { return c > below_max; }, hit_below_all);
  const Bracket above_all = loc.falling("above-all", [&](double c) { return c < above_min; }, hit_above_all);
  const Bracket above_any = loc.falling("above-any", [&](double c) { return c < above_max; }, hit_above_any);

  if (!hit_below_any || !hit_above_any) {
    est.unresolved = true;
    est.degenerate = true;
    est.c1 = est.c2 = {loc.grid.front(), loc.grid.back()};
    return est;
  }
  est.c1 = {below_any.lo, below_all.hi};
  est.c2 = {above_all.lo, above_any.hi};
  est.unresolved = !hit_below_all || !hit_above_all;

  const double w = std::max(est.c1.width(), est.c2.width());
  if (est.c2.lo - est.c1.hi <= 2.0 * w) {
    est.degenerate = true;
    Bracket hull{std::min(est.c1.lo, est.c2.lo), std::max(est.c1.hi, est.c2.hi)};
    est.c1 = est.c2 = hull;
  }
  return est;
}

CriticalIntervalEstimate estimate_interval(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                           const IntervalParams& params) {
  if (frame.dim() != 2) throw InputError("estimate_interval: frame must span a plane");
  if (params.scales.empty()) throw InputError("estimate_interval: no scales");
  for (std::size_t i = 1; i < params.scales.size(); ++i) {
    if (!(params.scales[i] > params.scales[i - 1])) throw InputError("estimate_interval: scales must increase");
  }
  const int res = params.range_resolution > 0 ? params.range_resolution : default_range_resolution(F.dimension());
  const RangeEstimate range = range_estimate(F, res);

  const QuasiperiodicFunction base = restrict_to(F, frame);
  const double ps = base.period_scale();
  const double h = params.step_rule.step(base);
  std::vector<double> half_sizes;
  for (double s : params.scales) half_sizes.push_back(s * ps);

  const auto shifts = sample_shifts(frame, params.shift_samples, params.seed);
  std::vector<ShiftOnsets> onsets(shifts.size());
  parallel_for(int(shifts.size()), [&](int j) {
    QuasiperiodicFunction f = restrict_to(F, frame.with_shift(shifts[std::size_t(j)]));
    ScalarField field = sample_grid(f, Window(0.0, 0.0, half_sizes.back(), h), params.vertex_budget);
    ShiftOnsets o = plane_onsets(field, half_sizes);
    o.shift_index = j;
    o.shift = shifts[std::size_t(j)];
    onsets[std::size_t(j)] = std::move(o);
  });

  CriticalIntervalEstimate est =
      interval_from_onsets(std::move(onsets), range.f_min_est, range.f_max_est, params.level_grid, params.refinements);
  est.scales = params.scales;
  est.step = h;
  return est;
}

SituationLabel situation_from_evidence(const SituationEvidence& e, Verdict v) {
  SituationLabel out;
  out.evidence = e;
  out.verdict = v;
  if (e.open) {
    out.label = Situation::kA;
  } else if (!e.spanning_lines && e.above_unbounded && !e.below_unbounded && e.large_electronic) {
    out.label = Situation::kB;
  } else if (!e.spanning_lines && e.below_unbounded && !e.above_unbounded && e.large_hole) {
    out.label = Situation::kC;
  } else if (!e.spanning_lines && !e.below_unbounded && !e.above_unbounded && e.large_electronic && e.large_hole) {
    out.label = Situation::kD;
  } else if (v == Verdict::kClosedBounded) {
    out.label = Situation::kOutside;
  }
  return out;
}

SituationLabel situation_from_report(const ScaleReport& report) {
  SituationEvidence e;
  if (!report.failure.empty() || report.scales.empty()) return situation_from_evidence(e, Verdict::kUndetermined);
  e.open = report.verdict == Verdict::kOpen;
  e.below_unbounded = e.above_unbounded = true;
  for (const auto& r : report.scales) {
    e.spanning_lines = e.spanning_lines || r.spanning_count > 0;
    e.below_unbounded = e.below_unbounded && r.below_spans;
    e.above_unbounded = e.above_unbounded && r.above_spans;
  }
  e.large_electronic = growing(report, &ScaleRecord::max_electronic_diameter);
  e.large_hole = growing(report, &ScaleRecord::max_hole_diameter);
  return situation_from_evidence(e, report.verdict);
}

SituationLabel classify_situation(const QuasiperiodicFunction& f, double c, const TraceParams& params) {
  return situation_from_report(multiscale_trace(f, c, params));
}

std::vector<LabeledSample> situation_sweep(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                           const std::vector<double>& levels, int shift_samples,
                                           const TraceParams& params, std::uint64_t seed) {
  const auto shifts = sample_shifts(frame, shift_samples, seed);
  const int ns = int(shifts.size());
  std::vector<LabeledSample> out(levels.size() * shifts.size());
  parallel_for(int(out.size()), [&](int idx) {
    const int li = idx / ns, sj = idx % ns;
    QuasiperiodicFunction f = restrict_to(F, frame.with_shift(shifts[std::size_t(sj)]));
    out[std::size_t(idx)] = {sj, levels[std::size_t(li)], classify_situation(f, levels[std::size_t(li)], params)};
  });
  return out;
}

std::vector<Violation> check_theorem21(const CriticalIntervalEstimate& interval,
                                       const std::vector<LabeledSample>& labels, double tolerance) {
  const double tol = tolerance < 0.0 ? 2.0 * interval.width() : tolerance;
  std::vector<Violation> out;
  for (const auto& s : labels) {
    switch (s.label.label) {
      case Situation::kB:
        if (!interval.c1.contains(s.c, tol)) out.push_back({s, "B away from c1"});
        break;
      case Situation::kC:
        if (!interval.c2.contains(s.c, tol)) out.push_back({s, "C away from c2"});
        break;
      case Situation::kD:
        if (!interval.degenerate) {
          out.push_back({s, "D on a non-degenerate interval"});
        } else if (!interval.c1.contains(s.c, tol)) {
          out.push_back({s, "D away from c0"});
        }
        break;
      default: break;
    }
  }
  return out;
}

Theorem22Result check_theorem22(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                const CriticalIntervalEstimate& interval, int interior_levels,
                                int shift_samples, const TraceParams& params, std::uint64_t seed,
                                double delta) {
  Theorem22Result out;
  out.delta = delta < 0.0 ? 2.0 * interval.width() : delta;
  if (interval.degenerate || interior_levels < 1) return out;
  const double lo = interval.c1.hi + out.delta, hi = interval.c2.lo - out.delta;
  if (!(hi > lo)) return out;
  out.applicable = true;
  std::vector<double> levels;
  for (int i = 0; i < interior_levels; ++i) levels.push_back(lo + (i + 1) * (hi - lo) / (interior_levels + 1));

  const auto shifts = sample_shifts(frame, shift_samples, seed);
  const int ns = int(shifts.size());
  std::vector<ScaleReport> reports(levels.size() * shifts.size());
  parallel_for(int(reports.size()), [&](int idx) {
    QuasiperiodicFunction f = restrict_to(F, frame.with_shift(shifts[std::size_t(idx % ns)]));
    try {
      reports[std::size_t(idx)] = multiscale_trace(f, levels[std::size_t(idx / ns)], params);
    } catch (const ConsistencyError& e) {
      reports[std::size_t(idx)].failure = e.what();
    }
  });
  for (std::size_t idx = 0; idx < reports.size(); ++idx) {
    ++out.samples;
    const auto& r = reports[idx];
    if (r.failure.empty() && r.verdict == Verdict::kOpen) {
      ++out.open_count;
    } else {
      out.exceptions.push_back({int(idx) % ns, levels[idx / std::size_t(ns)], r.verdict, r.scales});
    }
  }
  return out;
}

TransferResult transfer_inclusion_check(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                        double c_prime, const Vec& a, const TransferParams& params) {
  if (!(c_prime < c)) throw InputError("transfer check needs c' < c");
  if (int(a.size()) != frame.ambient_dim()) throw InputError("transfer check: shift dimension mismatch");
  double a_norm2 = 0.0;
  for (double v : a) a_norm2 += v * v;
  const double a_norm = std::sqrt(a_norm2);
  for (const auto& u : frame.basis()) {
    double p = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) p += a[d] * u[d];
    if (std::abs(p) > 1e-12 * std::max(1.0, a_norm)) throw InputError("transfer check: shift is not transverse to the plane");
  }
  const double C = F.lipschitz_bound();
  if (!(C * a_norm < c - c_prime)) throw InputError("transfer check needs |a| < (c - c') / C");

  QuasiperiodicFunction f = restrict_to(F, frame);
  Vec shifted = frame.shift();
  for (std::size_t d = 0; d < shifted.size(); ++d) shifted[d] += a[d];
  QuasiperiodicFunction g = restrict_to(F, frame.with_shift(shifted));
  Window w(0.0, 0.0, params.half_size * f.period_scale(), params.step_rule.step(f));
  ScalarField orig = sample_grid(f, w, params.vertex_budget);
  ScalarField moved = sample_grid(g, w, params.vertex_budget);

  auto cell_max = [](const ScalarField& s, int i, int j) {
    return std::max({s.at(i, j), s.at(i + 1, j), s.at(i, j + 1), s.at(i + 1, j + 1)});
  };
  TransferResult out;
  const int n = w.cells();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!(cell_max(moved, i, j) < c_prime)) continue;
      ++out.cells_checked;
      if (!(cell_max(orig, i, j) < c)) ++out.counterexamples;
    }
  }
  out.pass = out.counterexamples == 0;
  return out;
}

DiameterBoundEstimate bounded_diameter_estimate(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                                int shift_samples, const TraceParams& params, std::uint64_t seed) {
  const auto shifts = sample_shifts(frame, shift_samples, seed);
  std::vector<ScaleReport> reports(shifts.size());
  parallel_for(int(shifts.size()), [&](int j) {
    QuasiperiodicFunction f = restrict_to(F, frame.with_shift(shifts[std::size_t(j)]));
    reports[std::size_t(j)] = multiscale_trace(f, c, params);
  });
  DiameterBoundEstimate out;
  out.c = c;
  out.scales = params.scales;
  out.per_scale.assign(params.scales.size(), 0.0);
  for (std::size_t j = 0; j < reports.size(); ++j) {
    const auto& r = reports[j];
    if (r.verdict == Verdict::kOpen) {
      throw ContradictionError("open level lines at c = " + std::to_string(c) + " for shift " + std::to_string(j) +
                               "; the level lies inside the critical interval");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < r.scales.size(); ++k) {
      out.per_scale[k] = std::max(out.per_scale[k], r.scales[k].max_closed_diameter);
      m = std::max(m, r.scales[k].max_closed_diameter);
    }
    out.per_shift.push_back(m);
  }
  out.d_est = *std::max_element(out.per_scale.begin(), out.per_scale.end());
  out.stable = top_three_variation(out.per_scale) < kStableVariation;
  const auto [lo, hi] = std::minmax_element(out.per_shift.begin(), out.per_shift.end());
  out.shift_spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  return out;
}

}  // namespace novikov
