#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "novikov/embedding.hpp"
#include "novikov/frame.hpp"
#include "novikov/potential.hpp"
#include "novikov/tracer2d.hpp"

namespace novikov {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double c, double tol = 0.0) const { return c >= lo - tol && c <= hi + tol; }
};

enum class Tristate { kFalse, kTrue, kUndetermined };
std::string to_string(Tristate t);

/// Plane shifts used to stand in for "all planes of direction xi":
/// shift_j = a + p_j with p_j the j-th point of a seeded Halton sequence in
/// [0,1)^N. With seed 0 the first shift is the frame's own.
std::vector<Vec> sample_shifts(const EmbeddingFrame& frame, int count, std::uint64_t seed);

/// Trace parameters used by the interval, sweep and checker operations:
/// smaller windows than a single trace since they run once per (c, shift).
TraceParams sweep_trace_params();

/// true if some sampled shift traces open or closed-growing at c, false if
/// every shift traces closed-bounded, undetermined otherwise.
Tristate unboundedness_predicate(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                 int shift_samples, const TraceParams& params, std::uint64_t seed = 0);

struct IntervalParams {
  int level_grid = 16;
  int refinements = 10;
  int shift_samples = 16;
  std::uint64_t seed = 0;
  /// Window half-sizes in period-scale units.
  std::vector<double> scales{4.0, 8.0, 16.0};
  StepRule step_rule;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
  /// Per-axis resolution of the range estimate on the torus (0 = automatic).
  int range_resolution = 0;
};

/// Spanning thresholds of one shifted plane, one entry per scale.
struct ShiftOnsets {
  int shift_index = 0;
  Vec shift;
  /// Omega- spans at that scale exactly when c > below[k].
  std::vector<double> below;
  /// Omega+ spans at that scale exactly when c < above[k].
  std::vector<double> above;
};

struct PredicateEval {
  std::string predicate;
  double c = 0.0;
  bool value = false;
};

struct CriticalIntervalEstimate {
  Bracket c1;
  Bracket c2;
  bool degenerate = false;
  /// Some predicate never turned true on the level grid; brackets are the
  /// full grid range.
  bool unresolved = false;
  int shifts_sampled = 0;
  std::vector<double> scales;
  double step = 0.0;
  double f_min_est = 0.0;
  double f_max_est = 0.0;
  std::vector<ShiftOnsets> onsets;
  std::vector<PredicateEval> log;

  double width() const { return std::max(c1.width(), c2.width()); }
};

/// Percolation onsets of one sampled plane at every scale (scales ascending,
/// in plane units; the field covers the largest).
ShiftOnsets plane_onsets(const ScalarField& largest, const std::vector<double>& half_sizes);

/// Brackets from per-shift onsets. c1 runs from the last level where no
/// shift has a spanning Omega- to the first where every shift does (at every
/// scale); c2 mirrors this for Omega+. Each end is located by a coarse scan
/// over `level_grid` levels strictly inside (f_min, f_max) and `refinements`
/// bisection steps. When the gap c2.lo - c1.hi is at most twice the larger
/// bracket width (or negative) the interval is degenerate and both brackets
/// become their hull.
CriticalIntervalEstimate interval_from_onsets(std::vector<ShiftOnsets> onsets, double f_min, double f_max,
                                              int level_grid, int refinements);

CriticalIntervalEstimate estimate_interval(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                           const IntervalParams& params = {});

enum class Situation { kA, kB, kC, kD, kOutside, kUndetermined };
std::string to_string(Situation s);

struct SituationEvidence {
  bool open = false;
  bool spanning_lines = false;
  bool below_unbounded = false;
  bool above_unbounded = false;
  bool large_electronic = false;
  bool large_hole = false;
};

struct SituationLabel {
  Situation label = Situation::kUndetermined;
  SituationEvidence evidence;
  Verdict verdict = Verdict::kUndetermined;
};

/// Fraction of the largest window half-size a growing component must reach.
inline constexpr double kLargeWindowFraction = 0.25;

/// A: open. B: only Omega+ spans, no spanning lines, electronic components
/// growing. C: the mirror. D: neither sign spans, both kinds growing.
/// Growing: max diameter up by kGrowthFactor from the first scale to the
/// last and at least kLargeWindowFraction of the last half-size.
/// closed-bounded otherwise maps to kOutside, anything else to undetermined.
SituationLabel situation_from_evidence(const SituationEvidence& e, Verdict v);
SituationLabel situation_from_report(const ScaleReport& report);
SituationLabel classify_situation(const QuasiperiodicFunction& f, double c, const TraceParams& params);

struct LabeledSample {
  int shift_index = 0;
  double c = 0.0;
  SituationLabel label;
};

/// Labels for every (c, shift) pair, c outer. Evaluated in parallel; the
/// result order does not depend on scheduling.
std::vector<LabeledSample> situation_sweep(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                           const std::vector<double>& levels, int shift_samples,
                                           const TraceParams& params, std::uint64_t seed = 0);

struct Violation {
  LabeledSample sample;
  std::string rule;
};

/// B outside c1 and C outside c2 (each widened by `tolerance`), and D on a
/// non-degenerate interval. A negative tolerance means twice the bracket
/// width.
std::vector<Violation> check_theorem21(const CriticalIntervalEstimate& interval,
                                       const std::vector<LabeledSample>& labels, double tolerance = -1.0);

struct Theorem22Exception {
  int shift_index = 0;
  double c = 0.0;
  Verdict verdict = Verdict::kUndetermined;
  std::vector<ScaleRecord> scales;
};

struct Theorem22Result {
  bool applicable = false;
  int samples = 0;
  int open_count = 0;
  double delta = 0.0;
  std::vector<Theorem22Exception> exceptions;
  double open_fraction() const { return samples > 0 ? double(open_count) / samples : 0.0; }
  bool pass(double min_fraction = 0.95) const { return !applicable || open_fraction() >= min_fraction; }
};

/// Samples `interior_levels` levels evenly inside (c1.hi + delta, c2.lo - delta)
/// for each of `shift_samples` shifts and records every verdict other than
/// open. Not applicable on a degenerate interval. A negative delta means
/// twice the bracket width.
Theorem22Result check_theorem22(const PeriodicFunction& F, const EmbeddingFrame& frame,
                                const CriticalIntervalEstimate& interval, int interior_levels,
                                int shift_samples, const TraceParams& params, std::uint64_t seed = 0,
                                double delta = -1.0);

struct TransferParams {
  /// Window half-size in period-scale units.
  double half_size = 8.0;
  StepRule step_rule;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
};

struct TransferResult {
  bool pass = false;
  std::int64_t cells_checked = 0;
  std::int64_t counterexamples = 0;
};

/// Every cell that is pure below c' on the plane shifted by a must be pure
/// below c on the original plane, on the shared lattice. Requires c' < c, a
/// orthogonal to the plane and |a| < (c - c') / C; throws InputError
/// otherwise.
TransferResult transfer_inclusion_check(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                        double c_prime, const Vec& a, const TransferParams& params = {});

struct DiameterBoundEstimate {
  double c = 0.0;
  double d_est = 0.0;
  std::vector<double> scales;
  /// Max closed diameter per scale over all shifts.
  std::vector<double> per_scale;
  /// Max closed diameter per shift over all scales.
  std::vector<double> per_shift;
  bool stable = false;
  /// (max - min) / max of per_shift.
  double shift_spread = 0.0;
};

/// Throws ContradictionError when some shift traces open at c.
DiameterBoundEstimate bounded_diameter_estimate(const PeriodicFunction& F, const EmbeddingFrame& frame, double c,
                                                int shift_samples, const TraceParams& params,
                                                std::uint64_t seed = 0);

/// Range estimate resolution used when IntervalParams::range_resolution = 0.
int default_range_resolution(int dim);

}  // namespace novikov
