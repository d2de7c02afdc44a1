#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "novikov/embedding.hpp"
#include "novikov/sampling.hpp"

namespace novikov {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

enum class ComponentKind { kElectronic, kHole, kBoundaryTruncated };
std::string to_string(ComponentKind kind);

enum class Sign { kBelow, kAbove };
std::string to_string(Sign sign);

/// Bitmask of window sides a component reaches.
enum SideBits : unsigned { kLeft = 1u, kRight = 2u, kBottom = 4u, kTop = 8u };

/// Bounding box of the points where a component meets the window boundary.
struct BoundaryContacts {
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  unsigned sides = 0;

  bool empty() const { return sides == 0; }
  void add(double x, double y, unsigned side);
  void merge(const BoundaryContacts& o);
  /// Largest coordinate separation between two contact points.
  double extent() const;
};

/// A component spans a window of half-size L when two of its boundary
/// contacts are at least L - 2h apart in one coordinate (less a quarter step
/// of rounding slack). Contacts on opposite sides are 2L apart; clipping a
/// corner by less than L does not count. The two-cell allowance absorbs the
/// inset of pure-cell regions relative to the level line between them.
bool spans_window(const BoundaryContacts& contacts, double half_size, double step);

struct LevelComponent {
  std::vector<Point2> polyline;
  bool closed = false;
  bool touches_boundary = false;
  ComponentKind kind = ComponentKind::kBoundaryTruncated;
  double diameter = 0.0;
  bool spans_window = false;
  BoundaryContacts contacts;
};

struct RegionComponent {
  Sign sign = Sign::kBelow;
  std::int64_t cell_count = 0;
  bool touches_boundary = false;
  /// Cell index bounds, inclusive.
  int imin = 0, imax = 0, jmin = 0, jmax = 0;
  /// Diagonal of the covered cell box in plane units.
  double bbox_diameter = 0.0;
  bool spans_window = false;
  BoundaryContacts contacts;
};

/// Exact max pairwise distance of a point set (convex hull + calipers).
double point_set_diameter(std::vector<Point2> pts);

/// Marching squares at level c. Vertices with value > c are above, the rest
/// below; saddle cells are resolved by the exact function value at the cell
/// center. Polylines are maximal crossing chains; closed ones repeat their
/// first vertex at the end. Closed components get their kind from the sign
/// of the grid vertex just outside their rightmost point.
std::vector<LevelComponent> extract_level_components(const ScalarField& field, double c);

/// Kind of a closed component by probing f at h/2 along the outward normal at
/// the rightmost polyline vertex, escalating once to h. Throws InputError for
/// open components and UndeterminedError when both probes land within
/// C*h/4 of c.
ComponentKind classify_component(const PlaneEval& f, double lipschitz, double step,
                                 const LevelComponent& comp, double c);

/// 4-connected components of pure cells (all four vertices strictly on the
/// requested side of c). Mixed cells belong to neither sign.
std::vector<RegionComponent> region_components(const ScalarField& field, double c, Sign sign);

/// Same, also returning the per-cell label (-1 outside every component),
/// row-major over cells.
std::vector<RegionComponent> label_regions(const ScalarField& field, double c, Sign sign,
                                           std::vector<std::int32_t>& labels);

/// True when some pure-cell component of the given sign spans the window.
/// Cheaper than region_components: stops at the first spanning component.
bool region_spans(const ScalarField& field, double c, Sign sign);

/// Level shift applied when grid vertices sit too close to c.
struct Nudge {
  double level = 0.0;
  double amount = 0.0;
  bool applied() const { return amount != 0.0; }
};

/// If a vertex satisfies |f - c| < 1e-3 C h, moves c up by 2e-3 C h (repeated
/// while needed, a bounded number of times).
Nudge nudge_level(const std::vector<const ScalarField*>& fields, double c);

/// Grid step rule h = min(period_fraction * period_scale, level_tol / C).
struct StepRule {
  double period_fraction = 0.02;
  double level_tol = 0.5;
  double step(const QuasiperiodicFunction& f) const;
};

struct TraceParams {
  /// Window half-sizes in units of the function's period scale.
  std::vector<double> scales{8.0, 16.0, 32.0, 64.0};
  StepRule step_rule;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
  /// Keep per-scale components (for plots and dumps); the report itself only
  /// needs the summaries.
  bool keep_components = false;
};

enum class Verdict { kOpen, kClosedBounded, kClosedGrowing, kUndetermined };
std::string to_string(Verdict v);

struct ScaleRecord {
  double half_size = 0.0;
  double step = 0.0;
  int spanning_count = 0;
  int closed_count = 0;
  int electronic_count = 0;
  int hole_count = 0;
  int truncated_count = 0;
  double max_closed_diameter = 0.0;
  double max_electronic_diameter = 0.0;
  double max_hole_diameter = 0.0;
  bool below_touches_boundary = false;
  bool above_touches_boundary = false;
  /// Unbounded-candidate flags: some pure-cell region of that sign spans.
  bool below_spans = false;
  bool above_spans = false;
};

struct ScaleReport {
  double level = 0.0;
  /// Level actually traced (level + nudge).
  double traced_level = 0.0;
  double nudge = 0.0;
  std::vector<ScaleRecord> scales;
  Verdict verdict = Verdict::kUndetermined;
  /// Set when tracing stopped early (resource limits).
  std::string failure;
  /// Recorded events worth surfacing in run reports.
  std::vector<std::string> warnings;
  /// Components of the largest scale when TraceParams::keep_components.
  std::vector<LevelComponent> components;
  std::optional<Window> last_window;
};

/// Traces f = c on windows centered at the plane origin, one per scale.
ScaleReport multiscale_trace(const QuasiperiodicFunction& f, double c, const TraceParams& params);

/// Per-scale record for one sampled field at an already nudged level.
ScaleRecord trace_scale(const ScalarField& field, double c,
                        std::vector<LevelComponent>* keep = nullptr);

/// Growth factor that marks closed components as growing, and the relative
/// variation over the top three scales below which they count as bounded.
inline constexpr double kGrowthFactor = 1.5;
inline constexpr double kStableVariation = 0.10;

/// open: spanning level components at every scale (Omega- and Omega+ must
/// then both touch the window boundary, else ConsistencyError). closed-growing: no spanning level
/// components and the max closed diameter grows by kGrowthFactor across the
/// scales. closed-bounded: no spanning level components and the max closed
/// diameter varies by less than kStableVariation over the top three scales.
/// Otherwise undetermined.
Verdict open_line_verdict(const ScaleReport& report);

/// Relative variation (max - min) / max over the last three entries.
double top_three_variation(const std::vector<double>& values);

}  // namespace novikov
