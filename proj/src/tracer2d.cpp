#include "novikov/tracer2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "novikov/errors.hpp"

namespace novikov {

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kElectronic: return "electronic";
    case ComponentKind::kHole: return "hole";
    case ComponentKind::kBoundaryTruncated: return "boundary-truncated";
  }
  return "unknown";
}

std::string to_string(Sign sign) { return sign == Sign::kBelow ? "below" : "above"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kOpen: return "open";
    case Verdict::kClosedBounded: return "closed-bounded";
    case Verdict::kClosedGrowing: return "closed-growing";
    case Verdict::kUndetermined: return "undetermined";
  }
  return "unknown";
}

void BoundaryContacts::add(double x, double y, unsigned side) {
  xmin = std::min(xmin, x);
  xmax = std::max(xmax, x);
  ymin = std::min(ymin, y);
  ymax = std::max(ymax, y);
  sides |= side;
}

void BoundaryContacts::merge(const BoundaryContacts& o) {
  if (o.empty()) return;
  xmin = std::min(xmin, o.xmin);
  xmax = std::max(xmax, o.xmax);
  ymin = std::min(ymin, o.ymin);
  ymax = std::max(ymax, o.ymax);
  sides |= o.sides;
}

double BoundaryContacts::extent() const {
  if (empty()) return 0.0;
  return std::max(xmax - xmin, ymax - ymin);
}

bool spans_window(const BoundaryContacts& contacts, double half_size, double step) {
  // Region contacts sit on the half-step lattice, so ties with L - 2h are
  // common; the quarter-step slack keeps them from being decided by rounding.
  return !contacts.empty() && contacts.extent() >= half_size - 2.25 * step;
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist2(const Point2& a, const Point2& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

double point_set_diameter(std::vector<Point2> pts) {
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  if (n == 2) return std::sqrt(dist2(pts[0], pts[1]));
  // Andrew's monotone chain.
  std::vector<Point2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  const std::size_t m = hull.size();
  if (m < 3) {
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) best = std::max(best, dist2(hull[i], hull[j]));
    return std::sqrt(best);
  }
  // Rotating calipers over antipodal pairs.
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % m];
    while (std::abs(cross(a, b, hull[(j + 1) % m])) > std::abs(cross(a, b, hull[j]))) j = (j + 1) % m;
    best = std::max({best, dist2(a, hull[j]), dist2(b, hull[j])});
  }
  return std::sqrt(best);
}

namespace {

// Cell-local edge numbering: 0 bottom, 1 right, 2 top, 3 left.
class MarchingGrid {
 public:
  MarchingGrid(const ScalarField& field, double c)
      : f_(field), c_(c), n_(field.window.cells()), nv_(field.nv()),
        nh_(std::size_t(n_) * std::size_t(nv_)),
        visited_(2 * nh_, false) {}

  bool above(int i, int j) const { return f_.at(i, j) > c_; }

  std::size_t h_edge(int i, int j) const { return std::size_t(j) * std::size_t(n_) + std::size_t(i); }
  std::size_t v_edge(int i, int j) const { return nh_ + std::size_t(j) * std::size_t(nv_) + std::size_t(i); }

  std::size_t cell_edge(int ci, int cj, int local) const {
    switch (local) {
      case 0: return h_edge(ci, cj);
      case 1: return v_edge(ci + 1, cj);
      case 2: return h_edge(ci, cj + 1);
      default: return v_edge(ci, cj);
    }
  }

  bool h_crossing(int i, int j) const { return above(i, j) != above(i + 1, j); }
  bool v_crossing(int i, int j) const { return above(i, j) != above(i, j + 1); }

  Point2 h_point(int i, int j) const {
    double a = f_.at(i, j), b = f_.at(i + 1, j);
    double t = (c_ - a) / (b - a);
    return {f_.window.x(i) + t * f_.window.step(), f_.window.y(j)};
  }
  Point2 v_point(int i, int j) const {
    double a = f_.at(i, j), b = f_.at(i, j + 1);
    double t = (c_ - a) / (b - a);
    return {f_.window.x(i), f_.window.y(j) + t * f_.window.step()};
  }
  Point2 local_point(int ci, int cj, int local) const {
    switch (local) {
      case 0: return h_point(ci, cj);
      case 1: return v_point(ci + 1, cj);
      case 2: return h_point(ci, cj + 1);
      default: return v_point(ci, cj);
    }
  }

  int partner(int ci, int cj, int local_in) const {
    const unsigned b0 = above(ci, cj), b1 = above(ci + 1, cj), b2 = above(ci + 1, cj + 1),
                   b3 = above(ci, cj + 1);
    const unsigned code = b0 | (b1 << 1) | (b2 << 2) | (b3 << 3);
    if (code == 5u || code == 10u) {
      const double xc = f_.window.x(ci) + 0.5 * f_.window.step();
      const double yc = f_.window.y(cj) + 0.5 * f_.window.step();
      const double center = f_.exact ? f_.exact(xc, yc)
                                     : 0.25 * (f_.at(ci, cj) + f_.at(ci + 1, cj) +
                                               f_.at(ci + 1, cj + 1) + f_.at(ci, cj + 1));
      const bool center_above = center > c_;
      // Pairing {0,1},{2,3} cuts off the bottom-right and top-left corners;
      // {0,3},{1,2} cuts off bottom-left and top-right.
      const bool cut_br_tl = (code == 5u) == center_above;
      static constexpr std::array<int, 4> kBrTl{1, 0, 3, 2};
      static constexpr std::array<int, 4> kBlTr{3, 2, 1, 0};
      return cut_br_tl ? kBrTl[std::size_t(local_in)] : kBlTr[std::size_t(local_in)];
    }
    const std::array<bool, 4> crossing{b0 != b1, b1 != b2, b2 != b3, b3 != b0};
    for (int l = 0; l < 4; ++l) {
      if (l != local_in && crossing[std::size_t(l)]) return l;
    }
    return -1;
  }

  bool visited(std::size_t e) const { return visited_[e]; }
  void mark(std::size_t e) { visited_[e] = true; }

  int cells() const { return n_; }
  int nv() const { return nv_; }
  const ScalarField& field() const { return f_; }
  double level() const { return c_; }

 private:
  const ScalarField& f_;
  double c_;
  int n_, nv_;
  std::size_t nh_;
  std::vector<bool> visited_;
};

struct Step {
  int ci, cj, local_in;
};

// Neighbor across a cell's local edge, entering through the opposite edge.
bool cross_edge(const MarchingGrid& g, int ci, int cj, int local_out, Step& next) {
  switch (local_out) {
    case 0: next = {ci, cj - 1, 2}; break;
    case 1: next = {ci + 1, cj, 3}; break;
    case 2: next = {ci, cj + 1, 0}; break;
    default: next = {ci - 1, cj, 1}; break;
  }
  return next.ci >= 0 && next.cj >= 0 && next.ci < g.cells() && next.cj < g.cells();
}

unsigned side_of_boundary_edge(const MarchingGrid& g, int ci, int cj, int local) {
  if (local == 0 && cj == 0) return kBottom;
  if (local == 2 && cj == g.cells() - 1) return kTop;
  if (local == 3 && ci == 0) return kLeft;
  if (local == 1 && ci == g.cells() - 1) return kRight;
  return 0;
}

bool point_in_polygon(const std::vector<Point2>& poly, Point2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

struct RightmostTracker {
  double x = -HUGE_VAL;
  int ci = 0, cj = 0, local = 0;
  // Ties (a crossing exactly at a vertex) go to horizontal edges, whose right
  // endpoint is outside the loop without a polygon test.
  void offer(const Point2& p, int i, int j, int l) {
    const bool horizontal = l == 0 || l == 2;
    if (p.x > x || (p.x == x && horizontal && !(local == 0 || local == 2))) {
      x = p.x;
      ci = i;
      cj = j;
      local = l;
    }
  }
};

// Kind of a closed loop from the grid vertex just outside its rightmost
// point. On a horizontal edge the right endpoint has larger x than every
// polyline vertex; otherwise fall back to a point-in-polygon test.
ComponentKind loop_kind(const MarchingGrid& g, const std::vector<Point2>& poly, const RightmostTracker& r) {
  const auto& w = g.field().window;
  int vi, vj;
  if (r.local == 0 || r.local == 2) {
    vi = r.ci + 1;
    vj = r.local == 0 ? r.cj : r.cj + 1;
  } else {
    const int ei = r.local == 1 ? r.ci + 1 : r.ci;
    vi = ei;
    vj = point_in_polygon(poly, {w.x(ei), w.y(r.cj)}) ? r.cj + 1 : r.cj;
  }
  return g.above(vi, vj) ? ComponentKind::kElectronic : ComponentKind::kHole;
}

}  // namespace

std::vector<LevelComponent> extract_level_components(const ScalarField& field, double c) {
  MarchingGrid g(field, c);
  const int n = g.cells();
  const auto& w = field.window;
  std::vector<LevelComponent> out;

  auto walk = [&](Step s, LevelComponent& comp, RightmostTracker* rightmost, std::size_t stop_edge) {
    // s is the cell being entered; the entry point was already recorded.
    while (true) {
      const int lo = g.partner(s.ci, s.cj, s.local_in);
      if (lo < 0) return;
      const std::size_t e = g.cell_edge(s.ci, s.cj, lo);
      const Point2 p = g.local_point(s.ci, s.cj, lo);
      comp.polyline.push_back(p);
      if (rightmost) rightmost->offer(p, s.ci, s.cj, lo);
      if (e == stop_edge) return;
      g.mark(e);
      Step next;
      if (!cross_edge(g, s.ci, s.cj, lo, next)) {
        const unsigned side = side_of_boundary_edge(g, s.ci, s.cj, lo);
        comp.contacts.add(p.x, p.y, side);
        return;
      }
      s = next;
    }
  };

  // Open chains start and end on boundary edges.
  std::vector<Step> starts;
  for (int i = 0; i < n; ++i) starts.push_back({i, 0, 0});
  for (int j = 0; j < n; ++j) starts.push_back({n - 1, j, 1});
  for (int i = 0; i < n; ++i) starts.push_back({i, n - 1, 2});
  for (int j = 0; j < n; ++j) starts.push_back({0, j, 3});
  for (const Step& s : starts) {
    const std::size_t e = g.cell_edge(s.ci, s.cj, s.local_in);
    const bool crossing = (s.local_in == 0 || s.local_in == 2)
                              ? g.h_crossing(s.ci, s.local_in == 0 ? s.cj : s.cj + 1)
                              : g.v_crossing(s.local_in == 3 ? s.ci : s.ci + 1, s.cj);
    if (!crossing || g.visited(e)) continue;
    g.mark(e);
    LevelComponent comp;
    const Point2 p = g.local_point(s.ci, s.cj, s.local_in);
    comp.polyline.push_back(p);
    comp.contacts.add(p.x, p.y, side_of_boundary_edge(g, s.ci, s.cj, s.local_in));
    walk(s, comp, nullptr, std::size_t(-1));
    comp.closed = false;
    comp.touches_boundary = true;
    comp.kind = ComponentKind::kBoundaryTruncated;
    comp.spans_window = spans_window(comp.contacts, w.half_size(), w.step());
    out.push_back(std::move(comp));
  }

  // Whatever crossing edges remain belong to closed loops; every loop crosses
  // some interior horizontal edge.
  for (int j = 1; j < g.nv() - 1; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!g.h_crossing(i, j)) continue;
      const std::size_t e = g.h_edge(i, j);
      if (g.visited(e)) continue;
      g.mark(e);
      LevelComponent comp;
      RightmostTracker rightmost;
      const Point2 p = g.h_point(i, j);
      comp.polyline.push_back(p);
      rightmost.offer(p, i, j, 0);
      walk({i, j, 0}, comp, &rightmost, e);
      comp.closed = comp.polyline.size() > 1 && comp.polyline.front() == comp.polyline.back();
      comp.touches_boundary = !comp.contacts.empty();
      if (comp.closed) comp.kind = loop_kind(g, comp.polyline, rightmost);
      comp.spans_window = spans_window(comp.contacts, w.half_size(), w.step());
      out.push_back(std::move(comp));
    }
  }

  for (auto& comp : out) comp.diameter = point_set_diameter(comp.polyline);
  return out;
}

ComponentKind classify_component(const PlaneEval& f, double lipschitz, double step,
                                 const LevelComponent& comp, double c) {
  if (!comp.closed) throw InputError("classify_component: component is not closed");
  const auto& poly = comp.polyline;
  const std::size_t n = poly.size() - 1;  // last vertex repeats the first
  if (n < 3) throw UndeterminedError("classify_component: degenerate loop");
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (poly[i].x > poly[best].x) best = i;
  }
  const Point2& prev = poly[(best + n - 1) % n];
  const Point2& next = poly[(best + 1) % n];
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += poly[i].x * poly[i + 1].y - poly[i + 1].x * poly[i].y;
  double tx = next.x - prev.x, ty = next.y - prev.y;
  double tn = std::hypot(tx, ty);
  if (tn == 0.0) throw UndeterminedError("classify_component: degenerate tangent");
  tx /= tn;
  ty /= tn;
  // Counterclockwise loops have their outward normal on the right of the
  // direction of travel.
  double nx = ty, ny = -tx;
  if (area2 < 0) {
    nx = -nx;
    ny = -ny;
  }
  const double threshold = lipschitz * step / 4.0;
  for (double offset : {0.5 * step, step}) {
    const double v = f(poly[best].x + offset * nx, poly[best].y + offset * ny);
    if (std::abs(v - c) >= threshold) return v > c ? ComponentKind::kElectronic : ComponentKind::kHole;
  }
  throw UndeterminedError("classify_component: probe value within C*h/4 of the level");
}

namespace {

bool pure_cell(const ScalarField& f, int ci, int cj, double c, Sign sign) {
  const double a = f.at(ci, cj), b = f.at(ci + 1, cj), d = f.at(ci + 1, cj + 1), e = f.at(ci, cj + 1);
  if (sign == Sign::kBelow) return a < c && b < c && d < c && e < c;
  return a > c && b > c && d > c && e > c;
}

void add_cell_contacts(const Window& w, int ci, int cj, BoundaryContacts& contacts) {
  const int n = w.cells();
  const double h = w.step();
  const double xm = w.x(ci) + 0.5 * h, ym = w.y(cj) + 0.5 * h;
  if (ci == 0) contacts.add(w.x(0), ym, kLeft);
  if (ci == n - 1) contacts.add(w.x(n), ym, kRight);
  if (cj == 0) contacts.add(xm, w.y(0), kBottom);
  if (cj == n - 1) contacts.add(xm, w.y(n), kTop);
}

template <typename OnCell>
RegionComponent flood(const ScalarField& field, double c, Sign sign, int si, int sj,
                      std::vector<std::int32_t>& labels, std::int32_t id,
                      std::vector<std::int32_t>& stack, OnCell&& on_cell) {
  const int n = field.window.cells();
  RegionComponent rc;
  rc.sign = sign;
  rc.imin = rc.imax = si;
  rc.jmin = rc.jmax = sj;
  stack.clear();
  labels[std::size_t(sj) * std::size_t(n) + std::size_t(si)] = id;
  stack.push_back(sj * n + si);
  while (!stack.empty()) {
    const std::int32_t cell = stack.back();
    stack.pop_back();
    const int ci = cell % n, cj = cell / n;
    ++rc.cell_count;
    rc.imin = std::min(rc.imin, ci);
    rc.imax = std::max(rc.imax, ci);
    rc.jmin = std::min(rc.jmin, cj);
    rc.jmax = std::max(rc.jmax, cj);
    add_cell_contacts(field.window, ci, cj, rc.contacts);
    on_cell(ci, cj);
    const int nbr[4][2] = {{ci - 1, cj}, {ci + 1, cj}, {ci, cj - 1}, {ci, cj + 1}};
    for (const auto& q : nbr) {
      if (q[0] < 0 || q[1] < 0 || q[0] >= n || q[1] >= n) continue;
      const std::size_t idx = std::size_t(q[1]) * std::size_t(n) + std::size_t(q[0]);
      if (labels[idx] != -1 || !pure_cell(field, q[0], q[1], c, sign)) continue;
      labels[idx] = id;
      stack.push_back(q[1] * n + q[0]);
    }
  }
  const auto& w = field.window;
  rc.touches_boundary = !rc.contacts.empty();
  rc.spans_window = spans_window(rc.contacts, w.half_size(), w.step());
  const double h = w.step();
  rc.bbox_diameter = std::hypot((rc.imax - rc.imin + 1) * h, (rc.jmax - rc.jmin + 1) * h);
  return rc;
}

}  // namespace

std::vector<RegionComponent> label_regions(const ScalarField& field, double c, Sign sign,
                                           std::vector<std::int32_t>& labels) {
  const int n = field.window.cells();
  labels.assign(std::size_t(n) * std::size_t(n), -1);
  std::vector<RegionComponent> out;
  std::vector<std::int32_t> stack;
  for (int cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      if (labels[std::size_t(cj) * std::size_t(n) + std::size_t(ci)] != -1) continue;
      if (!pure_cell(field, ci, cj, c, sign)) continue;
      out.push_back(flood(field, c, sign, ci, cj, labels, std::int32_t(out.size()), stack, [](int, int) {}));
    }
  }
  return out;
}

std::vector<RegionComponent> region_components(const ScalarField& field, double c, Sign sign) {
  std::vector<std::int32_t> labels;
  return label_regions(field, c, sign, labels);
}

bool region_spans(const ScalarField& field, double c, Sign sign) {
  const int n = field.window.cells();
  std::vector<std::int32_t> labels(std::size_t(n) * std::size_t(n), -1);
  std::vector<std::int32_t> stack;
  // Any spanning component contains a boundary cell, so seeding from the
  // boundary ring is enough.
  auto try_seed = [&](int ci, int cj) {
    if (labels[std::size_t(cj) * std::size_t(n) + std::size_t(ci)] != -1) return false;
    if (!pure_cell(field, ci, cj, c, sign)) return false;
    return flood(field, c, sign, ci, cj, labels, 0, stack, [](int, int) {}).spans_window;
  };
  for (int i = 0; i < n; ++i) {
    if (try_seed(i, 0) || try_seed(i, n - 1) || try_seed(0, i) || try_seed(n - 1, i)) return true;
  }
  return false;
}

Nudge nudge_level(const std::vector<const ScalarField*>& fields, double c) {
  Nudge out{c, 0.0};
  double tol = 0.0;
  for (const auto* f : fields) tol = std::max(tol, 1e-3 * f->lipschitz * f->window.step());
  if (tol == 0.0) return out;
  for (int attempt = 0; attempt < 16; ++attempt) {
    bool close = false;
    for (const auto* f : fields) {
      for (double v : f->values) {
        if (std::abs(v - out.level) < tol) {
          close = true;
          break;
        }
      }
      if (close) break;
    }
    if (!close) break;
    out.level += 2.0 * tol;
    out.amount = out.level - c;
  }
  return out;
}

double StepRule::step(const QuasiperiodicFunction& f) const {
  double h = period_fraction * f.period_scale();
  const double lip = f.lipschitz_bound();
  if (lip > 0.0) h = std::min(h, level_tol / lip);
  return h;
}

ScaleRecord trace_scale(const ScalarField& field, double c, std::vector<LevelComponent>* keep) {
  ScaleRecord r;
  r.half_size = field.window.half_size();
  r.step = field.window.step();
  auto comps = extract_level_components(field, c);
  for (const auto& comp : comps) {
    if (comp.spans_window) ++r.spanning_count;
    if (comp.closed) {
      ++r.closed_count;
      r.max_closed_diameter = std::max(r.max_closed_diameter, comp.diameter);
      if (comp.kind == ComponentKind::kElectronic) {
        ++r.electronic_count;
        r.max_electronic_diameter = std::max(r.max_electronic_diameter, comp.diameter);
      } else {
        ++r.hole_count;
        r.max_hole_diameter = std::max(r.max_hole_diameter, comp.diameter);
      }
    } else {
      ++r.truncated_count;
    }
  }
  for (Sign s : {Sign::kBelow, Sign::kAbove}) {
    bool touches = false, spans = false;
    for (const auto& rc : region_components(field, c, s)) {
      touches = touches || rc.touches_boundary;
      spans = spans || rc.spans_window;
    }
    (s == Sign::kBelow ? r.below_touches_boundary : r.above_touches_boundary) = touches;
    (s == Sign::kBelow ? r.below_spans : r.above_spans) = spans;
  }
  if (keep) *keep = std::move(comps);
  return r;
}

ScaleReport multiscale_trace(const QuasiperiodicFunction& f, double c, const TraceParams& params) {
  if (f.dim() != 2) throw InputError("multiscale_trace: needs a plane restriction");
  if (params.scales.size() < 3) throw InputError("multiscale_trace: need at least 3 scales");
  for (std::size_t i = 1; i < params.scales.size(); ++i) {
    if (!(params.scales[i] > params.scales[i - 1])) throw InputError("multiscale_trace: scales must increase strictly");
  }
  ScaleReport report;
  report.level = c;
  report.traced_level = c;
  const double ps = f.period_scale();
  const double h = params.step_rule.step(f);
  report.scales.resize(params.scales.size());
  try {
    // Largest window first: all windows share one lattice and are nested, so
    // the nudge decided on the largest field holds for every scale.
    const std::size_t top = params.scales.size() - 1;
    Window w(0.0, 0.0, params.scales[top] * ps, h);
    ScalarField largest = sample_grid(f, w, params.vertex_budget);
    Nudge nd = nudge_level({&largest}, c);
    report.traced_level = nd.level;
    report.nudge = nd.amount;
    if (nd.applied()) report.warnings.push_back("level nudged by " + std::to_string(nd.amount));
    for (std::size_t k = 0; k < top; ++k) {
      report.scales[k] = trace_scale(crop(largest, params.scales[k] * ps), report.traced_level);
    }
    const bool keep = params.keep_components;
    report.scales[top] = trace_scale(largest, report.traced_level, keep ? &report.components : nullptr);
    if (keep) report.last_window = w;
  } catch (const ResourceError& e) {
    report.failure = e.what();
    report.warnings.push_back(report.failure);
    report.verdict = Verdict::kUndetermined;
    return report;
  }
  report.verdict = open_line_verdict(report);
  if (report.verdict == Verdict::kUndetermined) report.warnings.push_back("undetermined verdict");
  return report;
}

double top_three_variation(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const std::size_t start = values.size() >= 3 ? values.size() - 3 : 0;
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (std::size_t i = start; i < values.size(); ++i) {
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

Verdict open_line_verdict(const ScaleReport& report) {
  if (!report.failure.empty()) return Verdict::kUndetermined;
  const auto& s = report.scales;
  if (s.size() < 3) throw InputError("open_line_verdict: need a report with at least 3 scales");
  bool every_spans = true, none_spans = true;
  for (const auto& r : s) {
    if (r.spanning_count > 0) {
      none_spans = false;
      if (!(r.below_touches_boundary && r.above_touches_boundary)) {
        throw ConsistencyError("spanning level line at L = " + std::to_string(r.half_size) + " without a " +
                               (r.below_touches_boundary ? "Omega+" : "Omega-") +
                               " region touching the boundary (level " + std::to_string(report.traced_level) + ")");
      }
    } else {
      every_spans = false;
    }
  }
  if (every_spans) return Verdict::kOpen;
  if (!none_spans) return Verdict::kUndetermined;
  std::vector<double> d;
  for (const auto& r : s) d.push_back(r.max_closed_diameter);
  const double first = d.front(), last = d.back();
  if (last > 0.0 && last >= kGrowthFactor * first) return Verdict::kClosedGrowing;
  if (top_three_variation(d) < kStableVariation) return Verdict::kClosedBounded;
  return Verdict::kUndetermined;
}

}  // namespace novikov
