#include "novikov/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace novikov {

using nlohmann::json;

namespace {

// JSON has no infinities; onsets that never occur are written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* b(bool v) { return v ? "1" : "0"; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

json to_json(const ScaleRecord& r) {
  return {{"half_size", r.half_size},
          {"step", r.step},
          {"spanning_count", r.spanning_count},
          {"closed_count", r.closed_count},
          {"electronic_count", r.electronic_count},
          {"hole_count", r.hole_count},
          {"truncated_count", r.truncated_count},
          {"max_closed_diameter", r.max_closed_diameter},
          {"max_electronic_diameter", r.max_electronic_diameter},
          {"max_hole_diameter", r.max_hole_diameter},
          {"below_touches_boundary", r.below_touches_boundary},
          {"above_touches_boundary", r.above_touches_boundary},
          {"below_spans", r.below_spans},
          {"above_spans", r.above_spans}};
}

json to_json(const ScaleReport& r) {
  json scales = json::array();
  for (const auto& s : r.scales) scales.push_back(to_json(s));
  return {{"level", r.level},         {"traced_level", r.traced_level}, {"nudge", r.nudge},
          {"verdict", to_string(r.verdict)}, {"failure", r.failure},   {"warnings", r.warnings},
          {"scales", scales}};
}

json to_json(const Bracket& br) { return {{"lo", br.lo}, {"hi", br.hi}, {"width", br.width()}}; }

json to_json(const CriticalIntervalEstimate& e) {
  json onsets = json::array();
  for (const auto& o : e.onsets) {
    json below = json::array(), above = json::array();
    for (double v : o.below) below.push_back(num(v));
    for (double v : o.above) above.push_back(num(v));
    onsets.push_back({{"shift_index", o.shift_index}, {"shift", o.shift}, {"below", below}, {"above", above}});
  }
  json log = json::array();
  for (const auto& p : e.log) log.push_back({{"predicate", p.predicate}, {"c", p.c}, {"value", p.value}});
  return {{"c1", to_json(e.c1)},
          {"c2", to_json(e.c2)},
          {"degenerate", e.degenerate},
          {"unresolved", e.unresolved},
          {"width", e.width()},
          {"shifts_sampled", e.shifts_sampled},
          {"scales", e.scales},
          {"step", e.step},
          {"f_min_est", e.f_min_est},
          {"f_max_est", e.f_max_est},
          {"onsets", onsets},
          {"log", log}};
}

json to_json(const SituationLabel& s) {
  const auto& e = s.evidence;
  return {{"label", to_string(s.label)},
          {"verdict", to_string(s.verdict)},
          {"evidence",
           {{"open", e.open},
            {"spanning_lines", e.spanning_lines},
            {"below_unbounded", e.below_unbounded},
            {"above_unbounded", e.above_unbounded},
            {"large_electronic", e.large_electronic},
            {"large_hole", e.large_hole}}}};
}

json to_json(const LabeledSample& s) {
  json j = to_json(s.label);
  j["shift_index"] = s.shift_index;
  j["c"] = s.c;
  return j;
}

json to_json(const Violation& v) {
  json j = to_json(v.sample);
  j["rule"] = v.rule;
  return j;
}

json to_json(const Theorem22Result& r) {
  json ex = json::array();
  for (const auto& e : r.exceptions) {
    json scales = json::array();
    for (const auto& s : e.scales) scales.push_back(to_json(s));
    ex.push_back({{"shift_index", e.shift_index}, {"c", e.c}, {"verdict", to_string(e.verdict)}, {"scales", scales}});
  }
  return {{"applicable", r.applicable},       {"samples", r.samples}, {"open_count", r.open_count},
          {"open_fraction", r.open_fraction()}, {"delta", r.delta},   {"pass", r.pass()},
          {"exceptions", ex}};
}

json to_json(const TransferResult& r) {
  return {{"pass", r.pass}, {"cells_checked", r.cells_checked}, {"counterexamples", r.counterexamples}};
}

json to_json(const DiameterBoundEstimate& d) {
  return {{"c", d.c},
          {"d_est", d.d_est},
          {"scales", d.scales},
          {"per_scale", d.per_scale},
          {"per_shift", d.per_shift},
          {"stable", d.stable},
          {"shift_spread", d.shift_spread}};
}

json to_json(const DirectionClass& d) {
  return {{"label", to_string(d.label)},
          {"in_plane", d.in_plane},
          {"hyperplane_normals", d.hyperplane_normals},
          {"search_bound", d.search_bound},
          {"tolerance", d.tolerance}};
}

json to_json(const LevelBandComponent& bc) {
  return {{"voxel_count", bc.voxel_count},
          {"touches_boundary", bc.touches_boundary},
          {"spans_window", bc.spans_window},
          {"kind", to_string(bc.kind)},
          {"lo", bc.lo},
          {"hi", bc.hi},
          {"diameter", bc.diameter}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string components_csv(const std::vector<LevelComponent>& comps) {
  std::ostringstream out;
  out << "id,closed,kind,diameter,touches_boundary,vertex_count\n";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& c = comps[i];
    const std::size_t nv = c.closed && !c.polyline.empty() ? c.polyline.size() - 1 : c.polyline.size();
    out << i << ',' << b(c.closed) << ',' << to_string(c.kind) << ',' << format_double(c.diameter) << ','
        << b(c.touches_boundary) << ',' << nv << '\n';
  }
  return out.str();
}

std::string scales_csv(const std::string& config_hash, const std::vector<ScaleRecord>& scales) {
  std::ostringstream out;
  out << "config_hash,half_size,step,spanning,closed,electronic,hole,truncated,max_closed_diameter,"
         "max_electronic_diameter,max_hole_diameter,below_spans,above_spans\n";
  for (const auto& r : scales) {
    out << config_hash << ',' << format_double(r.half_size) << ',' << format_double(r.step) << ','
        << r.spanning_count << ',' << r.closed_count << ',' << r.electronic_count << ',' << r.hole_count << ','
        << r.truncated_count << ',' << format_double(r.max_closed_diameter) << ','
        << format_double(r.max_electronic_diameter) << ',' << format_double(r.max_hole_diameter) << ','
        << b(r.below_spans) << ',' << b(r.above_spans) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::string& config_hash, const std::vector<LabeledSample>& labels) {
  std::ostringstream out;
  out << "config_hash,shift_index,c,label,verdict,open,spanning_lines,below_unbounded,above_unbounded,"
         "large_electronic,large_hole\n";
  for (const auto& s : labels) {
    const auto& e = s.label.evidence;
    out << config_hash << ',' << s.shift_index << ',' << format_double(s.c) << ',' << to_string(s.label.label)
        << ',' << to_string(s.label.verdict) << ',' << b(e.open) << ',' << b(e.spanning_lines) << ','
        << b(e.below_unbounded) << ',' << b(e.above_unbounded) << ',' << b(e.large_electronic) << ','
        << b(e.large_hole) << '\n';
  }
  return out.str();
}

std::string onsets_csv(const std::string& config_hash, const CriticalIntervalEstimate& e) {
  std::ostringstream out;
  out << "config_hash,shift_index,half_size,below_onset,above_onset\n";
  for (const auto& o : e.onsets) {
    for (std::size_t k = 0; k < o.below.size(); ++k) {
      out << config_hash << ',' << o.shift_index << ',' << format_double(e.scales[k]) << ','
          << format_double(o.below[k]) << ',' << format_double(o.above[k]) << '\n';
    }
  }
  return out.str();
}

std::string bands_csv(const std::vector<LevelBandComponent>& bands) {
  std::ostringstream out;
  out << "id,kind,diameter,touches_boundary,spans_window,voxel_count\n";
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& bc = bands[i];
    out << i << ',' << to_string(bc.kind) << ',' << format_double(bc.diameter) << ',' << b(bc.touches_boundary)
        << ',' << b(bc.spans_window) << ',' << bc.voxel_count << '\n';
  }
  return out.str();
}

}  // namespace novikov
