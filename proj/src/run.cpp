#include "novikov/run.hpp"

#include <chrono>
#include <fstream>
#include <random>

#include "novikov/errors.hpp"
#include "novikov/ndscan.hpp"
#include "novikov/report.hpp"
#include "novikov/svg.hpp"

namespace novikov {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool wants(const RunConfig& cfg, OutputFormat f) { return cfg.format == OutputFormat::kAll || cfg.format == f; }

void require_format(const RunConfig& cfg, std::initializer_list<OutputFormat> supported) {
  if (cfg.format == OutputFormat::kAll) return;
  for (auto f : supported) {
    if (f == cfg.format) return;
  }
  throw InputError("format: task " + to_string(cfg.task) + " has no " + to_string(cfg.format) + " output");
}

json direction_report(const EmbeddingFrame& frame) {
  const int N = frame.ambient_dim();
  const int bound = N <= 4 ? 10 : N == 5 ? 4 : N <= 7 ? 2 : 1;
  return to_json(classify_direction(frame, bound, 1e-9));
}

json header(const RunConfig& cfg, const std::string& hash) {
  return {{"config_hash", hash}, {"task", to_string(cfg.task)}, {"seed", cfg.seed}};
}

IntervalParams interval_params(const RunConfig& cfg, int shifts) {
  IntervalParams p;
  p.level_grid = cfg.level_grid;
  p.refinements = cfg.refinements;
  p.shift_samples = shifts;
  p.seed = cfg.seed;
  p.scales = cfg.task == Task::kInterval && !cfg.scales.empty() ? cfg.scales : IntervalParams{}.scales;
  p.step_rule = cfg.step_rule;
  p.vertex_budget = cfg.vertex_budget;
  return p;
}

NdParams nd_params(const RunConfig& cfg) {
  NdParams p;
  p.scales = cfg.effective_scales();
  p.step_rule = cfg.step_rule;
  p.vertex_budget = cfg.vertex_budget;
  return p;
}

NdIntervalParams nd_interval_params(const RunConfig& cfg, int shifts) {
  NdIntervalParams p;
  p.level_grid = cfg.level_grid;
  p.refinements = cfg.refinements;
  p.shift_samples = shifts;
  p.seed = cfg.seed;
  p.scan = nd_params(cfg);
  return p;
}

CriticalIntervalEstimate interval_for(const RunConfig& cfg, int shifts) {
  if (cfg.frame.dim() == 3) return estimate_interval_nd(cfg.potential, cfg.frame, nd_interval_params(cfg, shifts));
  return estimate_interval(cfg.potential, cfg.frame, interval_params(cfg, shifts));
}

std::vector<double> sweep_levels(const RunConfig& cfg) {
  if (cfg.levels) return cfg.levels->values();
  if (cfg.level) return {*cfg.level};
  return auto_levels(cfg.potential);
}

std::vector<LabeledSample> sweep_for(const RunConfig& cfg, const std::vector<double>& levels) {
  if (cfg.frame.dim() == 3) {
    return situation_sweep_nd(cfg.potential, cfg.frame, levels, cfg.effective_shifts(), nd_params(cfg), cfg.seed);
  }
  return situation_sweep(cfg.potential, cfg.frame, levels, cfg.effective_shifts(), cfg.trace_params(), cfg.seed);
}

void note_undetermined(const std::vector<LabeledSample>& labels, RunReport& rep) {
  int n = 0;
  for (const auto& s : labels) n += s.label.label == Situation::kUndetermined;
  if (n > 0) rep.warnings.push_back(std::to_string(n) + " of " + std::to_string(labels.size()) +
                                    " samples undetermined");
}

void note_interval(const CriticalIntervalEstimate& e, RunReport& rep) {
  if (e.unresolved) rep.warnings.push_back("interval unresolved on the level grid");
}

// Plot of the smallest scale window; the largest can hold tens of thousands
// of loops.
std::string plot_smallest(const QuasiperiodicFunction& f, const TraceParams& params, double level,
                          double* traced = nullptr) {
  const Window w(0.0, 0.0, params.scales.front() * f.period_scale(), params.step_rule.step(f));
  const ScalarField field = sample_grid(f, w, params.vertex_budget);
  const Nudge nudge = nudge_level({&field}, level);
  if (traced) *traced = nudge.level;
  return render_svg(extract_level_components(field, nudge.level), w, nudge.level);
}

void task_plot(const RunConfig& cfg, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kSvg});
  const auto f = restrict_to(cfg.potential, cfg.frame);
  Stopwatch sw;
  double traced = *cfg.level;
  out.add("plot.svg", plot_smallest(f, cfg.trace_params(), *cfg.level, &traced));
  if (traced != *cfg.level) rep.warnings.push_back("level nudged by " + format_double(traced - *cfg.level));
  rep.timings["plot"] = sw.seconds();
}

void task_trace(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kCsv, OutputFormat::kJson, OutputFormat::kSvg});
  TraceParams params = cfg.trace_params();
  params.keep_components = true;
  const auto f = restrict_to(cfg.potential, cfg.frame);
  Stopwatch sw;
  const ScaleReport report = multiscale_trace(f, *cfg.level, params);
  rep.timings["trace"] = sw.seconds();
  rep.warnings.insert(rep.warnings.end(), report.warnings.begin(), report.warnings.end());

  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["period_scale"] = f.period_scale();
    j["lipschitz_bound"] = f.lipschitz_bound();
    j["direction"] = direction_report(cfg.frame);
    j["report"] = to_json(report);
    out.add("trace.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) {
    out.add("components.csv", components_csv(report.components));
    out.add("scales.csv", scales_csv(hash, report.scales));
  }
  if (wants(cfg, OutputFormat::kSvg)) out.add("trace.svg", plot_smallest(f, params, report.traced_level));
}

void task_classify(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kCsv, OutputFormat::kJson});
  const auto f = restrict_to(cfg.potential, cfg.frame);
  Stopwatch sw;
  ScaleReport report = cfg.frame.dim() == 3 ? multiscale_scan_nd(f, *cfg.level, nd_params(cfg))
                                            : multiscale_trace(f, *cfg.level, cfg.trace_params());
  rep.timings["classify"] = sw.seconds();
  const SituationLabel label = situation_from_report(report);
  rep.warnings.insert(rep.warnings.end(), report.warnings.begin(), report.warnings.end());
  if (label.label == Situation::kUndetermined) rep.warnings.push_back("situation undetermined");

  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["direction"] = direction_report(cfg.frame);
    j["situation"] = to_json(label);
    j["report"] = to_json(report);
    out.add("classify.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) out.add("classify.csv", sweep_csv(hash, {{0, *cfg.level, label}}));
}

void task_interval(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kCsv, OutputFormat::kJson});
  Stopwatch sw;
  const auto e = interval_for(cfg, cfg.effective_shifts());
  rep.timings["interval"] = sw.seconds();
  note_interval(e, rep);
  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["direction"] = direction_report(cfg.frame);
    j["interval"] = to_json(e);
    out.add("interval.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) out.add("onsets.csv", onsets_csv(hash, e));
}

void task_sweep(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kCsv, OutputFormat::kJson});
  const auto levels = sweep_levels(cfg);
  Stopwatch sw;
  const auto labels = sweep_for(cfg, levels);
  rep.timings["sweep"] = sw.seconds();
  note_undetermined(labels, rep);
  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["levels"] = levels;
    json arr = json::array();
    for (const auto& s : labels) arr.push_back(to_json(s));
    j["labels"] = arr;
    out.add("sweep.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) out.add("sweep.csv", sweep_csv(hash, labels));
}

void task_ndscan(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kCsv, OutputFormat::kJson});
  const auto f = restrict_to(cfg.potential, cfg.frame);
  const NdParams params = nd_params(cfg);
  std::vector<double> levels;
  if (cfg.levels) levels = cfg.levels->values();
  if (cfg.level) levels.push_back(*cfg.level);

  Stopwatch sw;
  json per_level = json::array();
  std::vector<LabeledSample> labels;
  std::vector<LevelBandComponent> bands;
  for (double c : levels) {
    const ScaleReport report = multiscale_scan_nd(f, c, params);
    const SituationLabel label = situation_from_report(report);
    for (const auto& w : report.warnings) rep.warnings.push_back("c=" + format_double(c) + ": " + w);
    labels.push_back({0, c, label});
    per_level.push_back({{"c", c}, {"situation", to_json(label)}, {"report", to_json(report)}});
  }
  if (levels.size() == 1) {
    // Band census of the largest box for a single requested level.
    const double ps = f.period_scale();
    const double h = params.step_rule.step(f);
    const VoxelField vf = sample_box(f, BoxWindow({0.0, 0.0, 0.0}, params.scales.back() * ps, h), params.vertex_budget);
    const NdGrid g = to_nd(vf);
    bands = level_components_nd(g, per_level[0]["report"]["traced_level"].get<double>());
  }
  rep.timings["scan"] = sw.seconds();

  Stopwatch swi;
  const auto e = interval_for(cfg, cfg.effective_shifts());
  rep.timings["interval"] = swi.seconds();
  note_interval(e, rep);

  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["direction"] = direction_report(cfg.frame);
    j["interval"] = to_json(e);
    j["levels"] = per_level;
    if (!bands.empty()) {
      json arr = json::array();
      for (const auto& bc : bands) arr.push_back(to_json(bc));
      j["bands"] = arr;
    }
    out.add("nd_report.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) {
    out.add("nd_labels.csv", sweep_csv(hash, labels));
    if (!bands.empty()) out.add("bands.csv", bands_csv(bands));
  }
}

void check_theorem21_task(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  Stopwatch sw;
  const auto e = interval_for(cfg, cfg.frame.dim() == 3 ? NdIntervalParams{}.shift_samples
                                                        : IntervalParams{}.shift_samples);
  rep.timings["interval"] = sw.seconds();
  note_interval(e, rep);
  const auto levels = sweep_levels(cfg);
  Stopwatch sws;
  const auto labels = sweep_for(cfg, levels);
  rep.timings["sweep"] = sws.seconds();
  note_undetermined(labels, rep);
  const auto violations = check_theorem21(e, labels, cfg.tolerance);
  rep.violations = int(violations.size());
  for (const auto& v : violations) {
    rep.warnings.push_back("violation: " + v.rule + " at c=" + format_double(v.sample.c) + " shift " +
                           std::to_string(v.sample.shift_index));
  }
  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["check"] = to_string(cfg.check);
    j["interval"] = to_json(e);
    j["labels"] = labels.size();
    json arr = json::array();
    for (const auto& v : violations) arr.push_back(to_json(v));
    j["violations"] = arr;
    out.add("check.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) out.add("sweep.csv", sweep_csv(hash, labels));
}

void check_theorem22_task(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  Stopwatch sw;
  const auto e = interval_for(cfg, IntervalParams{}.shift_samples);
  rep.timings["interval"] = sw.seconds();
  note_interval(e, rep);
  Stopwatch swc;
  const auto r = check_theorem22(cfg.potential, cfg.frame, e, cfg.interior_levels, cfg.effective_shifts(),
                                 cfg.trace_params(), cfg.seed, cfg.tolerance);
  rep.timings["check"] = swc.seconds();
  if (!r.applicable) rep.warnings.push_back("interval degenerate: open-interior check not applicable");
  for (const auto& x : r.exceptions) {
    rep.warnings.push_back("not open: c=" + format_double(x.c) + " shift " + std::to_string(x.shift_index) + " (" +
                           to_string(x.verdict) + ")");
  }
  rep.violations = r.pass() ? 0 : int(r.exceptions.size());
  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["check"] = to_string(cfg.check);
    j["interval"] = to_json(e);
    j["result"] = to_json(r);
    out.add("check.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) {
    std::string csv = "config_hash,shift_index,c,verdict\n";
    for (const auto& x : r.exceptions) {
      csv += hash + "," + std::to_string(x.shift_index) + "," + format_double(x.c) + "," + to_string(x.verdict) + "\n";
    }
    out.add("exceptions.csv", csv);
  }
}

void check_transfer_task(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  const auto transverse = transverse_basis(cfg.frame);
  if (transverse.empty()) throw InputError("check transfer: the plane has no transverse directions (N = n)");
  const RangeEstimate range = range_estimate(cfg.potential, default_range_resolution(cfg.potential.dimension()));
  const double lo = range.f_min_est, hi = range.f_max_est, span = hi - lo;
  const double C = cfg.potential.lipschitz_bound();
  if (!(span > 0.0) || !(C > 0.0)) throw InputError("check transfer: the potential is constant");
  TransferParams params;
  params.step_rule = cfg.step_rule;
  params.vertex_budget = cfg.vertex_budget;
  if (!cfg.scales.empty()) params.half_size = cfg.scales.back();

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  json trials = json::array();
  std::string csv = "config_hash,trial,c,c_prime,shift_norm,cells_checked,counterexamples,pass\n";
  Stopwatch sw;
  for (int t = 0; t < cfg.transfer_trials; ++t) {
    const double c = lo + span * (0.1 + 0.8 * u01(rng));
    const double c_prime = c - span * (0.01 + 0.2 * u01(rng));
    const double norm = (c - c_prime) / C * (0.05 + 0.9 * u01(rng));
    Vec a(std::size_t(cfg.potential.dimension()), 0.0);
    double len = 0.0;
    std::vector<double> w(transverse.size());
    std::normal_distribution<double> g;
    for (auto& x : w) x = g(rng), len += x * x;
    len = std::sqrt(len);
    for (std::size_t i = 0; i < transverse.size(); ++i) {
      for (std::size_t d = 0; d < a.size(); ++d) a[d] += norm * w[i] / len * transverse[i][d];
    }
    const auto r = transfer_inclusion_check(cfg.potential, cfg.frame, c, c_prime, a, params);
    if (!r.pass) ++rep.violations;
    json jt = to_json(r);
    jt["c"] = c;
    jt["c_prime"] = c_prime;
    jt["shift"] = a;
    trials.push_back(jt);
    csv += hash + "," + std::to_string(t) + "," + format_double(c) + "," + format_double(c_prime) + "," +
           format_double(norm) + "," + std::to_string(r.cells_checked) + "," + std::to_string(r.counterexamples) +
           "," + (r.pass ? "1" : "0") + "\n";
  }
  rep.timings["check"] = sw.seconds();
  if (rep.violations > 0) rep.warnings.push_back(std::to_string(rep.violations) + " transfer trials failed");
  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["check"] = to_string(cfg.check);
    j["trials"] = trials;
    out.add("check.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) out.add("transfer.csv", csv);
}

void check_diameter_task(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  Stopwatch sw;
  const auto d = cfg.frame.dim() == 3
                     ? uniform_diameter_check_nd(cfg.potential, cfg.frame, *cfg.level, cfg.effective_shifts(),
                                                 nd_params(cfg), cfg.seed)
                     : bounded_diameter_estimate(cfg.potential, cfg.frame, *cfg.level, cfg.effective_shifts(),
                                                 cfg.trace_params(), cfg.seed);
  rep.timings["check"] = sw.seconds();
  if (!d.stable || d.shift_spread >= kStableVariation) {
    rep.violations = 1;
    rep.warnings.push_back("diameter bound not stable across scales or shifts");
  }
  if (wants(cfg, OutputFormat::kJson)) {
    json j = header(cfg, hash);
    j["check"] = to_string(cfg.check);
    j["result"] = to_json(d);
    out.add("check.json", dump(j));
  }
  if (wants(cfg, OutputFormat::kCsv)) {
    std::string csv = "config_hash,shift_index,max_closed_diameter\n";
    for (std::size_t i = 0; i < d.per_shift.size(); ++i) {
      csv += hash + "," + std::to_string(i) + "," + format_double(d.per_shift[i]) + "\n";
    }
    out.add("diameters.csv", csv);
  }
}

void task_check(const RunConfig& cfg, const std::string& hash, RunOutputs& out, RunReport& rep) {
  require_format(cfg, {OutputFormat::kCsv, OutputFormat::kJson});
  switch (cfg.check) {
    case CheckKind::kTheorem21: return check_theorem21_task(cfg, hash, out, rep);
    case CheckKind::kTheorem22: return check_theorem22_task(cfg, hash, out, rep);
    case CheckKind::kTransfer: return check_transfer_task(cfg, hash, out, rep);
    case CheckKind::kDiameter: return check_diameter_task(cfg, hash, out, rep);
  }
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw ResourceError("cannot write " + p.string());
  f << content;
  if (!f) throw ResourceError("write failed: " + p.string());
}

}  // namespace

json to_json(const RunReport& r) {
  return {{"config_hash", r.config_hash}, {"task", to_string(r.task)}, {"timings", r.timings},
          {"outputs", r.outputs},         {"warnings", r.warnings},    {"violations", r.violations},
          {"exit_code", r.exit_code()}};
}

std::vector<double> auto_levels(const PeriodicFunction& F, int count) {
  const RangeEstimate r = range_estimate(F, default_range_resolution(F.dimension()));
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(r.f_min_est + (r.f_max_est - r.f_min_est) * (i + 1) / (count + 1));
  return out;
}

RunReport execute(const RunConfig& cfg, RunOutputs& outputs) {
  RunReport rep;
  rep.task = cfg.task;
  rep.config_hash = config_hash(cfg);
  Stopwatch total;
  switch (cfg.task) {
    case Task::kTrace: task_trace(cfg, rep.config_hash, outputs, rep); break;
    case Task::kPlot: task_plot(cfg, outputs, rep); break;
    case Task::kClassify: task_classify(cfg, rep.config_hash, outputs, rep); break;
    case Task::kInterval: task_interval(cfg, rep.config_hash, outputs, rep); break;
    case Task::kSweep: task_sweep(cfg, rep.config_hash, outputs, rep); break;
    case Task::kNdscan: task_ndscan(cfg, rep.config_hash, outputs, rep); break;
    case Task::kCheck: task_check(cfg, rep.config_hash, outputs, rep); break;
  }
  rep.timings["total"] = total.seconds();
  for (const auto& [name, content] : outputs.files) rep.outputs.push_back(name);
  return rep;
}

RunReport run(const RunConfig& cfg) {
  RunOutputs outputs;
  RunReport rep = execute(cfg, outputs);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ResourceError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  write_file(cfg.out_dir / "config.json", dump(canonical_json(cfg)));
  for (const auto& [name, content] : outputs.files) write_file(cfg.out_dir / name, content);
  rep.outputs.insert(rep.outputs.begin(), "config.json");
  rep.outputs.push_back("run.json");
  write_file(cfg.out_dir / "run.json", dump(to_json(rep)));
  return rep;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return kExitInputError;
  if (dynamic_cast<const ContradictionError*>(&e)) return kExitInputError;
  if (dynamic_cast<const ResourceError*>(&e)) return kExitResourceError;
  if (dynamic_cast<const std::bad_alloc*>(&e)) return kExitResourceError;
  return kExitInternal;
}

}  // namespace novikov
