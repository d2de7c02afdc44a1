#include "novikov/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "novikov/errors.hpp"

namespace novikov {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError("config." + path + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

int positive_int(const json& j, const std::string& path) {
  const std::int64_t v = integer(j, path);
  if (v < 1 || v > 1'000'000) fail(path, "must be in [1, 1000000]");
  return int(v);
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vec vec(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

double opt_number(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? number(j[key], join(path, key)) : fallback;
}

json read_json_file(const std::filesystem::path& p, const std::string& path) {
  std::ifstream in(p);
  if (!in) fail(path, "cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path, p.string() + ": " + e.what());
  }
}

json canonical_terms(const PeriodicFunction& F) {
  json terms = json::array();
  for (const auto& t : F.terms()) terms.push_back({{"k", t.k}, {"amplitude", t.amplitude}, {"phase", t.phase}});
  return {{"dimension", F.dimension()}, {"constant", F.constant()}, {"terms", terms}};
}

json frame_to_json(const EmbeddingFrame& fr) {
  return {{"N", fr.ambient_dim()}, {"n", fr.dim()}, {"basis_raw", fr.raw_basis()}, {"shift", fr.shift()}};
}

EmbeddingFrame identity_frame(int N, int n) {
  std::vector<Vec> raw(std::size_t(n), Vec(std::size_t(N), 0.0));
  for (int i = 0; i < n; ++i) raw[std::size_t(i)][std::size_t(i)] = 1.0;
  return make_frame(std::move(raw), Vec(std::size_t(N), 0.0));
}

std::vector<PlanarWave> waves_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<PlanarWave> waves;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    check_keys(j[i], p, {"theta_deg", "period", "amplitude", "phase"});
    PlanarWave w;
    if (!j[i].contains("theta_deg")) fail(p, "theta_deg is required");
    w.theta_deg = number(j[i]["theta_deg"], p + ".theta_deg");
    w.period = opt_number(j[i], "period", p, 1.0);
    w.amplitude = opt_number(j[i], "amplitude", p, 1.0);
    w.phase = opt_number(j[i], "phase", p, 0.0);
    waves.push_back(w);
  }
  return waves;
}

json waves_to_json(const std::vector<PlanarWave>& waves) {
  json arr = json::array();
  for (const auto& w : waves) {
    arr.push_back({{"theta_deg", w.theta_deg}, {"period", w.period}, {"amplitude", w.amplitude}, {"phase", w.phase}});
  }
  return {{"waves", arr}};
}

}  // namespace

std::string to_string(Task t) {
  switch (t) {
    case Task::kTrace: return "trace";
    case Task::kClassify: return "classify";
    case Task::kInterval: return "interval";
    case Task::kSweep: return "sweep";
    case Task::kNdscan: return "ndscan";
    case Task::kCheck: return "check";
    case Task::kPlot: return "plot";
  }
  return "?";
}

Task parse_task(const std::string& s) {
  for (Task t : {Task::kTrace, Task::kClassify, Task::kInterval, Task::kSweep, Task::kNdscan, Task::kCheck,
                 Task::kPlot}) {
    if (to_string(t) == s) return t;
  }
  throw InputError("config.task: unknown task '" + s + "'");
}

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::kTheorem21: return "theorem21";
    case CheckKind::kTheorem22: return "theorem22";
    case CheckKind::kTransfer: return "transfer";
    case CheckKind::kDiameter: return "diameter";
  }
  return "?";
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::kAll: return "all";
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
    case OutputFormat::kSvg: return "svg";
  }
  return "?";
}

OutputFormat parse_format(const std::string& s) {
  for (OutputFormat f : {OutputFormat::kAll, OutputFormat::kCsv, OutputFormat::kJson, OutputFormat::kSvg}) {
    if (to_string(f) == s) return f;
  }
  throw InputError("format: expected csv, json or svg, got '" + s + "'");
}

std::vector<double> LevelRange::values() const {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

LevelRange parse_level_range(const std::string& s) {
  LevelRange r;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.count, &tail) != 3 || !std::isfinite(r.lo) ||
      !std::isfinite(r.hi)) {
    throw InputError("levels: expected lo:hi:count, got '" + s + "'");
  }
  if (r.count < 1) throw InputError("levels: count must be positive");
  if (r.hi < r.lo) throw InputError("levels: hi must not be below lo");
  return r;
}

PeriodicFunction potential_from_json(const json& j, const std::string& path) {
  check_keys(j, path, {"dimension", "constant", "terms"});
  if (!j.contains("dimension")) fail(path, "dimension is required");
  const std::int64_t n = integer(j["dimension"], join(path, "dimension"));
  if (n < 1 || n > 16) fail(join(path, "dimension"), "must be in [1, 16]");
  if (!j.contains("terms") || !j["terms"].is_array()) fail(join(path, "terms"), "expected an array");
  std::vector<FrequencyComponent> terms;
  const json& arr = j["terms"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = join(path, "terms") + "[" + std::to_string(i) + "]";
    check_keys(arr[i], p, {"k", "amplitude", "phase"});
    if (!arr[i].contains("k") || !arr[i]["k"].is_array()) fail(p + ".k", "expected an integer array");
    FrequencyComponent t;
    for (std::size_t a = 0; a < arr[i]["k"].size(); ++a) {
      const std::int64_t v = integer(arr[i]["k"][a], p + ".k[" + std::to_string(a) + "]");
      if (std::abs(v) > 1'000'000) fail(p + ".k", "entry too large");
      t.k.push_back(int(v));
    }
    if (t.k.size() != std::size_t(n)) fail(p + ".k", "length must equal dimension " + std::to_string(n));
    t.amplitude = opt_number(arr[i], "amplitude", p, 1.0);
    t.phase = opt_number(arr[i], "phase", p, 0.0);
    terms.push_back(std::move(t));
  }
  if (j.contains("constant")) terms.push_back({IntVec(std::size_t(n), 0), number(j["constant"], join(path, "constant")), 0.0});
  return PeriodicFunction(int(n), std::move(terms));
}

EmbeddingFrame frame_from_json(const json& j, const std::string& path) {
  check_keys(j, path, {"N", "n", "basis_raw", "shift"});
  if (!j.contains("basis_raw") || !j["basis_raw"].is_array()) fail(join(path, "basis_raw"), "expected an array of vectors");
  std::vector<Vec> raw;
  for (std::size_t i = 0; i < j["basis_raw"].size(); ++i) {
    raw.push_back(vec(j["basis_raw"][i], join(path, "basis_raw") + "[" + std::to_string(i) + "]"));
  }
  if (raw.empty()) fail(join(path, "basis_raw"), "needs at least one vector");
  const std::size_t N = raw[0].size();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != N) fail(join(path, "basis_raw") + "[" + std::to_string(i) + "]", "length mismatch");
  }
  Vec shift = j.contains("shift") ? vec(j["shift"], join(path, "shift")) : Vec(N, 0.0);
  if (shift.size() != N) fail(join(path, "shift"), "length must equal N = " + std::to_string(N));
  if (j.contains("N") && integer(j["N"], join(path, "N")) != std::int64_t(N)) fail(join(path, "N"), "does not match basis_raw");
  if (j.contains("n") && integer(j["n"], join(path, "n")) != std::int64_t(raw.size())) fail(join(path, "n"), "does not match basis_raw");
  if (raw.size() > 3) fail(join(path, "n"), "planes of dimension above 3 are not supported");
  try {
    return make_frame(std::move(raw), std::move(shift));
  } catch (const InputError& e) {
    fail(join(path, "basis_raw"), e.what());
  }
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "", {"task", "potential", "frame", "level", "levels", "scales", "step_rule", "shift_samples",
                     "level_grid", "refinements", "seed", "vertex_budget", "check", "interior_levels", "tolerance",
                     "transfer_trials", "output"});
  RunConfig cfg;
  if (!j.contains("task")) fail("task", "is required");
  cfg.task = parse_task(string(j["task"], "task"));

  if (!j.contains("potential")) fail("potential", "is required");
  json pot = j["potential"];
  std::string pot_path = "potential";
  if (pot.is_object() && pot.contains("file")) {
    check_keys(pot, pot_path, {"file"});
    pot = read_json_file(base_dir / string(pot["file"], "potential.file"), "potential.file");
    pot_path = "potential.file";
  }
  const bool superposition = pot.is_object() && pot.contains("waves");
  if (superposition) {
    check_keys(pot, pot_path, {"waves"});
    const auto waves = waves_from_json(pot["waves"], pot_path + ".waves");
    SuperpositionEmbedding se;
    try {
      se = from_superposition(waves);
    } catch (const InputError& e) {
      fail(pot_path + ".waves", e.what());
    }
    if (j.contains("frame")) fail("frame", "not allowed with a superposition potential (the waves fix the plane)");
    cfg.potential = se.potential;
    cfg.frame = se.frame;
    cfg.potential_json = waves_to_json(waves);
  } else {
    try {
      cfg.potential = potential_from_json(pot, pot_path);
    } catch (const InputError& e) {
      const std::string what = e.what();
      if (what.rfind("config.", 0) == 0) throw;
      fail(pot_path, what);
    }
    cfg.potential_json = canonical_terms(cfg.potential);
    const int N = cfg.potential.dimension();
    if (j.contains("frame")) {
      json fr = j["frame"];
      std::string fr_path = "frame";
      if (fr.is_object() && fr.contains("file")) {
        check_keys(fr, fr_path, {"file"});
        fr = read_json_file(base_dir / string(fr["file"], "frame.file"), "frame.file");
        fr_path = "frame.file";
      }
      cfg.frame = frame_from_json(fr, fr_path);
      if (cfg.frame.ambient_dim() != N) fail(fr_path, "ambient dimension differs from the potential's");
    } else if (N == 2 || (N == 3 && cfg.task == Task::kNdscan)) {
      cfg.frame = identity_frame(N, N);
    } else {
      fail("frame", "is required unless the potential has dimension 2 (or 3 for ndscan)");
    }
  }
  cfg.frame_json = frame_to_json(cfg.frame);

  if (j.contains("level")) cfg.level = number(j["level"], "level");
  if (j.contains("levels")) {
    if (j["levels"].is_string()) {
      cfg.levels = parse_level_range(j["levels"].get<std::string>());
    } else {
      check_keys(j["levels"], "levels", {"lo", "hi", "count"});
      LevelRange r;
      if (!j["levels"].contains("lo") || !j["levels"].contains("hi") || !j["levels"].contains("count")) {
        fail("levels", "needs lo, hi and count");
      }
      r.lo = number(j["levels"]["lo"], "levels.lo");
      r.hi = number(j["levels"]["hi"], "levels.hi");
      r.count = positive_int(j["levels"]["count"], "levels.count");
      if (r.hi < r.lo) fail("levels.hi", "must not be below lo");
      cfg.levels = r;
    }
  }
  if (j.contains("scales")) {
    cfg.scales = vec(j["scales"], "scales");
    if (cfg.scales.empty()) fail("scales", "must not be empty");
    for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
      if (!(cfg.scales[i] > 0.0)) fail("scales", "entries must be positive");
      if (i > 0 && !(cfg.scales[i] > cfg.scales[i - 1])) fail("scales", "must be strictly increasing");
    }
  }
  if (j.contains("step_rule")) {
    check_keys(j["step_rule"], "step_rule", {"period_fraction", "level_tol"});
    cfg.step_rule.period_fraction = opt_number(j["step_rule"], "period_fraction", "step_rule", 0.02);
    cfg.step_rule.level_tol = opt_number(j["step_rule"], "level_tol", "step_rule", 0.5);
    if (!(cfg.step_rule.period_fraction > 0.0)) fail("step_rule.period_fraction", "must be positive");
    if (!(cfg.step_rule.level_tol > 0.0)) fail("step_rule.level_tol", "must be positive");
  } else if (cfg.frame.dim() == 3) {
    cfg.step_rule = NdParams{}.step_rule;
  }
  if (j.contains("shift_samples")) cfg.shift_samples = positive_int(j["shift_samples"], "shift_samples");
  if (j.contains("level_grid")) cfg.level_grid = positive_int(j["level_grid"], "level_grid");
  if (j.contains("refinements")) cfg.refinements = positive_int(j["refinements"], "refinements");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
      fail("seed", "expected a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("vertex_budget")) {
    const std::int64_t b = integer(j["vertex_budget"], "vertex_budget");
    if (b < 16) fail("vertex_budget", "must be at least 16");
    cfg.vertex_budget = std::uint64_t(b);
  }
  if (j.contains("check")) {
    const std::string s = string(j["check"], "check");
    bool found = false;
    for (CheckKind k : {CheckKind::kTheorem21, CheckKind::kTheorem22, CheckKind::kTransfer, CheckKind::kDiameter}) {
      if (to_string(k) == s) cfg.check = k, found = true;
    }
    if (!found) fail("check", "expected theorem21, theorem22, transfer or diameter");
  }
  if (j.contains("interior_levels")) cfg.interior_levels = positive_int(j["interior_levels"], "interior_levels");
  if (j.contains("tolerance")) cfg.tolerance = number(j["tolerance"], "tolerance");
  if (j.contains("transfer_trials")) cfg.transfer_trials = positive_int(j["transfer_trials"], "transfer_trials");
  if (j.contains("output")) {
    check_keys(j["output"], "output", {"dir", "format"});
    if (j["output"].contains("dir")) cfg.out_dir = base_dir / string(j["output"]["dir"], "output.dir");
    if (j["output"].contains("format")) {
      try {
        cfg.format = parse_format(string(j["output"]["format"], "output.format"));
      } catch (const InputError& e) {
        fail("output.format", e.what());
      }
    }
  }

  const int n = cfg.frame.dim();
  if (cfg.task == Task::kNdscan) {
    if (n != 3) fail("frame", "ndscan needs a 3-dimensional frame");
  } else if (n == 3) {
    const bool nd_ok = cfg.task == Task::kSweep || cfg.task == Task::kClassify || cfg.task == Task::kInterval ||
                       (cfg.task == Task::kCheck && (cfg.check == CheckKind::kTheorem21 || cfg.check == CheckKind::kDiameter));
    if (!nd_ok) fail("frame", "task " + to_string(cfg.task) + " needs a 2-dimensional frame");
  } else if (n != 2) {
    fail("frame", "planes must have dimension 2 or 3");
  }

  if ((cfg.task == Task::kTrace || cfg.task == Task::kPlot || cfg.task == Task::kClassify) && !cfg.level) {
    fail("level", "is required for task " + to_string(cfg.task));
  }
  if (cfg.task == Task::kCheck && cfg.check == CheckKind::kDiameter && !cfg.level) {
    fail("level", "is required for the diameter check");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

std::vector<double> RunConfig::effective_scales() const {
  if (!scales.empty()) return scales;
  if (frame.dim() == 3) return NdParams{}.scales;
  switch (task) {
    case Task::kInterval: return IntervalParams{}.scales;
    case Task::kSweep:
    case Task::kCheck: return sweep_trace_params().scales;
    case Task::kNdscan: return NdParams{}.scales;
    default: return TraceParams{}.scales;
  }
}

int RunConfig::effective_shifts() const {
  if (shift_samples > 0) return shift_samples;
  if (task == Task::kInterval) return frame.dim() == 3 ? NdIntervalParams{}.shift_samples : IntervalParams{}.shift_samples;
  return frame.dim() == 3 ? 4 : 8;
}

TraceParams RunConfig::trace_params() const {
  TraceParams p;
  p.scales = effective_scales();
  p.step_rule = step_rule;
  p.vertex_budget = vertex_budget;
  return p;
}

json canonical_json(const RunConfig& cfg) {
  json j;
  j["task"] = to_string(cfg.task);
  j["potential"] = cfg.potential_json;
  j["frame"] = cfg.frame_json;
  j["level"] = cfg.level ? json(*cfg.level) : json(nullptr);
  j["levels"] = cfg.levels ? json{{"lo", cfg.levels->lo}, {"hi", cfg.levels->hi}, {"count", cfg.levels->count}}
                           : json(nullptr);
  j["scales"] = cfg.effective_scales();
  j["step_rule"] = {{"period_fraction", cfg.step_rule.period_fraction}, {"level_tol", cfg.step_rule.level_tol}};
  j["shift_samples"] = cfg.effective_shifts();
  j["level_grid"] = cfg.level_grid;
  j["refinements"] = cfg.refinements;
  j["seed"] = cfg.seed;
  j["vertex_budget"] = cfg.vertex_budget;
  if (cfg.task == Task::kCheck) {
    j["check"] = to_string(cfg.check);
    j["interior_levels"] = cfg.interior_levels;
    j["tolerance"] = cfg.tolerance;
    j["transfer_trials"] = cfg.transfer_trials;
  }
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(canonical_json(cfg).dump()); }

}  // namespace novikov
