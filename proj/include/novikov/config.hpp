#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "novikov/critical.hpp"
#include "novikov/embedding.hpp"
#include "novikov/ndscan.hpp"
#include "novikov/potential.hpp"
#include "novikov/tracer2d.hpp"

namespace novikov {

enum class Task { kTrace, kClassify, kInterval, kSweep, kNdscan, kCheck, kPlot };
std::string to_string(Task t);
Task parse_task(const std::string& s);

enum class CheckKind { kTheorem21, kTheorem22, kTransfer, kDiameter };
std::string to_string(CheckKind k);

/// Output selection; kAll writes every format the task produces.
enum class OutputFormat { kAll, kCsv, kJson, kSvg };
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

/// `count` levels evenly spaced from lo to hi inclusive (count 1 gives lo).
struct LevelRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  std::vector<double> values() const;
};

/// Parses "lo:hi:count". Throws InputError.
LevelRange parse_level_range(const std::string& s);

struct RunConfig {
  Task task = Task::kTrace;

  /// Potential and frame as loaded; the JSON members hold the resolved
  /// (file-free) descriptions that enter the hash.
  PeriodicFunction potential;
  EmbeddingFrame frame;
  nlohmann::json potential_json;
  nlohmann::json frame_json;

  std::optional<double> level;
  std::optional<LevelRange> levels;
  /// Empty means the task default.
  std::vector<double> scales;
  StepRule step_rule;
  /// 0 means the task default.
  int shift_samples = 0;
  int level_grid = 16;
  int refinements = 10;
  std::uint64_t seed = 0;
  std::uint64_t vertex_budget = kDefaultVertexBudget;

  CheckKind check = CheckKind::kTheorem21;
  int interior_levels = 9;
  /// Checker tolerance (theorem21) or margin delta (theorem22); negative
  /// means twice the bracket width.
  double tolerance = -1.0;
  /// Transfer check: number of random admissible triples.
  int transfer_trials = 20;

  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::kAll;

  /// Effective values after task defaults.
  std::vector<double> effective_scales() const;
  int effective_shifts() const;
  TraceParams trace_params() const;
};

/// Validates a JSON config. Relative file paths resolve against `base_dir`.
/// Errors are InputError with the offending field path.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Resolved config with every default filled in. The output directory and
/// format are left out: they do not affect payloads.
nlohmann::json canonical_json(const RunConfig& cfg);

/// FNV-1a 64 of the compact canonical dump, 16 hex digits.
std::string config_hash(const RunConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

/// Potential files: {"dimension", "terms": [{"k", "amplitude", "phase"}]}
/// or {"waves": [{"theta_deg", "period", "amplitude", "phase"}]}. Frame
/// files: {"N", "n", "basis_raw", "shift"}.
PeriodicFunction potential_from_json(const nlohmann::json& j, const std::string& path);
EmbeddingFrame frame_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace novikov
