#pragma once

#include <exception>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "novikov/config.hpp"

namespace novikov {

/// Process exit codes. A theorem check that ran to completion but found
/// violations is a finding, not a failure, and has its own code.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInputError = 2,
  kExitResourceError = 3,
  kExitViolation = 4,
};

struct RunReport {
  std::string config_hash;
  Task task = Task::kTrace;
  /// Wall-clock seconds per phase.
  std::map<std::string, double> timings;
  /// File names written under the output directory, in write order.
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  int violations = 0;

  int exit_code() const { return violations > 0 ? kExitViolation : kExitOk; }
};

nlohmann::json to_json(const RunReport& r);

/// Payload files of a run, name -> content. Deterministic for a fixed
/// config; run() writes them after the computation finishes.
struct RunOutputs {
  std::vector<std::pair<std::string, std::string>> files;
  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

/// Computes the task without touching the file system.
RunReport execute(const RunConfig& cfg, RunOutputs& outputs);

/// execute() plus writing the payloads, config.json (canonical config) and
/// run.json (this report, including timings) to cfg.out_dir. Throws
/// InputError / ResourceError on operational failures.
RunReport run(const RunConfig& cfg);

/// Exit code for an exception escaping run().
int exit_code_for(const std::exception& e);

/// Default levels for sweeps: `count` levels evenly spaced strictly inside
/// the estimated range of F.
std::vector<double> auto_levels(const PeriodicFunction& F, int count = 13);

}  // namespace novikov
