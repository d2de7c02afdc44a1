// novikov: batch runner for level-line experiments on quasiperiodic
// functions. Each subcommand is a task; flags override the JSON config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "novikov/errors.hpp"
#include "novikov/run.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::string potential;
  std::string frame;
  std::string out;
  std::string scales;
  std::string levels;
  std::string format;
  std::string check;
  std::uint64_t seed = 0;
  int shifts = 0;
  double level = 0.0;
};

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw novikov::InputError("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw novikov::InputError("config: " + path + ": " + e.what());
  }
}

json parse_scales(const std::string& s) {
  json arr = json::array();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      arr.push_back(v);
    } catch (const std::logic_error&) {
      throw novikov::InputError("scales: expected comma-separated numbers, got '" + s + "'");
    }
  }
  return arr;
}

bool given(const CLI::App& sub, const std::string& name) {
  const CLI::Option* o = sub.get_option_no_throw(name);
  return o != nullptr && o->count() > 0;
}

int run_task(const std::string& task, const Flags& f, const CLI::App& sub) {
  json j = f.config.empty() ? json::object() : read_config(f.config);
  const fs::path base = f.config.empty() ? fs::current_path() : fs::absolute(f.config).parent_path();
  j["task"] = task;
  if (given(sub, "--potential")) j["potential"] = {{"file", fs::absolute(f.potential).string()}};
  if (given(sub, "--frame")) j["frame"] = {{"file", fs::absolute(f.frame).string()}};
  if (given(sub, "--seed")) j["seed"] = f.seed;
  if (given(sub, "--scales")) j["scales"] = parse_scales(f.scales);
  if (given(sub, "--shifts")) j["shift_samples"] = f.shifts;
  if (given(sub, "--level")) j["level"] = f.level;
  if (given(sub, "--levels")) j["levels"] = f.levels;
  if (given(sub, "--check")) j["check"] = f.check;
  if (given(sub, "--out")) j["output"]["dir"] = fs::absolute(f.out).string();
  if (given(sub, "--format")) j["output"]["format"] = f.format;

  const novikov::RunConfig cfg = novikov::parse_config(j, base);
  const novikov::RunReport rep = novikov::run(cfg);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "config_hash " << rep.config_hash << "\n";
  for (const auto& o : rep.outputs) std::cout << "wrote " << (cfg.out_dir / o).string() << "\n";
  if (rep.violations > 0) std::cout << "violations " << rep.violations << "\n";
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level lines of quasiperiodic functions: traces, critical intervals, situation sweeps and checks"};
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> tasks{
      {"trace", "multiscale trace of one level: report, component CSV, SVG"},
      {"classify", "situation label of one plane at one level"},
      {"interval", "critical interval brackets over sampled shifts"},
      {"sweep", "situation labels over levels x shifts"},
      {"ndscan", "box scans and interval for 3-dimensional sections"},
      {"check", "theorem checkers (theorem21, theorem22, transfer, diameter)"},
      {"plot", "SVG of the level lines at the largest scale"},
  };
  for (const auto& [name, help] : tasks) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON run config")->check(CLI::ExistingFile);
    sub->add_option("--potential", flags.potential, "potential file (terms or waves)")->check(CLI::ExistingFile);
    sub->add_option("--frame", flags.frame, "frame file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "shift sequence seed");
    sub->add_option("--scales", flags.scales, "comma-separated window half-sizes in period-scale units");
    sub->add_option("--shifts", flags.shifts, "number of sampled shifts")->check(CLI::PositiveNumber);
    sub->add_option("--level", flags.level, "level c");
    sub->add_option("--levels", flags.levels, "level range lo:hi:count");
    sub->add_option("--format", flags.format, "write only this format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    if (name == "check") sub->add_option("--check", flags.check, "which check to run");
    sub->callback([&, name = name, sub] {
      int code = novikov::kExitOk;
      try {
        code = run_task(name, flags, *sub);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = novikov::exit_code_for(e);
      }
      throw CLI::RuntimeError(code);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : novikov::kExitInputError;
  }
  return novikov::kExitOk;
}
