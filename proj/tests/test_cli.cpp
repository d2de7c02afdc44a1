#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = NOVIKOV_CLI;
const fs::path kPotentials = NOVIKOV_POTENTIALS;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "novikov_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string potential(const std::string& name) { return "--potential " + (kPotentials / (name + ".json")).string(); }

}  // namespace

TEST_CASE("trace writes every format and reruns byte for byte") {
  const fs::path a = scratch("trace_a"), b = scratch("trace_b");
  const std::string args = "trace " + potential("separable") + " --level 0.3 --scales 2,4,8 --out ";
  REQUIRE(run(args + a.string()) == 0);
  REQUIRE(run(args + b.string()) == 0);
  for (const char* f : {"config.json", "trace.json", "components.csv", "scales.csv", "trace.svg", "run.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(a / f));
  }
  for (const char* f : {"config.json", "trace.json", "components.csv", "scales.csv", "trace.svg"}) {
    CAPTURE(f);
    const std::string x = slurp(a / f);
    CHECK(!x.empty());
    CHECK(x == slurp(b / f));
    CHECK(x.find('\r') == std::string::npos);
    CHECK(x.back() == '\n');
  }
  const json report = json::parse(slurp(a / "trace.json"));
  CHECK(report["report"]["verdict"] == "closed-bounded");
  const json manifest = json::parse(slurp(a / "run.json"));
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(slurp(a / "components.csv").rfind("id,closed,kind,diameter,touches_boundary,vertex_count\n", 0) == 0);
}

TEST_CASE("format selection") {
  const fs::path d = scratch("format");
  REQUIRE(run("trace " + potential("separable") + " --level 0.3 --scales 2,4,8 --format csv --out " + d.string()) == 0);
  CHECK(fs::exists(d / "components.csv"));
  CHECK(!fs::exists(d / "trace.json"));
  CHECK(!fs::exists(d / "trace.svg"));
  CHECK(run("interval " + potential("separable") + " --format svg --out " + d.string()) == 2);
}

TEST_CASE("config file and flag overrides") {
  const fs::path d = scratch("config");
  fs::create_directories(d);
  {
    std::ofstream out(d / "run.json");
    out << json{{"task", "classify"},
                {"potential", {{"file", (kPotentials / "single_cosine.json").string()}}},
                {"level", 0.0},
                {"scales", {2, 4, 8}}}
               .dump();
  }
  REQUIRE(run("classify --config " + (d / "run.json").string() + " --level 0.1 --out " + (d / "o").string()) == 0);
  const json cfg = json::parse(slurp(d / "o" / "config.json"));
  CHECK(cfg["level"].get<double>() == 0.1);
  const json label = json::parse(slurp(d / "o" / "classify.json"));
  CHECK(label["situation"]["label"] == "A");
}

TEST_CASE("plot writes only the svg") {
  const fs::path d = scratch("plot");
  REQUIRE(run("plot " + potential("single_cosine") + " --level 0.2 --scales 2 --out " + d.string()) == 0);
  const std::string svg = slurp(d / "plot.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("class=\"spanning\" d=\"M") != std::string::npos);
  CHECK(!fs::exists(d / "components.csv"));
}

TEST_CASE("exit codes") {
  const fs::path d = scratch("codes");
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);
  CHECK(run("trace --bogus") == 2);
  CHECK(run("trace " + potential("separable") + " --out " + d.string()) == 2);  // no level
  CHECK(run("sweep " + potential("separable") + " --levels 1:0:3 --out " + d.string()) == 2);
  CHECK(run("trace --config " + (d / "absent.json").string()) == 2);
  CHECK(run("check --check diameter " + potential("single_cosine") + " --level 0.2 --scales 2,4,8 --out " +
            d.string()) == 2);
  // Windows smaller than the ovals: the diameter estimate cannot settle.
  CHECK(run("check --check diameter " + potential("separable") + " --level 0.05 --shifts 1 --scales 0.3,0.6,1.2 --out " +
            d.string()) == 4);
  CHECK(run("trace " + potential("separable") + " --level 0.3 --scales 2,4,8 --out /dev/null/x") == 3);
}
