#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_paths.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const auto out_file = fs::temp_directory_path() / "nkgov_cli_test.out";
  const std::string cmd = std::string(NKGOV_CLI) + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string urllc(const char* file) { return (test_paths::urllc() / file).string(); }

}  // namespace

TEST_CASE("govern exit codes") {
  const std::string topo = " --topology " + urllc("topology.json");
  auto r = cli("govern" + topo + " --plan " + urllc("safe_plan.json") + " --now 1005");
  CHECK(r.code == 0);
  CHECK(r.out.find("ACCEPTED") != std::string::npos);

  r = cli("govern" + topo + " --plan " + urllc("restart_plan.json") + " --now 1005");
  CHECK(r.code == 1);
  CHECK(r.out.find("FunctionCapacityShockShape") != std::string::npos);

  r = cli("govern" + topo + " --plan " + urllc("ghost_plan.json") + " --now 1005 --json");
  CHECK(r.code == 1);
  CHECK(r.out.find("\"Hallucination\"") != std::string::npos);

  r = cli("govern" + topo + " --plan " + urllc("safe_plan.json") + " --now 1030");
  CHECK(r.code == 1);
  CHECK(r.out.find("StaleState") != std::string::npos);

  r = cli("govern" + topo + " --plan /nonexistent/plan.json");
  CHECK(r.code == 2);
  r = cli("govern --bogus");
  CHECK(r.code == 2);
}

TEST_CASE("validate reports corpus violations") {
  const auto dir = fs::temp_directory_path() / "nkgov_cli_validate";
  fs::create_directories(dir);
  const auto topo = dir / "direct.json";
  std::ofstream(topo) << R"({"nodes": [
    {"id": "amf", "class": "AMFFunction", "status": "ACTIVE",
     "attributes": {"loadPercent": 10, "latencyMs": 1, "plannedCapacity": 100}, "lastUpdated": 0},
    {"id": "upf", "class": "UPFFunction", "status": "ACTIVE",
     "attributes": {"loadPercent": 10, "latencyMs": 1, "plannedCapacity": 100}, "lastUpdated": 0}],
    "edges": [{"src": "amf", "dst": "upf", "iface": "N11", "timestamp": 0}]})";
  auto r = cli("validate --topology " + topo.string() + " --reference " + topo.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("conforms: false") != std::string::npos);
  CHECK(r.out.find("amf -[N11]-> upf") != std::string::npos);

  r = cli("validate --topology " + urllc("topology.json"));
  CHECK(r.code == 2);  // delta shapes need a reference
  r = cli("validate --topology " + urllc("topology.json") + " --reference " + urllc("topology.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("conforms: true") != std::string::npos);
}

TEST_CASE("topo-gen writes a deterministic topology") {
  const auto dir = fs::temp_directory_path() / "nkgov_cli_topo";
  fs::create_directories(dir);
  const auto a = dir / "a.json";
  const auto b = dir / "b.json";
  auto r = cli("topo-gen --nodes 120 --seed 3 --out " + a.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("wrote 120 nodes") != std::string::npos);
  REQUIRE(cli("topo-gen --nodes 120 --seed 3 --out " + b.string()).code == 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(cli("topo-gen --nodes 5").code == 2);
}

TEST_CASE("bench-scale needs a size list") {
  CHECK(cli("bench-scale").code == 2);
  CHECK(cli("bench-scale --sizes 450,1000").code == 2);
}
