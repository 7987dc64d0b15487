#include <doctest.h>

#include <cmath>

#include "nkgov/error.hpp"
#include "nkgov/harness/scaling.hpp"
#include "nkgov/harness/scenarios.hpp"
#include "nkgov/harness/suite.hpp"
#include "nkgov/harness/topology_gen.hpp"
#include "test_paths.hpp"

using namespace nkgov;
using namespace nkgov::harness;

namespace {

const PolicySet& corpus() {
  static const PolicySet ps = load_policies_file(test_paths::corpus(), ClassHierarchy::standard());
  return ps;
}

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("generated topology matches the requested size and conforms") {
  for (int n : {60, 450, 1000}) {
    CAPTURE(n);
    TopologySpec spec;
    spec.n_nodes = n;
    spec.edge_factor = default_edge_factor(n);
    const Graph g = generate_topology(spec);
    CHECK(static_cast<int>(g.node_count()) == n);
    CHECK(g.edge_count() >= static_cast<std::size_t>(std::lround(spec.edge_factor * n)));
    CHECK(validate(g, corpus(), {0, &g, std::nullopt}).conforms());
  }
  TopologySpec base;
  CHECK(generate_topology(base).edge_count() == 1202);
}

TEST_CASE("topology generation is deterministic per seed") {
  TopologySpec a;
  a.seed = 5;
  TopologySpec b = a;
  b.seed = 6;
  CHECK(graph_hash(generate_topology(a)) == graph_hash(generate_topology(a)));
  CHECK(graph_hash(generate_topology(a)) != graph_hash(generate_topology(b)));
}

TEST_CASE("topology spec checks") {
  TopologySpec s;
  s.n_nodes = 5;
  CHECK(error_of([&] { s.check(); }) == ErrorCode::InvalidSpec);
  s = {};
  s.edge_factor = -1;
  CHECK(error_of([&] { s.check(); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("default scenario mix") {
  CHECK(default_counts(500) == ScenarioCounts{150, 150, 100, 100});
  const auto c = default_counts(37);
  CHECK(c[0] + c[1] + c[2] + c[3] == 37);
  CHECK(error_of([] { generate_scenarios({0, 0, 0, 0}, generate_topology({}), 1); }) ==
        ErrorCode::InvalidCounts);
}

TEST_CASE("scenario faults are visible and the goals round trip") {
  const Graph g = generate_topology({});
  const auto scenarios = generate_scenarios({3, 3, 3, 3}, g, 4);
  CHECK(scenarios.size() == 12);
  for (const auto& s : scenarios) {
    CAPTURE(to_string(s.kind));
    CHECK(kind_of_goal(goal_of(s.kind)) == s.kind);
    CHECK(parse_scenario_kind(to_string(s.kind)) == s.kind);
    Graph work = g.snapshot();
    // Telemetry at 30 s, withholding the target for the state scenario.
    ingest_telemetry(work, g, 30, s.kind == ScenarioKind::StateConsistency ? &s.target : nullptr);
    CHECK(fault_cleared(work, s, 30) != (s.kind == ScenarioKind::StateConsistency));
    REQUIRE(apply_fault(work, s));
    CHECK_FALSE(fault_cleared(work, s, 30));
  }
}

TEST_CASE("power-law fit") {
  const std::vector<std::pair<double, double>> exact = {{1, 2}, {2, 4}, {4, 8}};
  auto f = fit_power_law(exact);
  CHECK(f.exponent == doctest::Approx(1.0));
  CHECK(f.coefficient == doctest::Approx(2.0));

  const std::vector<std::pair<double, double>> cubic = {{1, 0.5}, {3, 13.5}, {10, 500}, {20, 4000}};
  f = fit_power_law(cubic);
  CHECK(f.exponent == doctest::Approx(3.0));
  CHECK(f.coefficient == doctest::Approx(0.5));

  const std::vector<std::pair<double, double>> flat_x = {{3, 1}, {3, 2}, {3, 4}};
  CHECK(error_of([&] { fit_power_law(flat_x); }) == ErrorCode::DegenerateInput);
  const std::vector<std::pair<double, double>> two = {{1, 1}, {2, 2}};
  CHECK(error_of([&] { fit_power_law(two); }) == ErrorCode::DegenerateInput);
  const std::vector<std::pair<double, double>> negative = {{1, 1}, {2, -2}, {3, 3}};
  CHECK(error_of([&] { fit_power_law(negative); }) == ErrorCode::DegenerateInput);
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == doctest::Approx(2.5));
}

TEST_CASE("ablation labels") {
  CHECK(Ablation{}.label() == "full");
  const auto a = parse_ablation("nkg,shacl");
  CHECK(a.membership);
  CHECK(a.policy);
  CHECK_FALSE(a.agent);
  CHECK(a.label() == "nkg+shacl");
  CHECK_THROWS_AS(parse_ablation("everything"), Error);
}

TEST_CASE("suite config parsing") {
  const auto c = parse_suite_config(R"({"topology": {"nodes": 200, "seed": 3}, "scenarios": 40,
    "agent": {"ghostProb": 0.1, "ontologyProb": 0.1, "seed": 9}, "ablate": "tslam", "seed": 4})");
  CHECK(c.topology.n_nodes == 200);
  CHECK(c.topology.seed == 3);
  CHECK(c.counts == default_counts(40));
  CHECK(c.agent.ghost_prob == 0.1);
  CHECK(c.agent.seed == 9);
  CHECK(c.ablation.agent);
  CHECK(c.seed == 4);
  CHECK_THROWS_AS(parse_suite_config(R"({"agent": {"ghostProb": 0.8, "ontologyProb": 0.8}})"), Error);
}

TEST_CASE("small suite: the full engine lets nothing escape") {
  SuiteConfig c;
  c.topology.n_nodes = 200;
  c.counts = default_counts(60);
  c.agent = {0.1, 0.1, 3};
  const auto m = run_suite(c, corpus());
  CHECK(m.total == 60);
  CHECK(m.escaped_violations == 0);
  CHECK(m.executed_ghost_actions == 0);
  CHECK(m.detected_ghosts == m.injected_ghosts);
  CHECK(m.remediated > 0);
  CHECK(m.subgraph_k.size() == static_cast<std::size_t>(m.total));

  c.ablation.membership = true;
  c.ablation.policy = true;
  const auto open = run_suite(c, corpus());
  CHECK(open.escaped_violations > 0);
}

TEST_CASE("scaling needs three sizes") {
  CHECK(error_of([] { run_scaling({450, 1000}, corpus()); }) == ErrorCode::InsufficientSizes);
  CHECK(error_of([] { run_scaling({450, 450, 1000}, corpus()); }) == ErrorCode::InsufficientSizes);
  const auto r = run_scaling({100, 450, 5000}, corpus(), {3, 1, 3});
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].n == 100);
  CHECK(r.rows[2].median_k > 0);
  CHECK(scaling_csv(r).find("# fit") != std::string::npos);
}
