#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nkgov/engine.hpp"
#include "nkgov/harness/agents.hpp"
#include "nkgov/harness/scenarios.hpp"
#include "nkgov/harness/topology_gen.hpp"

namespace nkgov::harness {

/// Component ablations. `membership` and `policy` switch off the engine
/// gates; `agent` swaps in the weaker fault profile.
struct Ablation {
  bool membership = false;
  bool policy = false;
  bool agent = false;

  bool any() const { return membership || policy || agent; }
  /// "full", or the disabled parts joined by '+', e.g. "nkg+shacl".
  std::string label() const;
};

/// Parses "nkg", "shacl", "tslam" (comma separated) into an Ablation.
Ablation parse_ablation(std::string_view text);

struct RunMetrics {
  int total = 0;
  int remediated = 0;
  int accepted = 0;
  int rejected_policy = 0;
  int rejected_hallucination = 0;
  int rejected_stale = 0;
  int rejected_agent = 0;
  /// New (shape, focus) violations after commit plus executed ghost actions.
  int escaped_violations = 0;
  int escaped_topological = 0;
  int executed_ghost_actions = 0;
  int injected_ghosts = 0;
  int detected_ghosts = 0;
  std::vector<double> agent_ms;
  std::vector<double> validation_ms;
  std::vector<std::size_t> subgraph_k;

  double remediation_rate() const { return total ? double(remediated) / total : 0.0; }
};

/// Runs `scenarios` in order against one committed lineage starting from
/// `topology`. Per scenario the clock advances by 30 s, telemetry is
/// ingested (the StateConsistency target is withheld), the fault is applied
/// and the intent governed. Unremediated or unsafe outcomes are rolled back
/// to the pre-fault state, standing in for operator repair.
RunMetrics run_suite(const Graph& topology, const std::vector<Scenario>& scenarios, Agent& agent,
                     const PolicySet& policies, const EngineConfig& engine);

struct SuiteConfig {
  TopologySpec topology;
  ScenarioCounts counts = default_counts(500);
  MockAgentConfig agent;
  MockAgentConfig weak_agent{0.25, 0.35, 7};
  Ablation ablation;
  EngineConfig engine;
  std::uint64_t seed = 1;
};

/// JSON: {"topology":{"nodes","edgeFactor","seed"}, "counts":[4 ints] or
/// "scenarios": total, "agent":{"ghostProb","ontologyProb","seed"},
/// "weakAgent":{...}, "ablate":"nkg,shacl", "seed"}. Missing keys keep their
/// defaults.
SuiteConfig parse_suite_config(std::string_view text, std::string_view source = "<suite>");

/// Builds the topology, scenarios and agent the config describes and runs the
/// suite with gates set from the ablation.
RunMetrics run_suite(const SuiteConfig& config, const PolicySet& policies);

std::string metrics_to_json(const RunMetrics& m, const SuiteConfig& config, int indent = 2);
std::string metrics_table(const RunMetrics& m, const SuiteConfig& config);

double median(std::vector<double> values);

}  // namespace nkgov::harness
