#include "nkgov/harness/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json_support.hpp"
#include "nkgov/error.hpp"

namespace nkgov::harness {

using nkgov::detail::json;
using ojson = nlohmann::ordered_json;

namespace {

using Key = std::pair<std::string, NodeId>;

std::set<Key> keys(const ValidationReport& r) {
  std::set<Key> out;
  for (const auto& v : r.violations) out.emplace(v.shape_id, v.focus);
  return out;
}

int ghost_actions(const Plan& plan, const Graph& g) {
  int n = 0;
  for (const auto& a : plan.actions) {
    const auto ids = targets(a);
    if (std::any_of(ids.begin(), ids.end(), [&](const NodeId& id) { return !g.contains_active(id); })) ++n;
  }
  return n;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (pos - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

MockAgentConfig agent_config(const json& j, MockAgentConfig base, const std::string& ctx) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, ctx + ": agent must be an object");
  if (j.contains("ghostProb")) base.ghost_prob = nkgov::detail::get_field<double>(j, "ghostProb", ctx);
  if (j.contains("ontologyProb")) base.ontology_prob = nkgov::detail::get_field<double>(j, "ontologyProb", ctx);
  if (j.contains("seed")) base.seed = nkgov::detail::get_field<std::uint64_t>(j, "seed", ctx);
  return base;
}

}  // namespace

std::string Ablation::label() const {
  std::string out;
  auto add = [&](const char* s) { out += (out.empty() ? "" : "+") + std::string(s); };
  if (membership) add("nkg");
  if (policy) add("shacl");
  if (agent) add("tslam");
  return out.empty() ? "full" : out;
}

Ablation parse_ablation(std::string_view text) {
  Ablation a;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (item == "nkg") a.membership = true;
    else if (item == "shacl") a.policy = true;
    else if (item == "tslam") a.agent = true;
    else if (item != "none" && !item.empty())
      throw Error(ErrorCode::InvalidSpec, "unknown ablation '" + item + "' (nkg, shacl, tslam)");
  }
  return a;
}

double median(std::vector<double> values) { return percentile(std::move(values), 0.5); }

RunMetrics run_suite(const Graph& topology, const std::vector<Scenario>& scenarios, Agent& agent,
                     const PolicySet& policies, const EngineConfig& engine_config) {
  EngineConfig cfg = engine_config;
  cfg.post_commit_check = true;
  GovernanceEngine engine(cfg);

  RunMetrics m;
  Graph committed = topology.snapshot();
  std::int64_t now = committed.clock();
  for (const auto& s : scenarios) {
    now += 30;
    const bool withhold = s.kind == ScenarioKind::StateConsistency;
    ingest_telemetry(committed, topology, now, withhold ? &s.target : nullptr);
    const Graph pre_fault = committed.snapshot();
    apply_fault(committed, s);
    const Graph faulted = committed.snapshot();
    const auto before = keys(validate(faulted, policies, {now, &faulted, std::nullopt}));

    auto r = engine.govern(s.intent, committed, policies, agent, now);
    ++m.total;
    m.agent_ms.push_back(r.agent_ms);
    m.validation_ms.push_back(r.validation_ms);
    m.subgraph_k.push_back(r.subgraph_k);

    const int ghosts = ghost_actions(r.plan, faulted);
    if (ghosts > 0) ++m.injected_ghosts;
    int escaped = 0;
    switch (r.verdict.kind) {
      case VerdictKind::None: ++m.accepted; break;
      case VerdictKind::PolicyViolation: ++m.rejected_policy; break;
      case VerdictKind::Hallucination:
        ++m.rejected_hallucination;
        ++m.detected_ghosts;
        break;
      case VerdictKind::StaleState: ++m.rejected_stale; break;
      case VerdictKind::AgentFailure: ++m.rejected_agent; break;
    }
    if (r.verdict.accepted()) {
      m.executed_ghost_actions += ghosts;
      escaped += ghosts;
      for (const auto& v : r.post_commit.violations) {
        if (before.contains({v.shape_id, v.focus})) continue;
        ++escaped;
        if (policies.shape(v.shape_id).family() == ConstraintFamily::Topological) ++m.escaped_topological;
      }
    }
    m.escaped_violations += escaped;

    const bool fixed = r.verdict.accepted() && escaped == 0 && fault_cleared(committed, s, now);
    if (fixed) {
      ++m.remediated;
    } else {
      committed = pre_fault;
    }
  }
  return m;
}

SuiteConfig parse_suite_config(std::string_view text, std::string_view source) {
  const std::string src(source);
  SuiteConfig c;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return c;
  const json doc = nkgov::detail::parse_json(text, source);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, src + ": not an object");
  using nkgov::detail::get_field;

  if (auto t = doc.find("topology"); t != doc.end()) {
    if (t->contains("nodes")) c.topology.n_nodes = get_field<int>(*t, "nodes", src);
    if (t->contains("edgeFactor")) c.topology.edge_factor = get_field<double>(*t, "edgeFactor", src);
    if (t->contains("seed")) c.topology.seed = get_field<std::uint64_t>(*t, "seed", src);
  }
  if (doc.contains("counts")) {
    const auto v = get_field<std::vector<int>>(doc, "counts", src);
    if (v.size() != 4) throw Error(ErrorCode::InvalidCounts, src + ": counts needs 4 entries");
    std::copy(v.begin(), v.end(), c.counts.begin());
  } else if (doc.contains("scenarios")) {
    c.counts = default_counts(get_field<int>(doc, "scenarios", src));
  }
  if (doc.contains("agent")) c.agent = agent_config(doc["agent"], c.agent, src);
  if (doc.contains("weakAgent")) c.weak_agent = agent_config(doc["weakAgent"], c.weak_agent, src);
  if (doc.contains("ablate")) c.ablation = parse_ablation(get_field<std::string>(doc, "ablate", src));
  if (doc.contains("seed")) c.seed = get_field<std::uint64_t>(doc, "seed", src);
  c.topology.check();
  c.agent.check();
  c.weak_agent.check();
  return c;
}

RunMetrics run_suite(const SuiteConfig& config, const PolicySet& policies) {
  const Graph topology = generate_topology(config.topology);
  const auto scenarios = generate_scenarios(config.counts, topology, config.seed);
  MockAgentConfig agent_cfg = config.ablation.agent ? config.weak_agent : config.agent;
  agent_cfg.seed ^= config.seed * 0x9E3779B97F4A7C15ull;
  MockAgent agent(agent_cfg, decommissioned_ids(topology));
  EngineConfig engine = config.engine;
  engine.membership_gate = !config.ablation.membership;
  engine.policy_gate = !config.ablation.policy;
  return run_suite(topology, scenarios, agent, policies, engine);
}

std::string metrics_to_json(const RunMetrics& m, const SuiteConfig& c, int indent) {
  std::vector<double> k(m.subgraph_k.begin(), m.subgraph_k.end());
  ojson j;
  j["configuration"] = c.ablation.label();
  j["seed"] = c.seed;
  j["nodes"] = c.topology.n_nodes;
  j["total"] = m.total;
  j["remediated"] = m.remediated;
  j["remediationRate"] = m.remediation_rate();
  j["accepted"] = m.accepted;
  j["rejected"] = {{"policy", m.rejected_policy},
                   {"hallucination", m.rejected_hallucination},
                   {"stale", m.rejected_stale},
                   {"agent", m.rejected_agent}};
  j["escapedViolations"] = m.escaped_violations;
  j["escapedTopological"] = m.escaped_topological;
  j["executedGhostActions"] = m.executed_ghost_actions;
  j["injectedGhosts"] = m.injected_ghosts;
  j["detectedGhosts"] = m.detected_ghosts;
  j["medianK"] = median(k);
  j["agentMsMedian"] = median(m.agent_ms);
  j["validationMsMedian"] = median(m.validation_ms);
  j["validationMsP95"] = percentile(m.validation_ms, 0.95);
  return j.dump(indent) + "\n";
}

std::string metrics_table(const RunMetrics& m, const SuiteConfig& c) {
  std::vector<double> k(m.subgraph_k.begin(), m.subgraph_k.end());
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "configuration        %s (seed %llu, %d nodes)\n"
                "scenarios            %d\n"
                "remediated           %d (%.1f%%)\n"
                "rejected             policy %d, hallucination %d, stale %d, agent %d\n"
                "ghosts               injected %d, detected %d, executed %d\n"
                "escaped violations   %d (topological %d)\n"
                "median k             %.0f\n"
                "validation ms        median %.3f, p95 %.3f\n",
                c.ablation.label().c_str(), static_cast<unsigned long long>(c.seed),
                c.topology.n_nodes, m.total, m.remediated, 100.0 * m.remediation_rate(),
                m.rejected_policy, m.rejected_hallucination, m.rejected_stale, m.rejected_agent,
                m.injected_ghosts, m.detected_ghosts, m.executed_ghost_actions,
                m.escaped_violations, m.escaped_topological, median(k), median(m.validation_ms),
                percentile(m.validation_ms, 0.95));
  return buf;
}

}  // namespace nkgov::harness
