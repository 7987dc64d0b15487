// nkgov: command-line front end for topology generation, validation,
// governed execution and the benchmark harness.
//
// Exit codes: 0 ok, 1 violations / rejection / escaped violations under the
// full engine, 2 usage or input error, 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include "nkgov/engine.hpp"
#include "nkgov/error.hpp"
#include "nkgov/harness/agents.hpp"
#include "nkgov/harness/scaling.hpp"
#include "nkgov/harness/suite.hpp"
#include "nkgov/harness/topology_gen.hpp"
#include "nkgov/policy.hpp"
#include "nkgov/topology_io.hpp"

#ifndef NKGOV_POLICY_DIR
#define NKGOV_POLICY_DIR "data/policies"
#endif

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace nkgov;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

fs::path default_policies() {
  const char* dir = std::getenv("GSPEC_POLICY_DIR");
  return fs::path(dir && *dir ? dir : NKGOV_POLICY_DIR) / "corpus.json";
}

PolicySet policies_for(const std::string& flag, const ClassHierarchy& classes,
                       const EngineConfig& cfg = {}) {
  return load_policies_file(flag.empty() ? default_policies() : fs::path(flag), classes,
                            cfg.policy_defaults());
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

// "mock", "mock:ghost=0.1,onto=0.1,seed=3" or "remedy".
std::unique_ptr<Agent> make_agent(const std::string& spec, const Graph& graph) {
  if (spec == "remedy") return std::make_unique<harness::RemedyAgent>();
  if (spec != "mock" && spec.rfind("mock:", 0) != 0) {
    throw Error(ErrorCode::InvalidSpec, "unknown agent '" + spec + "' (mock[:k=v,...] or remedy)");
  }
  harness::MockAgentConfig cfg;
  std::istringstream in(spec.size() > 5 ? spec.substr(5) : "");
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidSpec, "agent option '" + item + "' needs =");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "ghost") cfg.ghost_prob = std::stod(value);
      else if (key == "onto" || key == "ontology") cfg.ontology_prob = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else throw Error(ErrorCode::InvalidSpec, "unknown agent option '" + key + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidSpec, "bad value for agent option '" + key + "'");
    }
  }
  return std::make_unique<harness::MockAgent>(cfg, harness::decommissioned_ids(graph));
}

ojson verdict_json(const GovernResult& r, const std::string& intent) {
  ojson j;
  j["intent"] = intent;
  j["outcome"] = std::string(to_string(r.verdict.outcome));
  j["kind"] = std::string(to_string(r.verdict.kind));
  j["reason"] = r.verdict.reason;
  j["failedActionIndex"] =
      r.verdict.failed_action_index ? ojson(*r.verdict.failed_action_index) : ojson(nullptr);
  j["actions"] = r.plan.actions.size();
  j["auditRecords"] = r.records.size();
  j["subgraphK"] = r.subgraph_k;
  return j;
}

struct Options {
  bool json = false;

  int nodes = 450;
  double edge_factor = 2.67;
  std::uint64_t seed = 1;
  std::string out;

  std::string topology, policies, reference, plan, agent, intent, audit_out, config, ablate, sizes;
  std::int64_t now = -1;
  int reps = 20;
  bool seed_given = false;
};

int cmd_topo_gen(const Options& o) {
  harness::TopologySpec spec;
  spec.n_nodes = o.nodes;
  spec.edge_factor = o.edge_factor;
  spec.seed = o.seed;
  const Graph g = harness::generate_topology(spec);
  write_or_print(o.out, dump_topology(g));
  if (o.out.empty() || o.out == "-") return kOk;
  if (o.json) {
    ojson j{{"nodes", g.node_count()}, {"edges", g.edge_count()}, {"out", o.out}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "wrote " << g.node_count() << " nodes, " << g.edge_count() << " edges to " << o.out
              << "\n";
  }
  return kOk;
}

int cmd_validate(const Options& o) {
  const Graph g = load_topology_file(o.topology);
  const PolicySet ps = policies_for(o.policies, g.classes());
  std::optional<Graph> ref;
  if (!o.reference.empty()) ref = load_topology_file(o.reference);
  const std::int64_t now = o.now >= 0 ? o.now : g.clock();
  const auto report = validate(g, ps, {now, ref ? &*ref : nullptr, std::nullopt});

  if (o.json) {
    std::cout << report_to_json(report);
  } else {
    std::cout << "conforms: " << (report.conforms() ? "true" : "false") << "\n";
    for (const auto& v : report.violations) {
      std::cout << v.shape_id << " on " << v.focus << ": " << v.message << " (" << v.detail << ")\n";
    }
  }
  return report.conforms() ? kOk : kRejected;
}

int cmd_govern(const Options& o) {
  Graph g = load_topology_file(o.topology);
  EngineConfig cfg;
  const PolicySet ps = policies_for(o.policies, g.classes(), cfg);
  const std::int64_t now = o.now >= 0 ? o.now : g.clock();

  std::unique_ptr<Agent> agent;
  std::string intent_text = o.intent;
  if (!o.plan.empty()) {
    Plan plan = load_plan_file(o.plan);
    if (intent_text.empty()) intent_text = plan.intent;
    agent = std::make_unique<harness::PlanAgent>(std::move(plan));
  } else {
    agent = make_agent(o.agent, g);
  }
  if (intent_text.empty()) throw Error(ErrorCode::ParseError, "no intent: pass --intent or a plan with one");
  const Intent intent = parse_intent(intent_text);

  GovernanceEngine engine(cfg);
  const auto result = engine.govern(intent, g, ps, *agent, now);
  if (!o.audit_out.empty()) export_audit_file(result, intent.describe(), now, o.audit_out);

  if (o.json) {
    std::cout << verdict_json(result, intent.describe()).dump(2) << "\n";
  } else {
    const auto& v = result.verdict;
    std::cout << "intent:   " << intent.describe() << "\n"
              << "outcome:  " << to_string(v.outcome) << "\n"
              << "kind:     " << to_string(v.kind) << "\n";
    if (!v.reason.empty()) std::cout << "reason:   " << v.reason << "\n";
    if (v.failed_action_index) std::cout << "failed action index: " << *v.failed_action_index << "\n";
    std::cout << "audit records: " << result.records.size() << "\n";
  }
  return result.verdict.accepted() ? kOk : kRejected;
}

int cmd_suite(const Options& o) {
  harness::SuiteConfig cfg;
  if (!o.config.empty()) cfg = harness::parse_suite_config(read_text_file(o.config), o.config);
  if (!o.ablate.empty()) cfg.ablation = harness::parse_ablation(o.ablate);
  if (o.seed_given) cfg.seed = o.seed;
  const PolicySet ps = policies_for(o.policies, ClassHierarchy::standard(), cfg.engine);

  const auto m = harness::run_suite(cfg, ps);
  const std::string json = harness::metrics_to_json(m, cfg);
  if (!o.out.empty()) write_text_file(o.out, json);
  std::cout << (o.json ? json : harness::metrics_table(m, cfg));
  return !cfg.ablation.any() && m.escaped_violations > 0 ? kRejected : kOk;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidSpec, "bad size '" + item + "'");
    }
  }
  return out;
}

int cmd_bench_scale(const Options& o) {
  const PolicySet ps = policies_for(o.policies, ClassHierarchy::standard());
  harness::ScalingOptions opt;
  opt.reps = o.reps;
  opt.seed = o.seed;
  const auto result = harness::run_scaling(parse_sizes(o.sizes), ps, opt);
  const std::string csv = harness::scaling_csv(result);
  if (!o.out.empty()) write_text_file(o.out, csv);
  if (o.json) {
    ojson j;
    j["rows"] = ojson::array();
    for (const auto& r : result.rows) {
      j["rows"].push_back({{"n", r.n}, {"m", r.m}, {"k", r.median_k}, {"latencyMs", r.median_validation_ms}});
    }
    j["fit"] = {{"exponent", result.fit.exponent}, {"coefficient", result.fit.coefficient}};
    std::cout << j.dump(2) << "\n";
  } else if (o.out.empty()) {
    std::cout << csv;
  } else {
    std::cout << "wrote " << result.rows.size() << " rows to " << o.out << "; exponent "
              << result.fit.exponent << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-grounded governance for network automation plans"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");

  auto* topo = app.add_subcommand("topo-gen", "Generate a synthetic 5G core topology");
  topo->add_option("--nodes", o.nodes, "Node count (at least 10)")->capture_default_str();
  topo->add_option("--edge-factor", o.edge_factor, "Target edges per node")->capture_default_str();
  topo->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  topo->add_option("--out", o.out, "Output file (stdout when omitted)");
  topo->add_flag("--json", o.json, "Print the summary as JSON");

  auto* val = app.add_subcommand("validate", "Validate a topology against a policy corpus");
  val->add_option("--topology", o.topology, "Topology file")->required()->check(CLI::ExistingFile);
  val->add_option("--policies", o.policies, "Policy corpus (default: $GSPEC_POLICY_DIR/corpus.json)");
  val->add_option("--now", o.now, "Logical time in seconds (default: newest timestamp)");
  val->add_option("--reference", o.reference, "Committed topology for delta-bound shapes")
      ->check(CLI::ExistingFile);
  val->add_flag("--json", o.json, "Print the report as JSON");

  auto* gov = app.add_subcommand("govern", "Plan, verify and execute one intent");
  gov->add_option("--topology", o.topology, "Topology file")->required()->check(CLI::ExistingFile);
  gov->add_option("--policies", o.policies, "Policy corpus (default: $GSPEC_POLICY_DIR/corpus.json)");
  auto* plan_opt = gov->add_option("--plan", o.plan, "Fixed plan file")->check(CLI::ExistingFile);
  auto* agent_opt = gov->add_option("--agent", o.agent, "mock[:ghost=P,onto=P,seed=N] or remedy");
  plan_opt->excludes(agent_opt);
  gov->add_option("--intent", o.intent, "goal(entity,...); defaults to the plan's intent");
  gov->add_option("--audit-out", o.audit_out, "Append the audit trail (JSONL) to this file");
  gov->add_option("--now", o.now, "Logical time in seconds (default: newest timestamp)");
  gov->add_flag("--json", o.json, "Print the verdict as JSON");

  auto* suite = app.add_subcommand("suite", "Run the scenario benchmark");
  suite->add_option("--config", o.config, "Suite configuration (JSON)")->check(CLI::ExistingFile);
  suite->add_option("--policies", o.policies, "Policy corpus (default: $GSPEC_POLICY_DIR/corpus.json)");
  suite->add_option("--out", o.out, "Write metrics JSON here");
  suite->add_option("--ablate", o.ablate, "Disable components: nkg, shacl, tslam (comma separated)");
  auto* suite_seed = suite->add_option("--seed", o.seed, "Scenario seed");
  suite->add_flag("--json", o.json, "Print metrics as JSON");

  auto* bench = app.add_subcommand("bench-scale", "Measure validation latency against topology size");
  bench->add_option("--sizes", o.sizes, "Comma separated node counts")->required();
  bench->add_option("--reps", o.reps, "Scenarios per size")->capture_default_str();
  bench->add_option("--seed", o.seed, "Seed")->capture_default_str();
  bench->add_option("--policies", o.policies, "Policy corpus (default: $GSPEC_POLICY_DIR/corpus.json)");
  bench->add_option("--out", o.out, "Write CSV here");
  bench->add_flag("--json", o.json, "Print rows and fit as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*topo) return cmd_topo_gen(o);
    if (*val) return cmd_validate(o);
    if (*gov) {
      if (o.plan.empty() && o.agent.empty()) {
        std::cerr << "govern: one of --plan or --agent is required\n";
        return kUsage;
      }
      return cmd_govern(o);
    }
    if (*suite) {
      o.seed_given = suite_seed->count() > 0;
      return cmd_suite(o);
    }
    if (*bench) return cmd_bench_scale(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
