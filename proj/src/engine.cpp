#include "nkgov/engine.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <unordered_set>

#include "nkgov/error.hpp"

namespace nkgov {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Verdict reject(VerdictKind kind, std::string reason, std::optional<std::size_t> index = {},
               std::optional<ValidationReport> report = {}) {
  return {Outcome::Rejected, kind, std::move(reason), index, std::move(report)};
}

std::optional<Verdict> membership_check(const Action& action, const Graph& g, std::size_t index) {
  for (const auto& id : targets(action)) {
    if (!g.contains_active(id)) {
      return reject(VerdictKind::Hallucination, "Hallucination: Entity not in graph: " + id, index);
    }
  }
  return std::nullopt;
}

Verdict policy_verdict(ValidationReport report, const PolicySet& policies, std::size_t index) {
  const auto& first = report.violations.front();
  if (report.only_freshness(policies)) {
    return reject(VerdictKind::StaleState,
                  "Stale State: freshness guard on " + first.focus + ": " + first.message + " (" +
                      first.detail + ")",
                  index, std::move(report));
  }
  return reject(VerdictKind::PolicyViolation,
                "Policy Violation: " + first.message + " [" + first.shape_id + " on " +
                    first.focus + ": " + first.detail + "]",
                index, std::move(report));
}

int max_mediation_depth(const PolicySet& policies) {
  int depth = 0;
  for (const auto& s : policies.shapes()) {
    if (const auto* c = std::get_if<RequiredMediation>(&s.constraint)) {
      depth = std::max(depth, c->max_depth);
    }
  }
  return depth;
}

// Nodes whose shape outcomes an action on `seeds` can change: the seeds, their
// live neighbours, and every node with a directed live path into a seed short
// enough for a mediation shape to see through it.
void add_affected(const Graph& g, const std::vector<NodeId>& seeds, int reverse_depth,
                  std::unordered_set<NodeId>& out) {
  std::unordered_map<NodeHandle, int> depth;
  std::deque<NodeHandle> queue;
  for (const auto& id : seeds) {
    const auto h = g.find_handle(id);
    if (!h) continue;
    out.insert(id);
    for (const auto& l : g.out_links(*h)) out.insert(g.record(l.peer).id);
    for (const auto& l : g.in_links(*h)) out.insert(g.record(l.peer).id);
    if (depth.emplace(*h, 0).second) queue.push_back(*h);
  }
  while (!queue.empty()) {
    const NodeHandle x = queue.front();
    queue.pop_front();
    const int d = depth[x];
    if (d >= reverse_depth) continue;
    for (const auto& l : g.in_links(x)) {
      if (!g.is_live(l.peer) || depth.contains(l.peer)) continue;
      depth.emplace(l.peer, d + 1);
      out.insert(g.record(l.peer).id);
      queue.push_back(l.peer);
    }
  }
}

}  // namespace

std::string Intent::describe() const {
  std::string out = goal + "(";
  for (std::size_t i = 0; i < entities.size(); ++i) out += (i ? "," : "") + entities[i];
  return out + ")";
}

Intent parse_intent(std::string_view text) {
  auto trim = [](std::string_view v) {
    const auto a = v.find_first_not_of(" \t");
    if (a == std::string_view::npos) return std::string();
    return std::string(v.substr(a, v.find_last_not_of(" \t") - a + 1));
  };
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') {
    throw Error(ErrorCode::ParseError, "intent '" + std::string(text) + "' is not goal(entity,...)");
  }
  Intent out{trim(text.substr(0, open)), {}};
  if (out.goal.empty()) throw Error(ErrorCode::ParseError, "intent without a goal");
  std::string_view args = text.substr(open + 1, text.size() - open - 2);
  while (!args.empty()) {
    const auto comma = args.find(',');
    auto id = trim(args.substr(0, comma));
    if (id.empty()) throw Error(ErrorCode::ParseError, "empty entity in intent '" + std::string(text) + "'");
    out.entities.push_back(std::move(id));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return out;
}

std::string_view to_string(Outcome o) { return o == Outcome::Accepted ? "ACCEPTED" : "REJECTED"; }

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::None: return "None";
    case VerdictKind::PolicyViolation: return "PolicyViolation";
    case VerdictKind::Hallucination: return "Hallucination";
    case VerdictKind::StaleState: return "StaleState";
    case VerdictKind::AgentFailure: return "AgentFailure";
  }
  return "None";
}

void EngineConfig::check() const {
  if (hops <= 0 || freshness_max_age <= 0 || delta_theta <= 0 || mediation_depth <= 0) {
    throw Error(ErrorCode::InvalidSpec, "engine parameters must be positive");
  }
}

Verdict verify(const Action& action, const Graph& graph, const PolicySet& policies,
               std::int64_t now, const Graph& reference, Graph* next) {
  if (auto v = membership_check(action, graph, 0)) return *v;
  Graph sim = simulate_action(graph, action);
  auto report = validate(sim, policies, {now, &reference, std::nullopt});
  if (next) *next = std::move(sim);
  if (!report.conforms()) return policy_verdict(std::move(report), policies, 0);
  return {};
}

GovernanceEngine::GovernanceEngine(EngineConfig config) : config_(config) { config_.check(); }

Verdict GovernanceEngine::verify_plan(const Plan& plan, const Graph& committed,
                                      const PolicySet& policies, std::int64_t now,
                                      const std::vector<NodeId>& context,
                                      Graph* final_state) const {
  Graph sim = committed.snapshot();
  sim.advance_clock(now);
  const int reverse_depth = std::max(0, max_mediation_depth(policies) - 1);
  // The first step checks the context; later steps only what they can change,
  // since every other node already conformed and is untouched since.
  std::unordered_set<NodeId> scope(context.begin(), context.end());

  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const auto& action = plan.actions[i];
    if (config_.membership_gate) {
      if (auto v = membership_check(action, sim, i)) return *v;
    }
    apply_action(sim, action);
    if (!config_.policy_gate) continue;

    add_affected(sim, targets(action), reverse_depth, scope);
    std::vector<NodeId> focus(scope.begin(), scope.end());
    scope.clear();
    auto report = validate(sim, policies, {now, &committed, std::move(focus)});
    if (!report.conforms()) return policy_verdict(std::move(report), policies, i);
  }
  if (final_state) *final_state = std::move(sim);
  return {};
}

GovernResult GovernanceEngine::govern(const Intent& intent, Graph& committed,
                                      const PolicySet& policies, Agent& agent,
                                      std::int64_t now) {
  GovernResult result;
  const auto intent_text = intent.describe();
  const Graph before = committed.snapshot();
  auto finish = [&](Verdict v) {
    result.verdict = std::move(v);
    if (config_.post_commit_check) {
      result.post_commit = validate(committed, policies, {now, &before, std::nullopt});
    }
    return std::move(result);
  };

  // Phase 1: local context and planning.
  std::vector<NodeId> seeds;
  for (const auto& e : intent.entities) {
    if (committed.contains(e)) seeds.push_back(e);
  }
  if (seeds.empty()) {
    std::string missing = intent.entities.empty() ? "<none>" : intent.entities.front();
    return finish(reject(VerdictKind::Hallucination, "Hallucination: Entity not in graph: " + missing));
  }
  const Subgraph context = committed.extract_subgraph(seeds, config_.hops);
  result.subgraph_k = context.k();

  Plan& plan = result.plan;
  const auto agent_start = Clock::now();
  try {
    plan = agent.plan(context, intent);
  } catch (const std::exception& e) {
    result.agent_ms = ms_since(agent_start);
    return finish(reject(VerdictKind::AgentFailure, std::string("Agent failure: ") + e.what()));
  }
  result.agent_ms = ms_since(agent_start);
  if (plan.actions.empty()) {
    return finish(reject(VerdictKind::AgentFailure, "Agent failure: empty plan"));
  }

  // Phase 2: atomic verification on a hypothetical state.
  const auto validation_start = Clock::now();
  Verdict verdict = verify_plan(plan, committed, policies, now, context.node_ids);
  result.validation_ms = ms_since(validation_start);
  if (!verdict.accepted()) return finish(std::move(verdict));

  // Phase 3: execution with audit.
  committed.advance_clock(now);
  std::string hash = graph_hash(committed);
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    AuditRecord rec;
    rec.sequence = next_sequence_++;
    rec.timestamp = now;
    rec.intent = intent_text;
    rec.action_index = i;
    rec.action = plan.actions[i];
    if (i < plan.trace.size()) rec.trace = plan.trace[i];
    rec.pre_hash = hash;
    apply_action(committed, plan.actions[i]);
    hash = graph_hash(committed);
    rec.post_hash = hash;
    result.records.push_back(std::move(rec));
  }
  return finish({});
}

}  // namespace nkgov
