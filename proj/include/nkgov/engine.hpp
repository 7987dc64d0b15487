#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nkgov/action.hpp"
#include "nkgov/graph.hpp"
#include "nkgov/policy.hpp"

namespace nkgov {

/// Structured operator intent: a goal label and the entities it concerns.
struct Intent {
  std::string goal;
  std::vector<NodeId> entities;

  /// "goal(e1,e2,...)"
  std::string describe() const;
};

/// Inverse of Intent::describe; whitespace around names is ignored. Throws
/// ParseError.
Intent parse_intent(std::string_view text);

/// The planning layer. Implementations must be deterministic for a fixed
/// seed. Throwing from plan() rejects the intent.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Plan plan(const Subgraph& context, const Intent& intent) = 0;
};

enum class Outcome { Accepted, Rejected };
enum class VerdictKind { None, PolicyViolation, Hallucination, StaleState, AgentFailure };

std::string_view to_string(Outcome o);
std::string_view to_string(VerdictKind k);

struct Verdict {
  Outcome outcome = Outcome::Accepted;
  VerdictKind kind = VerdictKind::None;
  std::string reason;
  std::optional<std::size_t> failed_action_index;
  std::optional<ValidationReport> report;

  bool accepted() const { return outcome == Outcome::Accepted; }
};

struct EngineConfig {
  int hops = 2;
  std::int64_t freshness_max_age = 15;
  double delta_theta = 20.0;
  int mediation_depth = 4;
  bool membership_gate = true;
  bool policy_gate = true;
  /// Run a full validation of the committed graph after every govern call.
  bool post_commit_check = true;

  /// Throws InvalidSpec unless all numeric fields are positive.
  void check() const;
  PolicyDefaults policy_defaults() const { return {freshness_max_age, delta_theta, mediation_depth}; }
};

/// One executed action.
struct AuditRecord {
  std::uint64_t sequence = 0;
  std::int64_t timestamp = 0;
  std::string intent;
  std::size_t action_index = 0;
  Action action;
  TraceStep trace;
  std::string pre_hash;
  std::string post_hash;
};

/// Single-action check against `graph` (a simulation state): membership on
/// the pre-action active view first, then full validation of the simulated
/// successor. `reference` feeds DeltaBound shapes. `next`, when given,
/// receives the successor state.
Verdict verify(const Action& action, const Graph& graph, const PolicySet& policies,
               std::int64_t now, const Graph& reference, Graph* next = nullptr);

struct GovernResult {
  Verdict verdict;
  Plan plan;
  std::vector<AuditRecord> records;
  std::size_t subgraph_k = 0;
  double agent_ms = 0;
  double validation_ms = 0;
  /// Full validation of the committed graph after the call (accepted or not),
  /// with the pre-call state as DeltaBound reference.
  ValidationReport post_commit;
};

/// Runs plan / verify / execute for one intent. The committed graph is
/// modified only when every action of the plan passes; otherwise it is left
/// hash-identical. Audit sequence numbers continue across calls.
class GovernanceEngine {
 public:
  explicit GovernanceEngine(EngineConfig config = {});

  const EngineConfig& config() const { return config_; }

  GovernResult govern(const Intent& intent, Graph& committed, const PolicySet& policies,
                      Agent& agent, std::int64_t now);

  /// Phase 2 alone over a caller-supplied plan. Returns the verdict and, on
  /// acceptance, the final simulated state in `final_state`.
  Verdict verify_plan(const Plan& plan, const Graph& committed, const PolicySet& policies,
                      std::int64_t now, const std::vector<NodeId>& context,
                      Graph* final_state = nullptr) const;

 private:
  EngineConfig config_;
  std::uint64_t next_sequence_ = 1;
};

// ---- Audit trail ------------------------------------------------------------

std::string audit_record_json(const AuditRecord& record);
std::string verdict_line_json(const Verdict& verdict, const std::string& intent, std::int64_t ts);

/// Appends one JSONL line per record, then a verdict line when rejected.
void export_audit(const GovernResult& result, const std::string& intent, std::int64_t ts,
                  std::ostream& sink);
void export_audit_file(const GovernResult& result, const std::string& intent, std::int64_t ts,
                       const std::filesystem::path& path);

struct ReplayResult {
  Graph graph;
  std::size_t applied = 0;
  bool chain_ok = true;
  std::string error;  // first broken link, if any
};

/// Re-applies the records of an audit trail to `start`, checking every
/// preHash/postHash against the replayed state. Verdict lines are skipped.
ReplayResult replay_audit(const Graph& start, std::string_view jsonl);

}  // namespace nkgov
