#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nkgov/engine.hpp"

namespace nkgov::harness {

/// Rule-based remediation for the four scenario kinds, planning only from the
/// subgraph it is handed:
///   relieve-upf-congestion  MigrateTraffic to the least-loaded other UPF
///   restore-backhaul        transportLink both ways to the fastest ACTIVE TN
///   restore-slice-sla       RerouteTraffic via the fastest other TN and UPF
///   resync-state            SetStatus re-asserting the current status
/// Throws when the context offers no candidate.
class RemedyAgent : public Agent {
 public:
  Plan plan(const Subgraph& context, const Intent& intent) override;
};

/// Replays one fixed plan regardless of context.
class PlanAgent : public Agent {
 public:
  explicit PlanAgent(Plan plan) : plan_(std::move(plan)) {}
  Plan plan(const Subgraph&, const Intent&) override { return plan_; }

 private:
  Plan plan_;
};

struct MockAgentConfig {
  double ghost_prob = 0.08;
  double ontology_prob = 0.17;
  std::uint64_t seed = 7;

  void check() const;  // InvalidSpec unless both in [0,1] and sum <= 1
};

enum class Injection { None, Ghost, Ontology };

/// RemedyAgent with seeded fault injection, at most one fault per plan. A
/// ghost replaces one action's target with a decommissioned id from the
/// agent's stale inventory or a fabricated id; an ontology fault inserts a
/// direct link the corpus forbids (AMF -N11-> UPF when both are in view).
class MockAgent : public Agent {
 public:
  MockAgent(MockAgentConfig config, std::vector<NodeId> stale_inventory);

  Plan plan(const Subgraph& context, const Intent& intent) override;

  Injection last_injection() const { return last_; }
  std::optional<std::size_t> last_injection_index() const { return last_index_; }

 private:
  MockAgentConfig config_;
  std::vector<NodeId> inventory_;
  std::mt19937_64 rng_;
  RemedyAgent remedy_;
  Injection last_ = Injection::None;
  std::optional<std::size_t> last_index_;
  std::uint64_t fabricated_ = 0;
};

/// Ids of every decommissioned node in `graph`, sorted.
std::vector<NodeId> decommissioned_ids(const Graph& graph);

}  // namespace nkgov::harness
