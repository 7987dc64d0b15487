#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nkgov/engine.hpp"
#include "nkgov/graph.hpp"

namespace nkgov::harness {

enum class ScenarioKind { UpfCongestion, LinkFailure, SliceSlaBreach, StateConsistency };

inline constexpr std::array<ScenarioKind, 4> kScenarioKinds = {
    ScenarioKind::UpfCongestion, ScenarioKind::LinkFailure, ScenarioKind::SliceSlaBreach,
    ScenarioKind::StateConsistency};

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text);
/// Intent goal label for a scenario kind, e.g. "restore-backhaul".
std::string_view goal_of(ScenarioKind kind);
std::optional<ScenarioKind> kind_of_goal(std::string_view goal);

/// Per-kind scenario counts, in kScenarioKinds order.
using ScenarioCounts = std::array<int, 4>;

/// 150/150/100/100 scaled to `total` by largest remainder.
ScenarioCounts default_counts(int total = 500);

struct Scenario {
  ScenarioKind kind;
  std::uint64_t seed = 0;
  NodeId target;
  /// Congestion: injected load. SLA breach: added transport latency.
  double magnitude = 0;
  Intent intent;
};

/// Picks scenario targets from `topology` (active, non-spare nodes of the
/// relevant class) and shuffles the list. Throws InvalidCounts for negative
/// or all-zero counts, or when the topology lacks candidates for a kind.
std::vector<Scenario> generate_scenarios(const ScenarioCounts& counts, const Graph& topology,
                                         std::uint64_t seed);

/// Transport path gNB -> TN -> UPF currently serving `slice`, if any.
std::optional<std::vector<NodeId>> slice_path(const Graph& graph, const NodeId& slice);

/// Injects the fault of `s` into `graph`. Returns false when the target has
/// gone (e.g. decommissioned by an earlier ablation run).
bool apply_fault(Graph& graph, const Scenario& s);

/// True when the scenario's symptom is absent from `graph` at time `now`:
/// congestion load <= 85; a live outgoing transportLink to a live TN; slice
/// latency <= 10 ms; telemetry no older than 15 s.
bool fault_cleared(const Graph& graph, const Scenario& s, std::int64_t now);

/// Periodic telemetry refresh: every live node gets lastUpdated = now and its
/// loadPercent / latencyMs reset to the value in `baseline`. `skip` is left
/// untouched. Advances the clock to `now`.
void ingest_telemetry(Graph& graph, const Graph& baseline, std::int64_t now,
                      const NodeId* skip = nullptr);

}  // namespace nkgov::harness
