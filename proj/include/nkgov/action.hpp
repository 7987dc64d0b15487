#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nkgov/graph.hpp"

namespace nkgov {

namespace act {

struct AddEdge {
  NodeId src, dst;
  std::string iface;
  bool operator==(const AddEdge&) const = default;
};
struct RemoveEdge {
  NodeId src, dst;
  std::string iface;
  bool operator==(const RemoveEdge&) const = default;
};
struct SetAttribute {
  NodeId node;
  std::string attribute;
  double value = 0;
  bool operator==(const SetAttribute&) const = default;
};
struct SetStatus {
  NodeId node;
  NodeStatus status = NodeStatus::Active;
  bool operator==(const SetStatus&) const = default;
};
/// Replaces the slice's transport path. Consecutive hops of the old path lose
/// their transportLink edges and the new path gains them; the slice latency
/// becomes the sum of the new path's node latencies.
struct RerouteTraffic {
  NodeId slice;
  std::vector<NodeId> old_path;
  std::vector<NodeId> new_path;
  bool operator==(const RerouteTraffic&) const = default;
};
/// `attribute` is plannedCapacity or allocatedBandwidth.
struct ScaleSlice {
  NodeId slice;
  std::string attribute;
  double value = 0;
  bool operator==(const ScaleSlice&) const = default;
};
/// Cycles status through STANDBY back to ACTIVE. The simulated state shows
/// plannedCapacity at 0 for the restart step.
struct RestartFunction {
  NodeId node;
  bool operator==(const RestartFunction&) const = default;
};
/// Re-homes slice configuration edges and shifts load from `from_node` to
/// `to_node`.
struct MigrateTraffic {
  NodeId from_node;
  NodeId to_node;
  bool operator==(const MigrateTraffic&) const = default;
};
struct DecommissionNode {
  NodeId node;
  bool operator==(const DecommissionNode&) const = default;
};

}  // namespace act

using Action = std::variant<act::AddEdge, act::RemoveEdge, act::SetAttribute, act::SetStatus,
                            act::RerouteTraffic, act::ScaleSlice, act::RestartFunction,
                            act::MigrateTraffic, act::DecommissionNode>;

std::string_view kind_name(const Action& action);

/// Every node id mentioned by `action`, first-appearance order, no repeats.
std::vector<NodeId> targets(const Action& action);

/// Load left on a node after MigrateTraffic drains it.
inline constexpr double kMigrationResidualLoad = 10.0;

/// Applies `action` in place. Returns false (graph untouched) when a target is
/// not stored or the action would change nothing structurally, e.g. removing
/// an absent edge.
bool apply_action(Graph& graph, const Action& action);

/// Copy-then-apply. `no_op`, when given, receives !applied.
Graph simulate_action(const Graph& graph, const Action& action, bool* no_op = nullptr);

struct TraceStep {
  std::string observation;
  std::string diagnosis;
  std::string plan;
  bool operator==(const TraceStep&) const = default;
};

struct Plan {
  std::string intent;
  std::vector<Action> actions;
  std::vector<TraceStep> trace;  // empty or one step per action
  bool operator==(const Plan&) const = default;
};

Plan parse_plan(std::string_view text, std::string_view source = "<plan>");
Plan load_plan_file(const std::filesystem::path& path);
std::string dump_plan(const Plan& plan, int indent = 2);

/// Single-line JSON object for one action, with "kind" first.
std::string action_to_json(const Action& action);
/// Inverse of action_to_json.
Action action_from_json(std::string_view text);

}  // namespace nkgov
