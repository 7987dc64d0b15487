#include "nkgov/harness/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nkgov/error.hpp"
#include "paths.hpp"

namespace nkgov::harness {

namespace {

constexpr std::array<std::string_view, 4> kKindNames = {"UpfCongestion", "LinkFailure",
                                                        "SliceSlaBreach", "StateConsistency"};
constexpr std::array<std::string_view, 4> kGoals = {"relieve-upf-congestion", "restore-backhaul",
                                                    "restore-slice-sla", "resync-state"};

std::vector<NodeId> candidates(const Graph& g, ScenarioKind kind) {
  std::vector<NodeId> out;
  g.for_each_node([&](NodeHandle, const NodeRecord& r) {
    if (r.status != NodeStatus::Active) return;
    switch (kind) {
      case ScenarioKind::UpfCongestion:
        if (r.cls == classes::kUpf) out.push_back(r.id);
        break;
      case ScenarioKind::LinkFailure:
        if (r.cls == classes::kGnb) out.push_back(r.id);
        break;
      case ScenarioKind::SliceSlaBreach:
        if (r.cls == classes::kSlice && detail::slice_path(detail::View(g), r.id)) out.push_back(r.id);
        break;
      case ScenarioKind::StateConsistency:
        if (r.cls == classes::kGnb || r.cls == classes::kUpf || r.cls == classes::kTransport) {
          out.push_back(r.id);
        }
        break;
    }
  });
  return out;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return kScenarioKinds[i];
  }
  return std::nullopt;
}

std::string_view goal_of(ScenarioKind kind) { return kGoals[static_cast<int>(kind)]; }

std::optional<ScenarioKind> kind_of_goal(std::string_view goal) {
  for (std::size_t i = 0; i < kGoals.size(); ++i) {
    if (kGoals[i] == goal) return kScenarioKinds[i];
  }
  return std::nullopt;
}

ScenarioCounts default_counts(int total) {
  if (total < 0) throw Error(ErrorCode::InvalidCounts, "suite size must be non-negative");
  constexpr std::array<int, 4> kBase = {150, 150, 100, 100};
  ScenarioCounts counts{};
  std::array<std::pair<double, int>, 4> rem;
  int assigned = 0;
  for (int i = 0; i < 4; ++i) {
    const double exact = total * kBase[i] / 500.0;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    rem[i] = {exact - counts[i], -i};
  }
  std::sort(rem.begin(), rem.end(), std::greater<>());
  for (int i = 0; assigned < total; ++i, ++assigned) ++counts[-rem[i].second];
  return counts;
}

std::vector<Scenario> generate_scenarios(const ScenarioCounts& counts, const Graph& topology,
                                         std::uint64_t seed) {
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw Error(ErrorCode::InvalidCounts, "scenario counts must be non-negative");
    total += c;
  }
  if (total == 0) throw Error(ErrorCode::InvalidCounts, "at least one scenario is required");

  std::mt19937_64 rng(seed);
  std::vector<Scenario> out;
  out.reserve(total);
  for (std::size_t k = 0; k < kScenarioKinds.size(); ++k) {
    if (counts[k] == 0) continue;
    const auto kind = kScenarioKinds[k];
    const auto pool = candidates(topology, kind);
    if (pool.empty()) {
      throw Error(ErrorCode::InvalidCounts,
                  "topology has no candidates for " + std::string(to_string(kind)));
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < counts[k]; ++i) {
      Scenario s;
      s.kind = kind;
      s.seed = rng();
      s.target = pool[pick(rng)];
      if (kind == ScenarioKind::UpfCongestion) {
        s.magnitude = std::round(std::uniform_real_distribution<double>(86, 94)(rng) * 10) / 10;
      } else if (kind == ScenarioKind::SliceSlaBreach) {
        s.magnitude = std::round(std::uniform_real_distribution<double>(11, 16)(rng) * 10) / 10;
      }
      s.intent = {std::string(goal_of(kind)), {s.target}};
      out.push_back(std::move(s));
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::optional<std::vector<NodeId>> slice_path(const Graph& graph, const NodeId& slice) {
  return detail::slice_path(detail::View(graph), slice);
}

bool apply_fault(Graph& graph, const Scenario& s) {
  if (!graph.contains_active(s.target)) return false;
  switch (s.kind) {
    case ScenarioKind::UpfCongestion:
      graph.set_attribute(s.target, "loadPercent", s.magnitude);
      return true;
    case ScenarioKind::LinkFailure:
      for (const auto& e : graph.out_edges(s.target)) {
        if (e.iface == "transportLink") graph.remove_edges(e.src, e.dst, e.iface);
      }
      return true;
    case ScenarioKind::SliceSlaBreach: {
      const auto path = slice_path(graph, s.target);
      if (!path) return false;
      double sum = 0;
      for (const auto& id : *path) sum += detail::attr(graph.node(id), "latencyMs");
      const double added = std::max(1.0, s.magnitude - sum);
      const auto& tn = (*path)[1];
      graph.set_attribute(tn, "latencyMs", detail::attr(graph.node(tn), "latencyMs") + added);
      graph.set_attribute(s.target, "latencyMs", sum + added);
      return true;
    }
    case ScenarioKind::StateConsistency:
      // Staleness comes from withholding the target in ingest_telemetry.
      return true;
  }
  return false;
}

bool fault_cleared(const Graph& graph, const Scenario& s, std::int64_t now) {
  const auto* r = graph.find(s.target);
  if (!r || r->status == NodeStatus::Decommissioned) return false;
  switch (s.kind) {
    case ScenarioKind::UpfCongestion:
      return detail::attr(*r, "loadPercent") <= 85.0;
    case ScenarioKind::LinkFailure:
      for (const auto& e : graph.out_edges(s.target)) {
        const auto* t = graph.find(e.dst);
        if (e.iface == "transportLink" && t && t->cls == classes::kTransport &&
            t->status != NodeStatus::Decommissioned) {
          return true;
        }
      }
      return false;
    case ScenarioKind::SliceSlaBreach:
      return detail::attr(*r, "latencyMs") <= 10.0;
    case ScenarioKind::StateConsistency:
      return now - r->last_updated <= 15;
  }
  return false;
}

void ingest_telemetry(Graph& graph, const Graph& baseline, std::int64_t now, const NodeId* skip) {
  graph.advance_clock(now);
  std::vector<NodeId> ids;
  ids.reserve(graph.node_count());
  graph.for_each_node([&](NodeHandle, const NodeRecord& r) {
    if (r.status != NodeStatus::Decommissioned && !(skip && r.id == *skip)) ids.push_back(r.id);
  });
  for (const auto& id : ids) {
    if (const auto* base = baseline.find(id)) {
      for (const char* attr : {"loadPercent", "latencyMs"}) {
        const auto want = base->attribute(attr);
        if (want && graph.node(id).attribute(attr) != want) graph.set_attribute(id, attr, *want);
      }
    }
    graph.touch(id, now);
  }
}

}  // namespace nkgov::harness
