#include "nkgov/harness/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nkgov/error.hpp"
#include "nkgov/harness/scenarios.hpp"
#include "paths.hpp"

namespace nkgov::harness {

namespace {

using detail::attr;
using detail::serving;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// Lowest `key` among serving subgraph nodes of `cls`, ties by id.
const NodeRecord* best(const Subgraph& ctx, std::string_view cls, std::string_view key,
                       const std::vector<NodeId>& exclude, bool active_only = false) {
  const NodeRecord* pick = nullptr;
  for (const auto& r : ctx.nodes) {
    if (r.cls != cls || !serving(&r)) continue;
    if (active_only && r.status != NodeStatus::Active) continue;
    if (std::find(exclude.begin(), exclude.end(), r.id) != exclude.end()) continue;
    if (!pick || attr(r, key) < attr(*pick, key) || (attr(r, key) == attr(*pick, key) && r.id < pick->id)) {
      pick = &r;
    }
  }
  return pick;
}

[[noreturn]] void no_candidate(const std::string& what) { throw std::runtime_error("no candidate " + what); }

}  // namespace

Plan RemedyAgent::plan(const Subgraph& ctx, const Intent& intent) {
  const auto kind = kind_of_goal(intent.goal);
  if (!kind || intent.entities.empty()) throw std::runtime_error("unsupported intent " + intent.describe());
  const NodeId& target = intent.entities.front();
  const NodeRecord* self = ctx.find(target);
  if (!self) no_candidate("context for " + target);

  Plan p;
  p.intent = intent.describe();
  switch (*kind) {
    case ScenarioKind::UpfCongestion: {
      const auto* to = best(ctx, classes::kUpf, "loadPercent", {target});
      if (!to) no_candidate("UPF near " + target);
      p.actions.push_back(act::MigrateTraffic{target, to->id});
      p.trace.push_back({target + " load " + fmt(attr(*self, "loadPercent")) + "%",
                         "user-plane congestion above the 85% bound",
                         "migrate sessions to " + to->id + " at " + fmt(attr(*to, "loadPercent")) + "%"});
      break;
    }
    case ScenarioKind::LinkFailure: {
      const auto* tn = best(ctx, classes::kTransport, "latencyMs", {}, true);
      if (!tn) no_candidate("transport node near " + target);
      p.actions.push_back(act::AddEdge{target, tn->id, "transportLink"});
      p.actions.push_back(act::AddEdge{tn->id, target, "transportLink"});
      const std::string obs = target + " has no backhaul transportLink";
      p.trace.push_back({obs, "transport failure isolates the cell", "uplink via " + tn->id});
      p.trace.push_back({obs, "return path also required", "downlink from " + tn->id});
      break;
    }
    case ScenarioKind::SliceSlaBreach: {
      const auto path = detail::slice_path(detail::View(ctx), target);
      if (!path) no_candidate("path for " + target);
      const auto* tn = best(ctx, classes::kTransport, "latencyMs", {(*path)[1]}, true);
      const auto* upf = best(ctx, classes::kUpf, "latencyMs", {});
      if (!tn || !upf) no_candidate("alternate path for " + target);
      p.actions.push_back(act::RerouteTraffic{target, *path, {(*path)[0], tn->id, upf->id}});
      p.trace.push_back({target + " latency " + fmt(attr(*self, "latencyMs")) + " ms exceeds 10 ms",
                         (*path)[1] + " on the current path is slow",
                         "reroute via " + tn->id + " to " + upf->id});
      break;
    }
    case ScenarioKind::StateConsistency:
      p.actions.push_back(act::SetStatus{target, self->status});
      p.trace.push_back({target + " telemetry is stale", "state may have drifted",
                         "re-assert " + std::string(to_string(self->status)) + " and resync"});
      break;
  }
  return p;
}

void MockAgentConfig::check() const {
  auto prob = [](double p) { return std::isfinite(p) && p >= 0 && p <= 1; };
  if (!prob(ghost_prob) || !prob(ontology_prob) || ghost_prob + ontology_prob > 1) {
    throw Error(ErrorCode::InvalidSpec, "agent fault probabilities must lie in [0,1] and sum to at most 1");
  }
}

MockAgent::MockAgent(MockAgentConfig config, std::vector<NodeId> stale_inventory)
    : config_(config), inventory_(std::move(stale_inventory)), rng_(config.seed) {
  config_.check();
}

Plan MockAgent::plan(const Subgraph& ctx, const Intent& intent) {
  last_ = Injection::None;
  last_index_.reset();
  Plan p = remedy_.plan(ctx, intent);

  const double u = std::uniform_real_distribution<double>(0, 1)(rng_);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); };

  if (u < config_.ghost_prob) {
    NodeId ghost;
    if (!inventory_.empty() && std::bernoulli_distribution(0.5)(rng_)) {
      ghost = inventory_[pick(inventory_.size())];
    } else {
      ghost = "gnb-ghost-" + std::to_string(++fabricated_);
    }
    const std::size_t i = pick(p.actions.size());
    std::visit(
        [&](auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, act::MigrateTraffic>) {
            a.to_node = ghost;
          } else if constexpr (std::is_same_v<T, act::AddEdge>) {
            (a.src == intent.entities.front() ? a.dst : a.src) = ghost;
          } else if constexpr (std::is_same_v<T, act::RerouteTraffic>) {
            a.new_path[1] = ghost;
          } else if constexpr (std::is_same_v<T, act::SetStatus>) {
            a.node = ghost;
          }
        },
        p.actions[i]);
    if (i < p.trace.size()) p.trace[i].plan += " using " + ghost;
    last_ = Injection::Ghost;
    last_index_ = i;
  } else if (u < config_.ghost_prob + config_.ontology_prob) {
    // A direct link the control-plane layering forbids.
    std::optional<Action> bad;
    auto first = [&](std::string_view cls) -> const NodeRecord* {
      for (const auto& r : ctx.nodes) {
        if (r.cls == cls && serving(&r)) return &r;
      }
      return nullptr;
    };
    if (const auto *amf = first(classes::kAmf), *upf = first(classes::kUpf); amf && upf) {
      bad = act::AddEdge{amf->id, upf->id, "N11"};
    } else if (const auto *smf = first(classes::kSmf), *gnb = first(classes::kGnb); smf && gnb) {
      bad = act::AddEdge{smf->id, gnb->id, "N2"};
    } else if (ctx.nodes.size() >= 2) {
      // Any interface the source class may not terminate.
      const auto& src = ctx.nodes[0];
      const char* iface = src.cls == classes::kAmf                                  ? "N3"
                          : src.cls == classes::kGnb || src.cls == classes::kSlice ? "N4"
                                                                                    : "N2";
      bad = act::AddEdge{src.id, ctx.nodes[1].id, iface};
    }
    if (bad) {
      const std::size_t i = pick(p.actions.size() + 1);
      p.actions.insert(p.actions.begin() + static_cast<std::ptrdiff_t>(i), *bad);
      if (!p.trace.empty()) {
        p.trace.insert(p.trace.begin() + static_cast<std::ptrdiff_t>(i),
                       TraceStep{"control plane far from user plane", "shortcut looks cheaper",
                                 "link " + targets(*bad)[0] + " directly to " + targets(*bad)[1]});
      }
      last_ = Injection::Ontology;
      last_index_ = i;
    }
  }
  return p;
}

std::vector<NodeId> decommissioned_ids(const Graph& graph) {
  std::vector<NodeId> out;
  graph.for_each_node([&](NodeHandle, const NodeRecord& r) {
    if (r.status == NodeStatus::Decommissioned) out.push_back(r.id);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nkgov::harness
