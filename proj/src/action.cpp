#include "nkgov/action.hpp"

#include <algorithm>
#include <cmath>

#include "json_support.hpp"
#include "nkgov/error.hpp"
#include "nkgov/topology_io.hpp"

namespace nkgov {

using detail::json;
using ojson = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::string_view kTransport = "transportLink";
constexpr std::string_view kSliceEdge = "s-nssai-config";

bool all_stored(const Graph& g, const std::vector<NodeId>& ids) {
  return std::all_of(ids.begin(), ids.end(), [&](const NodeId& id) { return g.contains(id); });
}

bool has_edge(const Graph& g, const NodeId& src, const NodeId& dst, std::string_view iface) {
  const auto s = g.find_handle(src);
  const auto d = g.find_handle(dst);
  const auto i = parse_interface(iface);
  if (!s || !d || !i) return false;
  const auto links = g.out_links(*s);
  return std::any_of(links.begin(), links.end(),
                     [&](const Link& l) { return l.peer == *d && l.iface == *i; });
}

struct Applier {
  Graph& g;

  void touch(const NodeId& id) { g.touch(id, g.clock()); }

  bool operator()(const act::AddEdge& a) {
    if (!parse_interface(a.iface)) return false;
    g.add_edge(a.src, a.dst, a.iface, g.clock());
    touch(a.src);
    touch(a.dst);
    return true;
  }
  bool operator()(const act::RemoveEdge& a) {
    if (g.remove_edges(a.src, a.dst, a.iface) == 0) return false;
    touch(a.src);
    touch(a.dst);
    return true;
  }
  bool operator()(const act::SetAttribute& a) {
    g.set_attribute(a.node, a.attribute, a.value);
    touch(a.node);
    return true;
  }
  bool operator()(const act::SetStatus& a) {
    if (a.status == NodeStatus::Decommissioned) {
      g.decommission_node(a.node, g.clock());
    } else {
      g.set_status(a.node, a.status);
    }
    touch(a.node);
    return true;
  }
  bool operator()(const act::RerouteTraffic& a) {
    for (std::size_t i = 0; i + 1 < a.old_path.size(); ++i) {
      g.remove_edges(a.old_path[i], a.old_path[i + 1], kTransport);
    }
    double latency = 0;
    for (std::size_t i = 0; i < a.new_path.size(); ++i) {
      if (i + 1 < a.new_path.size() && !has_edge(g, a.new_path[i], a.new_path[i + 1], kTransport)) {
        g.add_edge(a.new_path[i], a.new_path[i + 1], kTransport, g.clock());
      }
      latency += g.node(a.new_path[i]).attribute("latencyMs").value_or(0.0);
    }
    g.set_attribute(a.slice, "latencyMs", latency);
    for (const auto& id : targets(Action{a})) touch(id);
    return true;
  }
  bool operator()(const act::ScaleSlice& a) {
    g.set_attribute(a.slice, a.attribute, a.value);
    touch(a.slice);
    return true;
  }
  bool operator()(const act::RestartFunction& a) {
    g.set_status(a.node, NodeStatus::Standby);
    g.set_status(a.node, NodeStatus::Active);
    g.set_attribute(a.node, "plannedCapacity", 0.0);
    touch(a.node);
    return true;
  }
  bool operator()(const act::MigrateTraffic& a) {
    if (a.from_node == a.to_node) return false;
    std::vector<NodeId> slices;
    for (const auto& e : g.in_edges(a.from_node)) {
      if (e.iface == kSliceEdge) slices.push_back(e.src);
    }
    std::sort(slices.begin(), slices.end());
    slices.erase(std::unique(slices.begin(), slices.end()), slices.end());
    for (const auto& s : slices) {
      g.remove_edges(s, a.from_node, kSliceEdge);
      if (!has_edge(g, s, a.to_node, kSliceEdge)) g.add_edge(s, a.to_node, kSliceEdge, g.clock());
      touch(s);
    }

    const double from_load = g.node(a.from_node).attribute("loadPercent").value_or(0.0);
    const double to_load = g.node(a.to_node).attribute("loadPercent").value_or(0.0);
    const double moved = std::max(0.0, from_load - kMigrationResidualLoad);
    g.set_attribute(a.from_node, "loadPercent", from_load - moved);
    g.set_attribute(a.to_node, "loadPercent", to_load + moved);
    if (g.node(a.to_node).status == NodeStatus::Standby) g.set_status(a.to_node, NodeStatus::Active);
    touch(a.from_node);
    touch(a.to_node);
    return true;
  }
  bool operator()(const act::DecommissionNode& a) {
    if (g.node(a.node).status == NodeStatus::Decommissioned) return false;
    g.decommission_node(a.node, g.clock());
    return true;
  }
};

std::vector<NodeId> path_field(const json& obj, const char* field, const std::string& ctx) {
  auto path = detail::get_field<std::vector<NodeId>>(obj, field, ctx);
  if (path.size() < 2) {
    throw Error(ErrorCode::ParseError, ctx + ": '" + field + "' needs at least 2 nodes");
  }
  return path;
}

double value_field(const json& obj, const std::string& ctx) {
  const auto v = detail::get_field<double>(obj, "value", ctx);
  if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, ctx + ": value must be finite");
  return v;
}

std::string iface_field(const json& obj, const std::string& ctx) {
  auto iface = detail::get_field<std::string>(obj, "iface", ctx);
  if (!parse_interface(iface)) {
    throw Error(ErrorCode::ParseError, ctx + ": unknown interface '" + iface + "'");
  }
  return iface;
}

Action parse_action(const json& obj, const std::string& ctx) {
  if (!obj.is_object()) throw Error(ErrorCode::ParseError, ctx + ": action must be an object");
  const auto kind = detail::get_field<std::string>(obj, "kind", ctx);
  auto str = [&](const char* f) { return detail::get_field<std::string>(obj, f, ctx); };

  if (kind == "AddEdge") return act::AddEdge{str("src"), str("dst"), iface_field(obj, ctx)};
  if (kind == "RemoveEdge") return act::RemoveEdge{str("src"), str("dst"), iface_field(obj, ctx)};
  if (kind == "SetAttribute") return act::SetAttribute{str("node"), str("attribute"), value_field(obj, ctx)};
  if (kind == "SetStatus") {
    const auto text = str("status");
    const auto st = parse_status(text);
    if (!st) throw Error(ErrorCode::UnknownStatus, ctx + ": '" + text + "'");
    return act::SetStatus{str("node"), *st};
  }
  if (kind == "RerouteTraffic") {
    return act::RerouteTraffic{str("slice"), path_field(obj, "oldPath", ctx),
                               path_field(obj, "newPath", ctx)};
  }
  if (kind == "ScaleSlice") {
    auto attr = str("attribute");
    if (attr != "plannedCapacity" && attr != "allocatedBandwidth") {
      throw Error(ErrorCode::ParseError, ctx + ": ScaleSlice cannot scale '" + attr + "'");
    }
    return act::ScaleSlice{str("slice"), std::move(attr), value_field(obj, ctx)};
  }
  if (kind == "RestartFunction") return act::RestartFunction{str("node")};
  if (kind == "MigrateTraffic") return act::MigrateTraffic{str("fromNode"), str("toNode")};
  if (kind == "DecommissionNode") return act::DecommissionNode{str("node")};
  throw Error(ErrorCode::UnknownActionKind, ctx + ": '" + kind + "'");
}

ojson to_ojson(const Action& action) {
  ojson j;
  j["kind"] = std::string(kind_name(action));
  std::visit(overloaded{
                 [&](const act::AddEdge& a) {
                   j["src"] = a.src;
                   j["dst"] = a.dst;
                   j["iface"] = a.iface;
                 },
                 [&](const act::RemoveEdge& a) {
                   j["src"] = a.src;
                   j["dst"] = a.dst;
                   j["iface"] = a.iface;
                 },
                 [&](const act::SetAttribute& a) {
                   j["node"] = a.node;
                   j["attribute"] = a.attribute;
                   j["value"] = a.value;
                 },
                 [&](const act::SetStatus& a) {
                   j["node"] = a.node;
                   j["status"] = std::string(to_string(a.status));
                 },
                 [&](const act::RerouteTraffic& a) {
                   j["slice"] = a.slice;
                   j["oldPath"] = a.old_path;
                   j["newPath"] = a.new_path;
                 },
                 [&](const act::ScaleSlice& a) {
                   j["slice"] = a.slice;
                   j["attribute"] = a.attribute;
                   j["value"] = a.value;
                 },
                 [&](const act::RestartFunction& a) { j["node"] = a.node; },
                 [&](const act::MigrateTraffic& a) {
                   j["fromNode"] = a.from_node;
                   j["toNode"] = a.to_node;
                 },
                 [&](const act::DecommissionNode& a) { j["node"] = a.node; },
             },
             action);
  return j;
}

}  // namespace

std::string_view kind_name(const Action& action) {
  static constexpr std::string_view kNames[] = {
      "AddEdge",    "RemoveEdge",      "SetAttribute",   "SetStatus",       "RerouteTraffic",
      "ScaleSlice", "RestartFunction", "MigrateTraffic", "DecommissionNode"};
  return kNames[action.index()];
}

std::vector<NodeId> targets(const Action& action) {
  std::vector<NodeId> ids;
  auto add = [&](const NodeId& id) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  };
  std::visit(overloaded{
                 [&](const act::AddEdge& a) { add(a.src), add(a.dst); },
                 [&](const act::RemoveEdge& a) { add(a.src), add(a.dst); },
                 [&](const act::SetAttribute& a) { add(a.node); },
                 [&](const act::SetStatus& a) { add(a.node); },
                 [&](const act::RerouteTraffic& a) {
                   add(a.slice);
                   for (const auto& n : a.old_path) add(n);
                   for (const auto& n : a.new_path) add(n);
                 },
                 [&](const act::ScaleSlice& a) { add(a.slice); },
                 [&](const act::RestartFunction& a) { add(a.node); },
                 [&](const act::MigrateTraffic& a) { add(a.from_node), add(a.to_node); },
                 [&](const act::DecommissionNode& a) { add(a.node); },
             },
             action);
  return ids;
}

bool apply_action(Graph& graph, const Action& action) {
  if (!all_stored(graph, targets(action))) return false;
  return std::visit(Applier{graph}, action);
}

Graph simulate_action(const Graph& graph, const Action& action, bool* no_op) {
  Graph next = graph.snapshot();
  const bool applied = apply_action(next, action);
  if (no_op) *no_op = !applied;
  return next;
}

Plan parse_plan(std::string_view text, std::string_view source) {
  const json doc = detail::parse_json(text, source);
  const std::string src(source);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, src + ": not an object");

  Plan plan;
  plan.intent = doc.contains("intent") ? detail::get_field<std::string>(doc, "intent", src) : "";

  auto it = doc.find("actions");
  if (it == doc.end() || !it->is_array() || it->empty()) {
    throw Error(ErrorCode::ParseError, src + ": plan needs a non-empty 'actions' array");
  }
  const auto lines = detail::element_lines(text, "actions");
  for (std::size_t i = 0; i < it->size(); ++i) {
    plan.actions.push_back(parse_action((*it)[i], detail::where(source, lines, i)));
  }

  if (auto t = doc.find("trace"); t != doc.end()) {
    if (!t->is_array()) throw Error(ErrorCode::ParseError, src + ": 'trace' must be an array");
    for (const auto& step : *t) {
      if (!step.is_object()) throw Error(ErrorCode::ParseError, src + ": trace step must be an object");
      plan.trace.push_back({step.value("observation", ""), step.value("diagnosis", ""),
                            step.value("plan", "")});
    }
  }
  if (!plan.trace.empty() && plan.trace.size() != plan.actions.size()) {
    throw Error(ErrorCode::ParseError, src + ": trace has " + std::to_string(plan.trace.size()) +
                                           " steps for " + std::to_string(plan.actions.size()) +
                                           " actions");
  }
  return plan;
}

Plan load_plan_file(const std::filesystem::path& path) {
  return parse_plan(read_text_file(path), path.string());
}

std::string dump_plan(const Plan& plan, int indent) {
  ojson doc;
  doc["intent"] = plan.intent;
  doc["trace"] = ojson::array();
  for (const auto& s : plan.trace) {
    doc["trace"].push_back({{"observation", s.observation}, {"diagnosis", s.diagnosis}, {"plan", s.plan}});
  }
  doc["actions"] = ojson::array();
  for (const auto& a : plan.actions) doc["actions"].push_back(to_ojson(a));
  return doc.dump(indent) + "\n";
}

std::string action_to_json(const Action& action) { return to_ojson(action).dump(); }

Action action_from_json(std::string_view text) {
  return parse_action(detail::parse_json(text, "<action>"), "<action>");
}

}  // namespace nkgov
