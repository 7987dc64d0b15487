#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "nkgov/graph.hpp"

namespace nkgov::harness::detail {

inline bool serving(const NodeRecord* r) {
  return r && (r->status == NodeStatus::Active || r->status == NodeStatus::Standby);
}

/// Read access shared by the full graph and an extracted subgraph.
class View {
 public:
  explicit View(const Graph& g) : graph_(&g) {}
  explicit View(const Subgraph& s) : sub_(&s) {
    for (const auto& e : s.edges) out_[e.src].push_back(e);
  }

  /// Live record or nullptr.
  const NodeRecord* node(const NodeId& id) const {
    if (sub_) return sub_->find(id);
    const auto* r = graph_->find(id);
    return r && r->status != NodeStatus::Decommissioned ? r : nullptr;
  }

  std::vector<EdgeRecord> out(const NodeId& id) const {
    if (graph_) return graph_->out_edges(id);
    auto it = out_.find(id);
    return it == out_.end() ? std::vector<EdgeRecord>{} : it->second;
  }

 private:
  const Graph* graph_ = nullptr;
  const Subgraph* sub_ = nullptr;
  std::unordered_map<NodeId, std::vector<EdgeRecord>> out_;
};

inline bool has_out(const View& v, const NodeId& src, const NodeId& dst, std::string_view iface) {
  for (const auto& e : v.out(src)) {
    if (e.dst == dst && e.iface == iface) return true;
  }
  return false;
}

/// gNB -> TN -> UPF path serving `slice`: a configured gNB, a TN it backhauls
/// to, and a configured UPF, preferring a TN that links on to that UPF.
inline std::optional<std::vector<NodeId>> slice_path(const View& v, const NodeId& slice) {
  if (!v.node(slice)) return std::nullopt;
  std::vector<NodeId> gnbs, upfs;
  for (const auto& e : v.out(slice)) {
    const auto* r = v.node(e.dst);
    if (e.iface != "s-nssai-config" || !serving(r)) continue;
    if (r->cls == classes::kGnb) gnbs.push_back(e.dst);
    if (r->cls == classes::kUpf) upfs.push_back(e.dst);
  }
  std::optional<std::vector<NodeId>> fallback;
  for (const auto& g : gnbs) {
    for (const auto& e : v.out(g)) {
      const auto* t = v.node(e.dst);
      if (e.iface != "transportLink" || !serving(t) || t->cls != classes::kTransport) continue;
      for (const auto& u : upfs) {
        if (has_out(v, e.dst, u, "transportLink")) return std::vector<NodeId>{g, e.dst, u};
        if (!fallback) fallback = std::vector<NodeId>{g, e.dst, u};
      }
    }
  }
  return fallback;
}

inline double attr(const NodeRecord& r, std::string_view name) {
  return r.attribute(name).value_or(0.0);
}

}  // namespace nkgov::harness::detail
