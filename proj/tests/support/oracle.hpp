#pragma once

// Exhaustive reference checker. Works only through the id-level Graph API and
// enumerates every walk for mediation shapes, so it shares no traversal code
// with the validator it is compared against.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nkgov/graph.hpp"
#include "nkgov/policy.hpp"

namespace oracle {

using namespace nkgov;

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline bool live(const Graph& g, const NodeId& id) {
  return g.node(id).status != NodeStatus::Decommissioned;
}

inline bool is_a(const Graph& g, const NodeId& id, const std::string& cls) {
  return g.classes().is_a(g.node(id).cls, cls);
}

// Shortest hop count to every node reachable from `focus` along out-edges
// through live, non-via nodes, never re-entering `focus`.
inline std::map<NodeId, int> walks(const Graph& g, const NodeId& focus, const std::string& via,
                                   int max_depth) {
  std::map<NodeId, int> best;
  std::function<void(const NodeId&, int)> go = [&](const NodeId& at, int depth) {
    if (depth == max_depth) return;
    for (const auto& e : g.out_edges(at)) {
      if (e.dst == focus || !live(g, e.dst) || is_a(g, e.dst, via)) continue;
      auto [it, fresh] = best.emplace(e.dst, depth + 1);
      if (!fresh) it->second = std::min(it->second, depth + 1);
      go(e.dst, depth + 1);
    }
  };
  go(focus, 0);
  return best;
}

inline std::vector<Violation> check(const Graph& g, const PolicySet& ps, std::int64_t now,
                                    const Graph* reference,
                                    const std::optional<std::vector<NodeId>>& scope = std::nullopt) {
  std::vector<Violation> out;
  std::vector<NodeId> all;
  g.for_each_node([&](NodeHandle, const NodeRecord& r) { all.push_back(r.id); });

  for (const auto& shape : ps.shapes()) {
    for (const auto& id : all) {
      if (!live(g, id) || !is_a(g, id, shape.target_class)) continue;
      if (scope && std::find(scope->begin(), scope->end(), id) == scope->end()) continue;
      const NodeRecord& rec = g.node(id);
      auto emit = [&](std::string detail) { out.push_back({shape.id, id, shape.message, std::move(detail)}); };

      if (const auto* c = std::get_if<ForbiddenAdjacency>(&shape.constraint)) {
        auto hit = [&](const EdgeRecord& e, const NodeId& other) {
          return other != id && live(g, other) && is_a(g, other, c->peer_class) &&
                 (!c->iface || *c->iface == e.iface);
        };
        for (const auto& e : g.out_edges(id)) {
          if (hit(e, e.dst)) emit(e.src + " -[" + e.iface + "]-> " + e.dst);
        }
        for (const auto& e : g.in_edges(id)) {
          if (hit(e, e.src)) emit(e.src + " -[" + e.iface + "]-> " + e.dst);
        }
      } else if (const auto* c = std::get_if<RequiredMediation>(&shape.constraint)) {
        if (!g.classes().contains(c->peer_class)) continue;
        std::optional<std::pair<NodeId, int>> worst;
        for (const auto& [peer, depth] : walks(g, id, c->via_class, c->max_depth)) {
          if (!is_a(g, peer, c->peer_class)) continue;
          if (!worst || peer < worst->first) worst = {peer, depth};
        }
        if (worst) {
          emit("unmediated path to " + worst->first + " within " + std::to_string(worst->second) + " hops");
        }
      } else if (const auto* c = std::get_if<AttributeRange>(&shape.constraint)) {
        const auto it = rec.attributes.find(c->attribute);
        if (it == rec.attributes.end()) {
          emit("attribute absent: " + c->attribute);
        } else if (c->min_inclusive && it->second < *c->min_inclusive) {
          emit(c->attribute + "=" + fmt(it->second) + " < " + fmt(*c->min_inclusive));
        } else if (c->max_inclusive && it->second > *c->max_inclusive) {
          emit(c->attribute + "=" + fmt(it->second) + " > " + fmt(*c->max_inclusive));
        }
      } else if (const auto* c = std::get_if<AttributeEnum>(&shape.constraint)) {
        if (std::count(c->allowed.begin(), c->allowed.end(), rec.status) == 0) {
          emit("status=" + std::string(to_string(rec.status)));
        }
      } else if (const auto* c = std::get_if<Freshness>(&shape.constraint)) {
        const auto age = now - rec.last_updated;
        if (age > c->max_age_seconds) {
          emit("age " + std::to_string(age) + "s > " + std::to_string(c->max_age_seconds) + "s");
        }
      } else if (const auto* c = std::get_if<DeltaBound>(&shape.constraint)) {
        const NodeRecord* before = reference ? reference->find(id) : nullptr;
        if (!before || !before->attributes.contains(c->attribute)) continue;
        const double ref = before->attributes.at(c->attribute);
        const auto it = rec.attributes.find(c->attribute);
        if (it == rec.attributes.end()) {
          emit("attribute absent: " + c->attribute);
        } else if (ref == 0) {
          if (it->second != 0) emit(c->attribute + " changed from 0 to " + fmt(it->second));
        } else {
          const double pct = 100.0 * it->second / ref;
          if (pct < c->min_percent || pct > c->max_percent) {
            emit(c->attribute + " " + fmt(ref) + " -> " + fmt(it->second) + " (" + fmt(pct) + "% outside [" +
                 fmt(c->min_percent) + "%, " + fmt(c->max_percent) + "%])");
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.shape_id, a.focus, a.detail) < std::tie(b.shape_id, b.focus, b.detail);
  });
  return out;
}

}  // namespace oracle
