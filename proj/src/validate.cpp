#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <unordered_map>

#include "json_support.hpp"
#include "nkgov/error.hpp"
#include "nkgov/policy.hpp"

namespace nkgov {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// A shape with its class references resolved against one graph's hierarchy.
struct Bound {
  const PolicyShape* shape;
  std::optional<ClassId> peer;
  std::optional<ClassId> via;
  std::optional<IfaceId> iface;
};

class Checker {
 public:
  Checker(const Graph& g, const ValidationOptions& opt, std::vector<Violation>& out)
      : g_(g), opt_(opt), out_(out) {}

  void run(NodeHandle h, const Bound& b) {
    std::visit([&](const auto& c) { check(h, b, c); }, b.shape->constraint);
  }

 private:
  void emit(NodeHandle h, const Bound& b, std::string detail) {
    out_.push_back({b.shape->id, g_.record(h).id, b.shape->message, std::move(detail)});
  }

  void check(NodeHandle h, const Bound& b, const ForbiddenAdjacency&) {
    if (!b.peer) return;
    const auto& cls = g_.classes();
    auto hit = [&](const Link& l) {
      return l.peer != h && g_.is_live(l.peer) && (!b.iface || *b.iface == l.iface) &&
             cls.is_a(g_.class_of(l.peer), *b.peer);
    };
    const auto& self = g_.record(h).id;
    for (const auto& l : g_.out_links(h)) {
      if (hit(l)) {
        emit(h, b, self + " -[" + std::string(interface_name(l.iface)) + "]-> " + g_.record(l.peer).id);
      }
    }
    for (const auto& l : g_.in_links(h)) {
      if (hit(l)) {
        emit(h, b, g_.record(l.peer).id + " -[" + std::string(interface_name(l.iface)) + "]-> " + self);
      }
    }
  }

  // Min-id peer reachable within some hop budget, with its distance.
  struct Reach {
    const NodeId* peer = nullptr;
    int depth = 0;
  };

  static void merge(Reach& into, const NodeId* peer, int depth) {
    if (!peer) return;
    if (!into.peer || *peer < *into.peer || (*peer == *into.peer && depth < into.depth)) {
      into = {peer, depth};
    }
  }

  bool is_a(NodeHandle x, std::optional<ClassId> c) const {
    return c && g_.classes().is_a(g_.class_of(x), *c);
  }

  // Memoized per (peer, via, node, budget) for the whole call, so foci that
  // share a neighbourhood explore it once.
  Reach reach(NodeHandle x, int budget, ClassId peer, std::optional<ClassId> via) {
    auto& per_node = memo_[{peer, via ? static_cast<int>(*via) : -1}][x];
    if (per_node.size() <= static_cast<std::size_t>(budget)) per_node.resize(budget + 1);
    if (per_node[budget]) return *per_node[budget];
    Reach best;
    for (const auto& l : g_.out_links(x)) {
      const NodeHandle y = l.peer;
      if (!g_.is_live(y) || is_a(y, via)) continue;
      if (is_a(y, peer)) merge(best, &g_.record(y).id, 1);
      if (budget > 1) {
        const Reach r = reach(y, budget - 1, peer, via);
        merge(best, r.peer, r.depth + 1);
      }
    }
    per_node[budget] = best;
    return best;
  }

  // Plain BFS that never revisits the focus; used when the focus could count
  // as its own peer through a cycle.
  Reach reach_bfs(NodeHandle h, int max_depth, ClassId peer, std::optional<ClassId> via) {
    std::unordered_map<NodeHandle, int> depth{{h, 0}};
    std::deque<NodeHandle> queue{h};
    Reach best;
    while (!queue.empty()) {
      const NodeHandle x = queue.front();
      queue.pop_front();
      const int d = depth[x];
      if (d == max_depth) continue;
      for (const auto& l : g_.out_links(x)) {
        const NodeHandle y = l.peer;
        if (!g_.is_live(y) || is_a(y, via) || depth.contains(y)) continue;
        depth.emplace(y, d + 1);
        if (is_a(y, peer)) merge(best, &g_.record(y).id, d + 1);
        queue.push_back(y);
      }
    }
    return best;
  }

  void check(NodeHandle h, const Bound& b, const RequiredMediation& c) {
    if (!b.peer) return;
    const Reach r = is_a(h, b.peer) ? reach_bfs(h, c.max_depth, *b.peer, b.via)
                                     : reach(h, c.max_depth, *b.peer, b.via);
    if (r.peer) {
      emit(h, b, "unmediated path to " + *r.peer + " within " + std::to_string(r.depth) + " hops");
    }
  }

  void check(NodeHandle h, const Bound& b, const AttributeRange& c) {
    const auto v = g_.record(h).attribute(c.attribute);
    if (!v) return emit(h, b, "attribute absent: " + c.attribute);
    if (c.min_inclusive && *v < *c.min_inclusive) {
      emit(h, b, c.attribute + "=" + num(*v) + " < " + num(*c.min_inclusive));
    } else if (c.max_inclusive && *v > *c.max_inclusive) {
      emit(h, b, c.attribute + "=" + num(*v) + " > " + num(*c.max_inclusive));
    }
  }

  void check(NodeHandle h, const Bound& b, const AttributeEnum& c) {
    const auto st = g_.record(h).status;
    if (std::find(c.allowed.begin(), c.allowed.end(), st) == c.allowed.end()) {
      emit(h, b, "status=" + std::string(to_string(st)));
    }
  }

  void check(NodeHandle h, const Bound& b, const Freshness& c) {
    const auto age = opt_.now - g_.record(h).last_updated;
    if (age > c.max_age_seconds) {
      emit(h, b, "age " + std::to_string(age) + "s > " + std::to_string(c.max_age_seconds) + "s");
    }
  }

  void check(NodeHandle h, const Bound& b, const DeltaBound& c) {
    const auto& rec = g_.record(h);
    const NodeRecord* before = opt_.reference->find(rec.id);
    if (!before) return;
    const auto ref = before->attribute(c.attribute);
    if (!ref) return;
    const auto v = rec.attribute(c.attribute);
    if (!v) return emit(h, b, "attribute absent: " + c.attribute);
    if (*ref == 0) {
      if (*v != 0) emit(h, b, c.attribute + " changed from 0 to " + num(*v));
      return;
    }
    const double pct = 100.0 * *v / *ref;
    if (pct < c.min_percent || pct > c.max_percent) {
      emit(h, b,
           c.attribute + " " + num(*ref) + " -> " + num(*v) + " (" + num(pct) + "% outside [" +
               num(c.min_percent) + "%, " + num(c.max_percent) + "%])");
    }
  }

  const Graph& g_;
  const ValidationOptions& opt_;
  std::vector<Violation>& out_;
  std::map<std::pair<ClassId, int>, std::unordered_map<NodeHandle, std::vector<std::optional<Reach>>>> memo_;
};

// Shapes applicable to each class: those targeting the class or an ancestor.
// Rebuilding this per call dominated small scoped validations, so the last
// table is kept per thread. Both keys are content stamps and the data
// pointer ties the Bound pointers to the live set.
const std::vector<std::vector<Bound>>& applicable_shapes(const ClassHierarchy& classes,
                                                         const PolicySet& policies) {
  struct Cache {
    std::uint64_t serial = 0, version = 0;
    const PolicyShape* data = nullptr;
    std::size_t count = 0;
    std::vector<std::vector<Bound>> table;
  };
  thread_local Cache cache;
  const auto shapes = policies.shapes();
  if (cache.serial == policies.serial() && cache.version == classes.version() &&
      cache.data == shapes.data() && cache.count == shapes.size() && !cache.table.empty()) {
    return cache.table;
  }

  std::vector<std::vector<Bound>> by_class(classes.size());
  for (const auto& s : shapes) {
    const auto target = classes.find(s.target_class);
    if (!target) continue;
    Bound b{&s, std::nullopt, std::nullopt, std::nullopt};
    if (const auto* c = std::get_if<ForbiddenAdjacency>(&s.constraint)) {
      b.peer = classes.find(c->peer_class);
      if (c->iface) b.iface = parse_interface(*c->iface);
    } else if (const auto* c = std::get_if<RequiredMediation>(&s.constraint)) {
      b.peer = classes.find(c->peer_class);
      b.via = classes.find(c->via_class);
    }
    for (ClassId sub : classes.subtree(*target)) by_class[sub].push_back(b);
  }
  cache = {policies.serial(), classes.version(), shapes.data(), shapes.size(), std::move(by_class)};
  return cache.table;
}

}  // namespace

bool ValidationReport::only_freshness(const PolicySet& policies) const {
  if (violations.empty()) return false;
  return std::all_of(violations.begin(), violations.end(), [&](const Violation& v) {
    const auto* s = policies.find(v.shape_id);
    return s && std::holds_alternative<Freshness>(s->constraint);
  });
}

std::vector<NodeId> shape_targets(const PolicySet& policies, const Graph& graph,
                                  std::string_view shape_id) {
  const auto& shape = policies.shape(shape_id);
  std::vector<NodeId> out;
  const auto cls = graph.classes().find(shape.target_class);
  if (!cls) return out;
  for (NodeHandle h : graph.class_handles(*cls)) {
    if (graph.is_live(h)) out.push_back(graph.record(h).id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ValidationReport validate(const Graph& graph, const PolicySet& policies,
                          const ValidationOptions& options) {
  if (policies.has_delta() && !options.reference) {
    throw Error(ErrorCode::MissingReference, "delta-bound shapes need a committed reference graph");
  }
  const auto& by_class = applicable_shapes(graph.classes(), policies);

  ValidationReport report;
  Checker checker(graph, options, report.violations);
  auto visit = [&](NodeHandle h) {
    if (!graph.is_live(h)) return;
    for (const auto& b : by_class[graph.class_of(h)]) checker.run(h, b);
  };

  if (options.scope) {
    std::vector<NodeHandle> focus;
    for (const auto& id : *options.scope) {
      if (auto h = graph.find_handle(id)) focus.push_back(*h);
    }
    std::sort(focus.begin(), focus.end());
    focus.erase(std::unique(focus.begin(), focus.end()), focus.end());
    for (NodeHandle h : focus) visit(h);
  } else {
    graph.for_each_node([&](NodeHandle h, const NodeRecord&) { visit(h); });
  }

  auto key = [](const Violation& v) { return std::tie(v.shape_id, v.focus, v.detail); };
  std::sort(report.violations.begin(), report.violations.end(),
            [&](const Violation& a, const Violation& b) { return key(a) < key(b); });
  return report;
}

std::string report_to_json(const ValidationReport& report, int indent) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["conforms"] = report.conforms();
  doc["violationCount"] = report.violations.size();
  doc["violations"] = ojson::array();
  for (const auto& v : report.violations) {
    doc["violations"].push_back(
        {{"shape", v.shape_id}, {"focus", v.focus}, {"message", v.message}, {"detail", v.detail}});
  }
  return doc.dump(indent) + "\n";
}

}  // namespace nkgov
