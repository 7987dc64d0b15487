#pragma once

// Seeded random graphs and shape sets for property tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "nkgov/graph.hpp"
#include "nkgov/policy.hpp"

namespace world {

using namespace nkgov;

inline const std::vector<std::string>& node_classes() {
  static const std::vector<std::string> v = {
      std::string(classes::kAmf),  std::string(classes::kSmf),       std::string(classes::kUpf),
      std::string(classes::kGnb),  std::string(classes::kTransport), std::string(classes::kSlice),
      "VendorUPF"};
  return v;
}

inline const std::vector<std::string>& shape_classes() {
  static const std::vector<std::string> v = {
      "Top", "ManagedFunction", std::string(classes::kAmf), std::string(classes::kUpf),
      std::string(classes::kGnb), std::string(classes::kTransport), std::string(classes::kSlice),
      "VendorUPF"};
  return v;
}

inline const std::vector<std::string> kAttrs = {"loadPercent", "latencyMs", "plannedCapacity"};

struct World {
  Graph graph;
  Graph reference;
  PolicySet policies;
  std::int64_t now = 0;
};

class Builder {
 public:
  explicit Builder(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[uniform(0, static_cast<int>(v.size()) - 1)]; }
  std::mt19937_64& rng() { return rng_; }

  Graph graph(int max_nodes) {
    ClassHierarchy h = ClassHierarchy::standard();
    h.add("VendorUPF", classes::kUpf);
    Graph g(h);
    const int n = uniform(2, max_nodes);
    for (int i = 0; i < n; ++i) {
      NodeRecord r;
      r.id = "n" + std::to_string(i);
      r.cls = pick(node_classes());
      const int s = uniform(0, 9);
      r.status = s < 6 ? NodeStatus::Active : s < 8 ? NodeStatus::Standby : s < 9 ? NodeStatus::Failed
                                                                                  : NodeStatus::Decommissioned;
      for (const auto& a : kAttrs) {
        if (chance(0.85)) r.attributes[a] = std::round(real(0, 150));
      }
      if (chance(0.5)) r.attributes["allocatedBandwidth"] = uniform(90, 110);
      r.last_updated = uniform(0, 40);
      g.add_node(std::move(r));
    }
    const int m = uniform(0, 3 * n);
    for (int i = 0; i < m; ++i) {
      const auto src = "n" + std::to_string(uniform(0, n - 1));
      const auto dst = "n" + std::to_string(uniform(0, n - 1));
      g.add_edge(src, dst, std::string(kInterfaces[uniform(0, kInterfaces.size() - 1)]), uniform(0, 40));
    }
    return g;
  }

  // Same nodes with some attributes perturbed, some dropped, some nodes absent.
  Graph reference(const Graph& g) {
    Graph ref(g.classes());
    g.for_each_node([&](NodeHandle, const NodeRecord& r) {
      if (chance(0.1)) return;
      NodeRecord c = r;
      for (auto it = c.attributes.begin(); it != c.attributes.end();) {
        if (chance(0.1)) {
          it = c.attributes.erase(it);
          continue;
        }
        if (chance(0.5)) it->second = chance(0.1) ? 0.0 : std::round(it->second * real(0.6, 1.5));
        ++it;
      }
      ref.add_node(std::move(c));
    });
    return ref;
  }

  PolicyShape shape(int index) {
    PolicyShape s;
    s.id = "S" + std::to_string(index);
    s.target_class = pick(shape_classes());
    s.message = "message " + std::to_string(index);
    auto peer = [&] { return pick(shape_classes()); };
    switch (uniform(0, 5)) {
      case 0: {
        ForbiddenAdjacency c;
        c.peer_class = peer();
        if (chance(0.6)) c.iface = std::string(kInterfaces[uniform(0, kInterfaces.size() - 1)]);
        s.constraint = c;
        break;
      }
      case 1: {
        RequiredMediation c;
        c.peer_class = peer();
        c.via_class = peer();
        c.max_depth = uniform(1, 4);
        s.constraint = c;
        break;
      }
      case 2: {
        AttributeRange c;
        c.attribute = pick(kAttrs);
        if (chance(0.7)) c.min_inclusive = uniform(0, 60);
        if (chance(0.7) || !c.min_inclusive) c.max_inclusive = uniform(60, 140);
        s.constraint = c;
        break;
      }
      case 3: {
        AttributeEnum c;
        c.allowed = {NodeStatus::Active};
        if (chance(0.5)) c.allowed.push_back(NodeStatus::Standby);
        if (chance(0.2)) c.allowed.push_back(NodeStatus::Failed);
        s.constraint = c;
        break;
      }
      case 4:
        s.constraint = Freshness{uniform(5, 30)};
        break;
      default: {
        DeltaBound c;
        c.attribute = pick(kAttrs);
        c.min_percent = uniform(50, 95);
        c.max_percent = uniform(105, 150);
        s.constraint = c;
        break;
      }
    }
    return s;
  }

  World world(int max_nodes) {
    World w{graph(max_nodes), Graph(), PolicySet(), 0};
    w.reference = reference(w.graph);
    std::vector<PolicyShape> shapes;
    const int count = uniform(1, 12);
    for (int i = 0; i < count; ++i) shapes.push_back(shape(i));
    w.policies = PolicySet(std::move(shapes), w.graph.classes());
    w.now = uniform(20, 60);
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace world
