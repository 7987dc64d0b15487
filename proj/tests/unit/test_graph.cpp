#include <doctest.h>

#include <algorithm>
#include <random>

#include "../support/random_world.hpp"
#include "nkgov/action.hpp"
#include "nkgov/error.hpp"
#include "nkgov/harness/topology_gen.hpp"
#include "nkgov/topology_io.hpp"

using namespace nkgov;

namespace {

NodeRecord node(std::string id, std::string_view cls, NodeStatus st = NodeStatus::Active) {
  NodeRecord r;
  r.id = std::move(id);
  r.cls = std::string(cls);
  r.status = st;
  r.attributes["loadPercent"] = 40;
  return r;
}

Graph chain() {
  Graph g;
  g.add_node(node("gnb-1", classes::kGnb));
  g.add_node(node("tn-1", classes::kTransport));
  g.add_node(node("upf-1", classes::kUpf));
  g.add_node(node("upf-9", classes::kUpf, NodeStatus::Decommissioned));
  g.add_node(node("smf-1", classes::kSmf));
  g.add_edge("gnb-1", "tn-1", "transportLink", 5);
  g.add_edge("tn-1", "upf-1", "transportLink", 5);
  g.add_edge("smf-1", "upf-1", "N4", 5);
  g.add_edge("tn-1", "upf-9", "transportLink", 5);
  return g;
}

}  // namespace

TEST_CASE("add_node rejects duplicates, unknown classes and non-finite attributes") {
  Graph g = chain();
  CHECK_THROWS_AS(g.add_node(node("gnb-1", classes::kGnb)), Error);
  try {
    g.add_node(node("x", "Router"));
    FAIL("expected UnknownClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownClass);
  }
  NodeRecord bad = node("y", classes::kGnb);
  bad.attributes["latencyMs"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(g.add_node(bad), Error);
}

TEST_CASE("add_edge checks endpoints and interface names") {
  Graph g = chain();
  try {
    g.add_edge("gnb-1", "nowhere", "N2", 1);
    FAIL("expected UnknownEndpoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownEndpoint);
  }
  try {
    g.add_edge("gnb-1", "tn-1", "N99", 1);
    FAIL("expected UnknownInterface");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownInterface);
  }
}

TEST_CASE("membership views") {
  Graph g = chain();
  g.set_status("smf-1", NodeStatus::Failed);
  CHECK(g.contains("upf-9"));
  CHECK_FALSE(g.contains_active("upf-9"));
  CHECK_FALSE(g.is_live("upf-9"));
  CHECK(g.is_live("smf-1"));
  CHECK_FALSE(g.contains_active("smf-1"));
  CHECK_FALSE(g.contains_active("ghost"));
  g.set_status("tn-1", NodeStatus::Standby);
  CHECK(g.contains_active("tn-1"));
}

TEST_CASE("class index covers every ancestor") {
  ClassHierarchy h = ClassHierarchy::standard();
  h.add("VendorUPF", classes::kUpf);
  Graph g(h);
  g.add_node(node("v-1", "VendorUPF"));
  g.add_node(node("s-1", classes::kSlice));
  for (auto cls : {"VendorUPF", "UPFFunction", "ManagedFunction", "Top"}) {
    const auto m = g.class_members(cls);
    CHECK(std::find(m.begin(), m.end(), "v-1") != m.end());
  }
  CHECK(g.class_members("ManagedFunction") == std::vector<NodeId>{"v-1"});
  CHECK(g.class_members("Top") == std::vector<NodeId>{"s-1", "v-1"});
}

TEST_CASE("extract_subgraph orders by breadth then id and skips the dead") {
  Graph g = chain();
  const std::vector<NodeId> seeds{"gnb-1"};
  const auto sub = g.extract_subgraph(seeds, 2);
  CHECK(sub.node_ids == std::vector<NodeId>{"gnb-1", "tn-1", "upf-1"});
  CHECK_FALSE(sub.contains("upf-9"));
  CHECK(sub.edges.size() == 2);
  const auto wider = g.extract_subgraph(seeds, 3);
  CHECK(wider.node_ids == std::vector<NodeId>{"gnb-1", "tn-1", "upf-1", "smf-1"});
  CHECK(g.extract_subgraph(seeds, 0).node_ids == seeds);
}

TEST_CASE("memoized extraction equals a fresh computation") {
  world::Builder b(11);
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = b.graph(30);
    std::vector<NodeId> seeds{"n0"};
    if (g.node_count() > 3) seeds.push_back("n3");
    const int hops = b.uniform(0, 4);
    const auto first = g.extract_subgraph(seeds, hops);
    CHECK(first == g.extract_subgraph(seeds, hops, false));
    CHECK(first == g.extract_subgraph(seeds, hops));
    // The memo must not survive a mutation.
    g.add_edge("n0", "n1", "N2", 99);
    CHECK(g.extract_subgraph(seeds, hops) == g.extract_subgraph(seeds, hops, false));
  }
}

TEST_CASE("snapshots are isolated from later mutation") {
  world::Builder b(5);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = b.graph(25);
    const auto before = graph_hash(g);
    Graph copy = g.snapshot();
    CHECK(graph_hash(copy) == before);
    for (int i = 0; i < 6; ++i) {
      const auto id = "n" + std::to_string(b.uniform(0, static_cast<int>(g.node_count()) - 1));
      switch (b.uniform(0, 4)) {
        case 0: copy.set_attribute(id, "loadPercent", b.uniform(0, 100)); break;
        case 1: copy.set_status(id, NodeStatus::Failed); break;
        case 2: copy.add_edge(id, "n0", "N3", 77); break;
        case 3: copy.decommission_node(id, 80); break;
        default: copy.touch(id, 90); break;
      }
    }
    CHECK(graph_hash(g) == before);
  }
}

TEST_CASE("graph_hash ignores insertion order and tracks content") {
  world::Builder b(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = b.graph(20);
    std::vector<NodeRecord> nodes;
    g.for_each_node([&](NodeHandle, const NodeRecord& r) { nodes.push_back(r); });
    auto edges = g.edges();
    std::shuffle(nodes.begin(), nodes.end(), b.rng());
    std::shuffle(edges.begin(), edges.end(), b.rng());
    Graph p(g.classes());
    for (auto& r : nodes) p.add_node(r);
    for (auto& e : edges) p.add_edge(e.src, e.dst, e.iface, e.timestamp);
    CHECK(graph_hash(p) == graph_hash(g));
  }
  Graph g = chain();
  const auto h0 = graph_hash(g);
  g.add_edge("gnb-1", "upf-1", "N3", 1);
  CHECK(graph_hash(g) != h0);
  CHECK(graph_hash(Graph()) == graph_hash(Graph().snapshot()));
}

TEST_CASE("remove_edges and decommission") {
  Graph g = chain();
  CHECK(g.remove_edges("gnb-1", "tn-1", "transportLink") == 1);
  CHECK(g.remove_edges("gnb-1", "tn-1", "transportLink") == 0);
  CHECK(g.out_edges("gnb-1").empty());
  g.decommission_node("upf-1", 12);
  CHECK(g.node("upf-1").status == NodeStatus::Decommissioned);
  CHECK(g.node("upf-1").last_updated == 12);
}

TEST_CASE("topology round trip and loader diagnostics") {
  harness::TopologySpec spec;
  spec.n_nodes = 120;
  const Graph g = harness::generate_topology(spec);
  const Graph back = load_topology(dump_topology(g));
  CHECK(graph_hash(back) == graph_hash(g));
  CHECK(back.node_count() == g.node_count());

  const char* bad = R"({"nodes": [
  {"id": "a", "class": "GnbFunction"},
  {"id": "b", "class": "Router"}
]})";
  try {
    load_topology(bad, "t.json");
    FAIL("expected UnknownClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownClass);
    CHECK(std::string(e.what()).find("t.json:3") != std::string::npos);
  }
  const char* iface = R"({"nodes": [{"id": "a", "class": "GnbFunction"}],
 "edges": [{"src": "a", "dst": "a", "iface": "X9"}]})";
  try {
    load_topology(iface);
    FAIL("expected UnknownInterface");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownInterface);
  }
  const char* vendor = R"({"classes": [{"name": "AcmeUPF", "parent": "UPFFunction"}],
 "nodes": [{"id": "u", "class": "AcmeUPF"}]})";
  CHECK(load_topology(vendor).classes().is_a("AcmeUPF", "ManagedFunction"));
}

TEST_CASE("a five-action simulation shares most storage with the original") {
  harness::TopologySpec spec;
  const Graph g = harness::generate_topology(spec);
  Graph sim = g.snapshot();
  const auto upfs = g.class_members(classes::kUpf);
  REQUIRE(upfs.size() >= 3);
  apply_action(sim, act::SetAttribute{upfs[0], "loadPercent", 50});
  apply_action(sim, act::SetStatus{upfs[1], NodeStatus::Standby});
  apply_action(sim, act::AddEdge{upfs[0], upfs[2], "N3"});
  apply_action(sim, act::RestartFunction{upfs[1]});
  apply_action(sim, act::SetAttribute{upfs[2], "latencyMs", 3});
  const auto full = dump_topology(g).size();
  CHECK(sim.unique_bytes(g) < full / 4);
  CHECK(sim.unique_bytes(g) > 0);
}
