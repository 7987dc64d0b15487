#include <doctest.h>

#include "nkgov/action.hpp"
#include "nkgov/error.hpp"

using namespace nkgov;

namespace {

Graph site() {
  Graph g;
  auto add = [&](std::string id, std::string_view cls, std::map<std::string, double> attrs,
                 NodeStatus st = NodeStatus::Active) {
    g.add_node({std::move(id), std::string(cls), st, std::move(attrs), 0});
  };
  add("gnb", classes::kGnb, {{"latencyMs", 1}});
  add("tn-a", classes::kTransport, {{"latencyMs", 12}});
  add("tn-b", classes::kTransport, {{"latencyMs", 2}});
  add("upf-1", classes::kUpf, {{"latencyMs", 1}, {"loadPercent", 90}});
  add("upf-2", classes::kUpf, {{"latencyMs", 1.5}, {"loadPercent", 20}});
  add("upf-s", classes::kUpf, {{"latencyMs", 1}, {"loadPercent", 0}}, NodeStatus::Standby);
  add("amf", classes::kAmf, {{"plannedCapacity", 100}});
  add("slice", classes::kSlice, {{"latencyMs", 14}, {"plannedCapacity", 100}});
  g.add_edge("gnb", "tn-a", "transportLink", 0);
  g.add_edge("tn-a", "upf-1", "transportLink", 0);
  g.add_edge("slice", "upf-1", "s-nssai-config", 0);
  g.add_edge("slice", "gnb", "s-nssai-config", 0);
  g.advance_clock(50);
  return g;
}

double attr(const Graph& g, std::string_view id, std::string_view name) {
  return g.node(id).attribute(name).value_or(-1);
}

ErrorCode plan_error(const std::string& text) {
  try {
    parse_plan(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a plan error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("targets list every referenced node once, in order") {
  CHECK(targets(act::AddEdge{"a", "b", "N2"}) == std::vector<NodeId>{"a", "b"});
  CHECK(targets(act::SetAttribute{"a", "x", 1}) == std::vector<NodeId>{"a"});
  CHECK(targets(act::MigrateTraffic{"u1", "u2"}) == std::vector<NodeId>{"u1", "u2"});
  CHECK(targets(act::RerouteTraffic{"s", {"g", "t1", "u1"}, {"g", "t2", "u1"}}) ==
        std::vector<NodeId>{"s", "g", "t1", "u1", "t2"});
  CHECK(targets(act::DecommissionNode{"x"}) == std::vector<NodeId>{"x"});
}

TEST_CASE("reroute swaps transport links and recomputes slice latency") {
  Graph g = site();
  REQUIRE(apply_action(g, act::RerouteTraffic{"slice", {"gnb", "tn-a", "upf-1"}, {"gnb", "tn-b", "upf-2"}}));
  CHECK(g.out_edges("gnb").size() == 1);
  CHECK(g.out_edges("gnb")[0].dst == "tn-b");
  CHECK(g.out_edges("tn-a").empty());
  CHECK(g.out_edges("tn-b")[0].dst == "upf-2");
  CHECK(attr(g, "slice", "latencyMs") == doctest::Approx(4.5));
  CHECK(g.node("tn-b").last_updated == 50);
}

TEST_CASE("migrate moves load and slice homing, waking a standby target") {
  Graph g = site();
  REQUIRE(apply_action(g, act::MigrateTraffic{"upf-1", "upf-s"}));
  CHECK(attr(g, "upf-1", "loadPercent") == doctest::Approx(kMigrationResidualLoad));
  CHECK(attr(g, "upf-s", "loadPercent") == doctest::Approx(80));
  CHECK(g.node("upf-s").status == NodeStatus::Active);
  const auto in = g.in_edges("upf-s");
  REQUIRE(in.size() == 1);
  CHECK(in[0].src == "slice");
  CHECK(g.in_edges("upf-1").size() == 1);  // the transport link stays
  CHECK_FALSE(apply_action(g, act::MigrateTraffic{"upf-2", "upf-2"}));
}

TEST_CASE("restart leaves the function active with its capacity dipped") {
  Graph g = site();
  REQUIRE(apply_action(g, act::RestartFunction{"amf"}));
  CHECK(g.node("amf").status == NodeStatus::Active);
  CHECK(attr(g, "amf", "plannedCapacity") == doctest::Approx(0));
}

TEST_CASE("status, scale and decommission") {
  Graph g = site();
  REQUIRE(apply_action(g, act::ScaleSlice{"slice", "plannedCapacity", 110}));
  CHECK(attr(g, "slice", "plannedCapacity") == doctest::Approx(110));
  REQUIRE(apply_action(g, act::SetStatus{"upf-2", NodeStatus::Failed}));
  CHECK(g.node("upf-2").status == NodeStatus::Failed);
  REQUIRE(apply_action(g, act::DecommissionNode{"upf-2"}));
  CHECK_FALSE(g.is_live("upf-2"));
  CHECK_FALSE(apply_action(g, act::DecommissionNode{"upf-2"}));
}

TEST_CASE("apply_action leaves the graph untouched on missing targets or no-ops") {
  Graph g = site();
  const auto h = graph_hash(g);
  CHECK_FALSE(apply_action(g, act::AddEdge{"gnb", "ghost", "N2"}));
  CHECK_FALSE(apply_action(g, act::RemoveEdge{"gnb", "upf-2", "N3"}));
  CHECK_FALSE(apply_action(g, act::SetAttribute{"ghost", "x", 1}));
  CHECK(graph_hash(g) == h);

  bool no_op = false;
  const Graph next = simulate_action(g, act::AddEdge{"gnb", "tn-b", "transportLink"}, &no_op);
  CHECK_FALSE(no_op);
  CHECK(graph_hash(g) == h);
  CHECK(next.edge_count() == g.edge_count() + 1);
}

TEST_CASE("plan JSON round trip") {
  Plan p;
  p.intent = "restore-slice-sla(slice)";
  p.actions = {act::AddEdge{"a", "b", "N2"},
               act::RemoveEdge{"a", "b", "N3"},
               act::SetAttribute{"a", "loadPercent", 12.5},
               act::SetStatus{"a", NodeStatus::Standby},
               act::RerouteTraffic{"s", {"g", "t"}, {"g", "u", "v"}},
               act::ScaleSlice{"s", "allocatedBandwidth", 90},
               act::RestartFunction{"amf"},
               act::MigrateTraffic{"u1", "u2"},
               act::DecommissionNode{"x"}};
  for (std::size_t i = 0; i < p.actions.size(); ++i) p.trace.push_back({"o" + std::to_string(i), "d", "p"});
  CHECK(parse_plan(dump_plan(p)) == p);
  for (const auto& a : p.actions) CHECK(action_from_json(action_to_json(a)) == a);
}

TEST_CASE("plan parser rejects malformed input") {
  CHECK(plan_error(R"({"actions": []})") == ErrorCode::ParseError);
  CHECK(plan_error(R"({"actions": [{"kind": "Teleport", "node": "a"}]})") == ErrorCode::UnknownActionKind);
  CHECK(plan_error(R"({"actions": [{"kind": "SetStatus", "node": "a", "status": "NAPPING"}]})") ==
        ErrorCode::UnknownStatus);
  CHECK(plan_error(R"({"actions": [{"kind": "RerouteTraffic", "slice": "s", "oldPath": ["a"], "newPath": ["a", "b"]}]})") ==
        ErrorCode::ParseError);
  CHECK(plan_error(R"({"actions": [{"kind": "ScaleSlice", "slice": "s", "attribute": "colour", "value": 1}]})") ==
        ErrorCode::ParseError);
  CHECK(plan_error(R"({"actions": [{"kind": "AddEdge", "src": "a", "dst": "b", "iface": "N9"}]})") ==
        ErrorCode::ParseError);
  CHECK(plan_error(R"({"actions": [{"kind": "RestartFunction", "node": "a"}],
    "trace": [{"observation": "x"}, {"observation": "y"}]})") == ErrorCode::ParseError);
  CHECK(plan_error(R"({"actions": [{"kind": "SetAttribute", "node": "a", "attribute": "x"}]})") ==
        ErrorCode::ParseError);
}
