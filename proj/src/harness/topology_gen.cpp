#include "nkgov/harness/topology_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "nkgov/error.hpp"

namespace nkgov::harness {

namespace {

constexpr int kMinRegion = 8;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

struct Region {
  NodeId amf, smf, spare;
  std::vector<NodeId> upfs, tns, gnbs, slices;
};

class Builder {
 public:
  explicit Builder(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  NodeId function(std::string id, std::string_view cls, NodeStatus status = NodeStatus::Active,
                   double load = -1) {
    NodeRecord r;
    r.id = std::move(id);
    r.cls = std::string(cls);
    r.status = status;
    r.attributes = {{"plannedCapacity", 100.0},
                    {"loadPercent", load >= 0 ? load : round2(uniform(20, 60))},
                    {"latencyMs", round2(uniform(0.5, 2.5))}};
    graph.add_node(r);
    return r.id;
  }

  void slice(const NodeId& id, double latency) {
    NodeRecord r;
    r.id = id;
    r.cls = std::string(classes::kSlice);
    r.attributes = {{"allocatedBandwidth", round2(uniform(20, 80))},
                    {"plannedCapacity", 100.0},
                    {"latencyMs", round2(latency)}};
    graph.add_node(std::move(r));
  }

  bool edge(const NodeId& src, const NodeId& dst, std::string_view iface) {
    if (!edges_.emplace(src, dst, std::string(iface)).second) return false;
    graph.add_edge(src, dst, iface, 0);
    return true;
  }

  double latency(const NodeId& id) const { return *graph.node(id).attribute("latencyMs"); }

  Graph graph;

 private:
  std::mt19937_64 rng_;
  std::set<std::tuple<NodeId, NodeId, std::string>> edges_;
};

}  // namespace

void TopologySpec::check() const {
  auto prob = [](double p) { return std::isfinite(p) && p >= 0 && p <= 1; };
  if (n_nodes < 10) throw Error(ErrorCode::InvalidSpec, "nNodes must be at least 10");
  if (!(std::isfinite(edge_factor) && edge_factor > 1)) {
    throw Error(ErrorCode::InvalidSpec, "edgeFactor must exceed 1");
  }
  if (!prob(mix.upf) || !prob(mix.transport) || !prob(mix.slice) || !prob(mix.ghost)) {
    throw Error(ErrorCode::InvalidSpec, "class mix entries must lie in [0, 1]");
  }
  if (!(std::isfinite(base_region) && base_region >= kMinRegion) ||
      !(std::isfinite(region_growth) && region_growth >= 0)) {
    throw Error(ErrorCode::InvalidSpec, "region profile out of range");
  }
}

int region_size(const TopologySpec& spec) {
  const double s = spec.base_region * std::pow(spec.n_nodes / 450.0, spec.region_growth);
  return std::max(kMinRegion, static_cast<int>(std::lround(s)));
}

Graph generate_topology(const TopologySpec& spec) {
  spec.check();
  Builder b(spec.seed);
  const int n = spec.n_nodes;
  const int regions = std::max(1, static_cast<int>(std::lround(double(n) / region_size(spec))));

  std::vector<Region> layout(regions);
  for (int r = 0; r < regions; ++r) {
    const int size = n / regions + (r < n % regions ? 1 : 0);
    const std::string tag = "-r" + std::to_string(r);
    Region& reg = layout[r];

    const int ghost = (size >= 10 && (r == 0 || b.chance(spec.mix.ghost))) ? 1 : 0;
    const int upf = std::max(1, static_cast<int>(std::lround(size * spec.mix.upf)));
    const int tn = std::max(2, static_cast<int>(std::lround(size * spec.mix.transport)));
    const int slices = std::max(1, static_cast<int>(std::lround(size * spec.mix.slice)));
    int gnb = size - 3 - upf - tn - slices - ghost;
    if (gnb < 1) throw Error(ErrorCode::InvalidSpec, "class mix leaves no room for gNBs");

    reg.amf = b.function("amf" + tag, classes::kAmf);
    reg.smf = b.function("smf" + tag, classes::kSmf);
    for (int i = 0; i < upf; ++i) reg.upfs.push_back(b.function("upf" + tag + "-" + std::to_string(i), classes::kUpf));
    reg.spare = b.function("upf" + tag + "-s", classes::kUpf, NodeStatus::Standby, 0.0);
    for (int i = 0; i < tn; ++i) reg.tns.push_back(b.function("tn" + tag + "-" + std::to_string(i), classes::kTransport));
    for (int i = 0; i < gnb; ++i) reg.gnbs.push_back(b.function("gnb" + tag + "-" + std::to_string(i), classes::kGnb));

    b.edge(reg.amf, reg.smf, "N11");
    for (std::size_t i = 0; i < reg.gnbs.size(); ++i) {
      const auto& g = reg.gnbs[i];
      const auto& t = reg.tns[i % reg.tns.size()];
      b.edge(g, reg.amf, "N2");
      b.edge(g, reg.upfs[i % reg.upfs.size()], "N3");
      b.edge(g, t, "transportLink");
      b.edge(t, g, "measurementPoint");
    }
    std::vector<NodeId> all_upfs = reg.upfs;
    all_upfs.push_back(reg.spare);
    for (std::size_t j = 0; j < all_upfs.size(); ++j) {
      b.edge(reg.smf, all_upfs[j], "N4");
      b.edge(all_upfs[j], reg.tns[j % reg.tns.size()], "N6");
      b.edge(reg.tns[(j + 1) % reg.tns.size()], all_upfs[j], "transportLink");
    }
    if (reg.tns.size() == 2) {
      b.edge(reg.tns[0], reg.tns[1], "transportLink");
    } else {
      for (std::size_t i = 0; i < reg.tns.size(); ++i) {
        b.edge(reg.tns[i], reg.tns[(i + 1) % reg.tns.size()], "transportLink");
      }
    }
    for (int l = 0; l < slices; ++l) {
      const std::size_t gi = l % reg.gnbs.size();
      const auto& g = reg.gnbs[gi];
      const auto& t = reg.tns[gi % reg.tns.size()];
      const auto& u = reg.upfs[l % reg.upfs.size()];
      const NodeId id = "slice" + tag + "-" + std::to_string(l);
      b.slice(id, b.latency(g) + b.latency(t) + b.latency(u));
      reg.slices.push_back(id);
      b.edge(t, u, "transportLink");
      b.edge(id, u, "s-nssai-config");
      b.edge(id, reg.smf, "s-nssai-config");
      b.edge(id, g, "s-nssai-config");
    }
    if (ghost) {
      const auto id = b.function("gnb" + tag + "-x", classes::kGnb, NodeStatus::Decommissioned);
      b.edge(id, reg.amf, "N2");
      b.edge(id, reg.tns[0], "transportLink");
    }
  }
  const int ring = regions > 2 ? regions : regions - 1;
  for (int r = 0; r < ring; ++r) {
    b.edge(layout[r].tns[0], layout[(r + 1) % regions].tns[0], "transportLink");
  }

  // Pad with links the corpus allows until the edge budget is met.
  const auto target = static_cast<std::size_t>(std::lround(spec.edge_factor * n));
  std::size_t attempts = 0;
  while (b.graph.edge_count() < target && attempts++ < 20 * target) {
    const Region& reg = layout[b.pick(layout.size())];
    const auto& g = reg.gnbs[b.pick(reg.gnbs.size())];
    switch (b.pick(4)) {
      case 0: b.edge(g, reg.tns[b.pick(reg.tns.size())], "transportLink"); break;
      case 1: b.edge(reg.tns[b.pick(reg.tns.size())], g, "measurementPoint"); break;
      case 2: b.edge(g, reg.upfs[b.pick(reg.upfs.size())], "N3"); break;
      default: b.edge(reg.slices[b.pick(reg.slices.size())], g, "s-nssai-config"); break;
    }
  }
  return std::move(b.graph);
}

}  // namespace nkgov::harness
