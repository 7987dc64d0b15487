#pragma once

#include <cstdint>

#include "nkgov/graph.hpp"

namespace nkgov::harness {

/// Share of each region's nodes per class. AMF and SMF are fixed at one per
/// region; gNBs take whatever the other classes leave.
struct ClassMix {
  double upf = 1.0 / 12;
  double transport = 2.0 / 12;
  double slice = 1.0 / 12;
  /// Probability that a region carries one decommissioned gNB.
  double ghost = 0.4;
};

struct TopologySpec {
  int n_nodes = 450;
  double edge_factor = 2.67;
  ClassMix mix;
  std::uint64_t seed = 1;
  /// Region size at 450 nodes and its growth exponent in n.
  double base_region = 12.0;
  double region_growth = 0.13;

  /// Throws InvalidSpec.
  void check() const;
};

/// Region size used for `n` nodes.
int region_size(const TopologySpec& spec);

/// Deterministic regional layout. Each region holds one AMF and SMF, primary
/// UPFs, one STANDBY spare UPF at zero load, transport nodes in a ring,
/// gNBs and slices; neighbouring regions are joined through one transport
/// link. Slices reach a primary UPF along gNB -> transport -> UPF. Edges are
/// padded with allowed links up to round(edge_factor * n) when the mandatory
/// layout falls short. All nodes carry lastUpdated = 0 and the clock is 0.
Graph generate_topology(const TopologySpec& spec);

}  // namespace nkgov::harness
