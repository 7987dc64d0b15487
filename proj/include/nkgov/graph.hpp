#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nkgov/vocabulary.hpp"

namespace nkgov {

struct NodeRecord {
  NodeId id;
  std::string cls;
  NodeStatus status = NodeStatus::Active;
  std::map<std::string, double> attributes;
  std::int64_t last_updated = 0;

  std::optional<double> attribute(std::string_view name) const;
  bool operator==(const NodeRecord&) const = default;
};

struct EdgeRecord {
  NodeId src;
  NodeId dst;
  std::string iface;
  std::int64_t timestamp = 0;

  bool operator==(const EdgeRecord&) const = default;
};

/// Induced region of the live view around a set of seeds. `node_ids` is in
/// breadth order with ties broken by id; `nodes` is parallel to it.
struct Subgraph {
  std::vector<NodeId> node_ids;
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;

  std::size_t k() const { return node_ids.size(); }
  bool contains(std::string_view id) const;
  const NodeRecord* find(std::string_view id) const;
  bool operator==(const Subgraph&) const = default;
};

using NodeHandle = std::uint32_t;

struct Link {
  NodeHandle peer;
  IfaceId iface;
  std::int64_t timestamp;
};

/// The network knowledge graph: a directed, typed, timestamped multigraph.
///
/// Copies are cheap: node slots live in fixed-size chunks held through shared
/// pointers, and a mutation clones only the chunk and slot it touches. A copy
/// therefore costs O(n / 64) pointer copies and each mutated node adds one
/// chunk plus one slot of private storage.
///
/// Decommissioned nodes stay in the store. The "live view" used for traversal
/// and policy targeting excludes them together with their edges, while
/// membership for agent actions (`contains_active`) additionally requires
/// ACTIVE or STANDBY status.
class Graph {
 public:
  Graph();
  explicit Graph(ClassHierarchy classes);

  Graph(const Graph& other);
  Graph& operator=(const Graph& other);
  Graph(Graph&&) noexcept = default;
  Graph& operator=(Graph&&) noexcept = default;

  const ClassHierarchy& classes() const { return *classes_; }
  ClassId add_class(std::string_view name, std::string_view parent);

  // Mutations. Every mutation drops memoized subgraphs.
  void add_node(NodeRecord record);
  void add_edge(std::string_view src, std::string_view dst, std::string_view iface,
                std::int64_t timestamp);
  /// Removes every (src, dst, iface) edge regardless of timestamp.
  std::size_t remove_edges(std::string_view src, std::string_view dst, std::string_view iface);
  void decommission_node(std::string_view id, std::int64_t timestamp);
  void set_status(std::string_view id, NodeStatus status);
  void set_attribute(std::string_view id, std::string_view name, double value);
  /// lastUpdated := max(lastUpdated, timestamp).
  void touch(std::string_view id, std::int64_t timestamp);
  void advance_clock(std::int64_t now);

  // Queries by id.
  bool contains(std::string_view id) const { return find_handle(id).has_value(); }
  bool contains_active(std::string_view id) const;
  bool is_live(std::string_view id) const;
  const NodeRecord& node(std::string_view id) const;
  const NodeRecord* find(std::string_view id) const;
  std::vector<EdgeRecord> out_edges(std::string_view id) const;
  std::vector<EdgeRecord> in_edges(std::string_view id) const;
  /// All stored edges, grouped by source in insertion order.
  std::vector<EdgeRecord> edges() const;
  /// Ids of every stored node (any status) of `cls` or a descendant, sorted.
  std::vector<NodeId> class_members(std::string_view cls) const;

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edge_count_; }
  std::int64_t clock() const { return clock_; }

  // Handle-level access for hot loops. Handles are insertion indices and are
  // stable across copies.
  std::optional<NodeHandle> find_handle(std::string_view id) const;
  const NodeRecord& record(NodeHandle h) const { return slot(h).record; }
  ClassId class_of(NodeHandle h) const { return slot(h).cls; }
  bool is_live(NodeHandle h) const { return slot(h).record.status != NodeStatus::Decommissioned; }
  std::span<const Link> out_links(NodeHandle h) const { return slot(h).out; }
  std::span<const Link> in_links(NodeHandle h) const { return slot(h).in; }
  /// Handles of stored nodes whose class descends from `cls`, insertion order.
  std::span<const NodeHandle> class_handles(ClassId cls) const;

  template <typename Fn>
  void for_each_node(Fn&& fn) const {
    for (NodeHandle h = 0; h < node_count_; ++h) fn(h, slot(h).record);
  }

  /// Live-view breadth-first region within `hops` of any seed (edges followed
  /// in both directions). Seeds must exist. Results are memoized per
  /// (seed set, hops) until the next mutation of this object.
  Subgraph extract_subgraph(std::span<const NodeId> seeds, int hops, bool memoize = true) const;

  Graph snapshot() const { return *this; }

  /// Approximate heap + inline bytes held by this graph.
  std::size_t footprint_bytes() const;
  /// Bytes this graph holds that are not shared with `base`.
  std::size_t unique_bytes(const Graph& base) const;

 private:
  static constexpr std::size_t kChunkBits = 6;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kChunkMask = kChunkSize - 1;

  struct Slot {
    NodeRecord record;
    ClassId cls = 0;
    std::vector<Link> out;
    std::vector<Link> in;
  };
  struct Chunk {
    std::array<std::shared_ptr<Slot>, kChunkSize> slots;
  };
  struct Index {
    std::unordered_map<std::string, NodeHandle> by_id;
    std::vector<std::vector<NodeHandle>> by_class;
  };
  struct Memo;

  const Slot& slot(NodeHandle h) const { return *chunks_[h >> kChunkBits]->slots[h & kChunkMask]; }
  Slot& mutable_slot(NodeHandle h);
  Index& mutable_index();
  NodeHandle require(std::string_view id) const;
  void invalidate();
  Subgraph compute_subgraph(std::span<const NodeId> seeds, int hops) const;
  static std::size_t slot_bytes(const Slot& s);

  std::vector<std::shared_ptr<Chunk>> chunks_;
  std::shared_ptr<Index> index_;
  std::shared_ptr<ClassHierarchy> classes_;
  std::size_t node_count_ = 0;
  std::size_t edge_count_ = 0;
  std::int64_t clock_ = 0;
  std::shared_ptr<Memo> memo_;
};

/// Hex SHA-256 over a canonical encoding: nodes sorted by id (class, status,
/// attributes, lastUpdated) followed by the sorted edge multiset. Independent
/// of insertion order and of the logical clock.
std::string graph_hash(const Graph& graph);

}  // namespace nkgov
