#include "nkgov/graph.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <tuple>
#include <unordered_set>

#include "nkgov/error.hpp"

namespace nkgov {

std::optional<double> NodeRecord::attribute(std::string_view name) const {
  auto it = attributes.find(std::string(name));
  if (it == attributes.end()) return std::nullopt;
  return it->second;
}

bool Subgraph::contains(std::string_view id) const { return find(id) != nullptr; }

const NodeRecord* Subgraph::find(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

struct Graph::Memo {
  std::mutex mutex;
  std::unordered_map<std::string, Subgraph> entries;
};

Graph::Graph() : Graph(ClassHierarchy::standard()) {}

Graph::Graph(ClassHierarchy classes)
    : index_(std::make_shared<Index>()),
      classes_(std::make_shared<ClassHierarchy>(std::move(classes))),
      memo_(std::make_shared<Memo>()) {}

Graph::Graph(const Graph& other)
    : chunks_(other.chunks_),
      index_(other.index_),
      classes_(other.classes_),
      node_count_(other.node_count_),
      edge_count_(other.edge_count_),
      clock_(other.clock_),
      memo_(std::make_shared<Memo>()) {}

Graph& Graph::operator=(const Graph& other) {
  if (this != &other) {
    chunks_ = other.chunks_;
    index_ = other.index_;
    classes_ = other.classes_;
    node_count_ = other.node_count_;
    edge_count_ = other.edge_count_;
    clock_ = other.clock_;
    memo_ = std::make_shared<Memo>();
  }
  return *this;
}

ClassId Graph::add_class(std::string_view name, std::string_view parent) {
  if (classes_.use_count() > 1) classes_ = std::make_shared<ClassHierarchy>(*classes_);
  return classes_->add(name, parent);
}

Graph::Slot& Graph::mutable_slot(NodeHandle h) {
  auto& chunk = chunks_[h >> kChunkBits];
  if (chunk.use_count() > 1) chunk = std::make_shared<Chunk>(*chunk);
  auto& s = chunk->slots[h & kChunkMask];
  if (s.use_count() > 1) s = std::make_shared<Slot>(*s);
  return *s;
}

Graph::Index& Graph::mutable_index() {
  if (index_.use_count() > 1) index_ = std::make_shared<Index>(*index_);
  return *index_;
}

void Graph::invalidate() {
  if (!memo_) {
    memo_ = std::make_shared<Memo>();
    return;
  }
  std::lock_guard lock(memo_->mutex);
  memo_->entries.clear();
}

NodeHandle Graph::require(std::string_view id) const {
  if (auto h = find_handle(id)) return *h;
  throw Error(ErrorCode::UnknownNode, "'" + std::string(id) + "'");
}

std::optional<NodeHandle> Graph::find_handle(std::string_view id) const {
  auto it = index_->by_id.find(std::string(id));
  if (it == index_->by_id.end()) return std::nullopt;
  return it->second;
}

void Graph::add_node(NodeRecord record) {
  if (record.id.empty()) throw Error(ErrorCode::UnknownNode, "empty node id");
  if (contains(record.id)) throw Error(ErrorCode::DuplicateId, "'" + record.id + "'");
  const ClassId cls = classes_->id(record.cls);
  for (const auto& [name, value] : record.attributes) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::InvalidBounds,
                  "attribute '" + name + "' of '" + record.id + "' is not finite");
    }
  }

  const auto h = static_cast<NodeHandle>(node_count_);
  auto& index = mutable_index();
  index.by_id.emplace(record.id, h);
  if (index.by_class.size() < classes_->size()) index.by_class.resize(classes_->size());
  for (ClassId c : classes_->lineage(cls)) index.by_class[c].push_back(h);

  if ((h >> kChunkBits) >= chunks_.size()) chunks_.push_back(std::make_shared<Chunk>());
  auto& chunk = chunks_[h >> kChunkBits];
  if (chunk.use_count() > 1) chunk = std::make_shared<Chunk>(*chunk);
  auto s = std::make_shared<Slot>();
  s->record = std::move(record);
  s->cls = cls;
  chunk->slots[h & kChunkMask] = std::move(s);
  ++node_count_;
  invalidate();
}

void Graph::add_edge(std::string_view src, std::string_view dst, std::string_view iface,
                     std::int64_t timestamp) {
  const auto s = find_handle(src);
  const auto d = find_handle(dst);
  if (!s || !d) {
    throw Error(ErrorCode::UnknownEndpoint,
                "edge " + std::string(src) + " -> " + std::string(dst) + ": '" +
                    std::string(!s ? src : dst) + "' is not in the graph");
  }
  const auto i = parse_interface(iface);
  if (!i) throw Error(ErrorCode::UnknownInterface, "'" + std::string(iface) + "'");
  mutable_slot(*s).out.push_back(Link{*d, *i, timestamp});
  mutable_slot(*d).in.push_back(Link{*s, *i, timestamp});
  ++edge_count_;
  invalidate();
}

std::size_t Graph::remove_edges(std::string_view src, std::string_view dst,
                                std::string_view iface) {
  const auto s = find_handle(src);
  const auto d = find_handle(dst);
  const auto i = parse_interface(iface);
  if (!s || !d || !i) return 0;
  auto matches = [&](NodeHandle peer) {
    return [peer, i](const Link& l) { return l.peer == peer && l.iface == *i; };
  };
  const auto& out = slot(*s).out;
  const auto n = static_cast<std::size_t>(std::count_if(out.begin(), out.end(), matches(*d)));
  if (n == 0) return 0;
  std::erase_if(mutable_slot(*s).out, matches(*d));
  std::erase_if(mutable_slot(*d).in, matches(*s));
  edge_count_ -= n;
  invalidate();
  return n;
}

void Graph::decommission_node(std::string_view id, std::int64_t timestamp) {
  auto& s = mutable_slot(require(id));
  s.record.status = NodeStatus::Decommissioned;
  s.record.last_updated = std::max(s.record.last_updated, timestamp);
  invalidate();
}

void Graph::set_status(std::string_view id, NodeStatus status) {
  mutable_slot(require(id)).record.status = status;
  invalidate();
}

void Graph::set_attribute(std::string_view id, std::string_view name, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidBounds, "attribute '" + std::string(name) + "' is not finite");
  }
  mutable_slot(require(id)).record.attributes[std::string(name)] = value;
  invalidate();
}

void Graph::touch(std::string_view id, std::int64_t timestamp) {
  const auto h = require(id);
  if (slot(h).record.last_updated >= timestamp) return;
  mutable_slot(h).record.last_updated = timestamp;
  invalidate();
}

void Graph::advance_clock(std::int64_t now) { clock_ = std::max(clock_, now); }

bool Graph::contains_active(std::string_view id) const {
  const auto h = find_handle(id);
  if (!h) return false;
  const auto st = record(*h).status;
  return st == NodeStatus::Active || st == NodeStatus::Standby;
}

bool Graph::is_live(std::string_view id) const {
  const auto h = find_handle(id);
  return h && is_live(*h);
}

const NodeRecord& Graph::node(std::string_view id) const { return record(require(id)); }

const NodeRecord* Graph::find(std::string_view id) const {
  const auto h = find_handle(id);
  return h ? &record(*h) : nullptr;
}

std::vector<EdgeRecord> Graph::out_edges(std::string_view id) const {
  const auto h = require(id);
  std::vector<EdgeRecord> out;
  for (const auto& l : slot(h).out) {
    out.push_back({record(h).id, record(l.peer).id, std::string(interface_name(l.iface)),
                   l.timestamp});
  }
  return out;
}

std::vector<EdgeRecord> Graph::in_edges(std::string_view id) const {
  const auto h = require(id);
  std::vector<EdgeRecord> out;
  for (const auto& l : slot(h).in) {
    out.push_back({record(l.peer).id, record(h).id, std::string(interface_name(l.iface)),
                   l.timestamp});
  }
  return out;
}

std::vector<EdgeRecord> Graph::edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(edge_count_);
  for (NodeHandle h = 0; h < node_count_; ++h) {
    for (const auto& l : slot(h).out) {
      out.push_back({record(h).id, record(l.peer).id, std::string(interface_name(l.iface)),
                     l.timestamp});
    }
  }
  return out;
}

std::span<const NodeHandle> Graph::class_handles(ClassId cls) const {
  if (cls >= index_->by_class.size()) return {};
  return index_->by_class[cls];
}

std::vector<NodeId> Graph::class_members(std::string_view cls) const {
  std::vector<NodeId> out;
  for (NodeHandle h : class_handles(classes_->id(cls))) out.push_back(record(h).id);
  std::sort(out.begin(), out.end());
  return out;
}

Subgraph Graph::extract_subgraph(std::span<const NodeId> seeds, int hops, bool memoize) const {
  if (seeds.empty()) throw Error(ErrorCode::UnknownNode, "empty seed set");
  for (const auto& s : seeds) require(s);
  if (!memoize) return compute_subgraph(seeds, hops);

  std::vector<NodeId> key_parts(seeds.begin(), seeds.end());
  std::sort(key_parts.begin(), key_parts.end());
  key_parts.erase(std::unique(key_parts.begin(), key_parts.end()), key_parts.end());
  std::string key = std::to_string(hops);
  for (const auto& s : key_parts) {
    key += '\x1f';
    key += s;
  }
  {
    std::lock_guard lock(memo_->mutex);
    if (auto it = memo_->entries.find(key); it != memo_->entries.end()) return it->second;
  }
  Subgraph result = compute_subgraph(seeds, hops);
  std::lock_guard lock(memo_->mutex);
  memo_->entries.emplace(std::move(key), result);
  return result;
}

Subgraph Graph::compute_subgraph(std::span<const NodeId> seeds, int hops) const {
  auto by_id = [this](NodeHandle a, NodeHandle b) { return record(a).id < record(b).id; };

  std::vector<NodeHandle> order;
  std::unordered_set<NodeHandle> seen;
  std::vector<NodeHandle> level;
  for (const auto& s : seeds) {
    const auto h = *find_handle(s);
    if (is_live(h) && seen.insert(h).second) level.push_back(h);
  }
  std::sort(level.begin(), level.end(), by_id);
  order.insert(order.end(), level.begin(), level.end());

  for (int depth = 0; depth < hops && !level.empty(); ++depth) {
    std::vector<NodeHandle> next;
    auto visit = [&](NodeHandle peer) {
      if (is_live(peer) && seen.insert(peer).second) next.push_back(peer);
    };
    for (NodeHandle h : level) {
      for (const auto& l : slot(h).out) visit(l.peer);
      for (const auto& l : slot(h).in) visit(l.peer);
    }
    std::sort(next.begin(), next.end(), by_id);
    order.insert(order.end(), next.begin(), next.end());
    level = std::move(next);
  }

  Subgraph sub;
  sub.node_ids.reserve(order.size());
  sub.nodes.reserve(order.size());
  for (NodeHandle h : order) {
    sub.node_ids.push_back(record(h).id);
    sub.nodes.push_back(record(h));
  }
  for (NodeHandle h : order) {
    for (const auto& l : slot(h).out) {
      if (seen.contains(l.peer)) {
        sub.edges.push_back({record(h).id, record(l.peer).id,
                             std::string(interface_name(l.iface)), l.timestamp});
      }
    }
  }
  return sub;
}

std::size_t Graph::slot_bytes(const Slot& s) {
  // Rough std::map node overhead: three pointers plus colour, rounded.
  constexpr std::size_t kMapNodeOverhead = 32;
  std::size_t bytes = sizeof(Slot) + s.record.id.capacity() + s.record.cls.capacity();
  for (const auto& [k, v] : s.record.attributes) {
    bytes += kMapNodeOverhead + sizeof(std::pair<const std::string, double>) + k.capacity();
  }
  bytes += (s.out.capacity() + s.in.capacity()) * sizeof(Link);
  return bytes;
}

std::size_t Graph::footprint_bytes() const {
  std::size_t bytes = sizeof(Graph) + chunks_.capacity() * sizeof(std::shared_ptr<Chunk>);
  for (const auto& c : chunks_) {
    bytes += sizeof(Chunk);
    for (const auto& s : c->slots) {
      if (s) bytes += slot_bytes(*s);
    }
  }
  bytes += sizeof(Index) + index_->by_id.size() * (sizeof(std::string) + 32);
  for (const auto& v : index_->by_class) bytes += v.capacity() * sizeof(NodeHandle);
  return bytes;
}

std::size_t Graph::unique_bytes(const Graph& base) const {
  std::size_t bytes = sizeof(Graph) + chunks_.capacity() * sizeof(std::shared_ptr<Chunk>);
  for (std::size_t ci = 0; ci < chunks_.size(); ++ci) {
    const bool base_has = ci < base.chunks_.size();
    if (base_has && chunks_[ci] == base.chunks_[ci]) continue;
    bytes += sizeof(Chunk);
    for (std::size_t si = 0; si < kChunkSize; ++si) {
      const auto& s = chunks_[ci]->slots[si];
      if (!s) continue;
      if (base_has && base.chunks_[ci]->slots[si] == s) continue;
      bytes += slot_bytes(*s);
    }
  }
  if (index_ != base.index_) {
    bytes += sizeof(Index) + index_->by_id.size() * (sizeof(std::string) + 32);
    for (const auto& v : index_->by_class) bytes += v.capacity() * sizeof(NodeHandle);
  }
  return bytes;
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void field(std::string_view s) {
    // Length-prefixed so that adjacent fields cannot alias.
    const std::uint64_t n = s.size();
    EVP_DigestUpdate(ctx_, &n, sizeof(n));
    EVP_DigestUpdate(ctx_, s.data(), s.size());
  }
  void field(std::int64_t v) { EVP_DigestUpdate(ctx_, &v, sizeof(v)); }
  void field(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
    field(std::string_view(buf, static_cast<std::size_t>(n)));
  }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, digest, &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 0xf];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string graph_hash(const Graph& graph) {
  std::vector<NodeHandle> order(graph.node_count());
  for (NodeHandle h = 0; h < order.size(); ++h) order[h] = h;
  std::sort(order.begin(), order.end(), [&](NodeHandle a, NodeHandle b) {
    return graph.record(a).id < graph.record(b).id;
  });

  Sha256 sha;
  sha.field(std::string_view("nodes"));
  for (NodeHandle h : order) {
    const auto& r = graph.record(h);
    sha.field(std::string_view(r.id));
    sha.field(std::string_view(r.cls));
    sha.field(to_string(r.status));
    sha.field(static_cast<std::int64_t>(r.attributes.size()));
    for (const auto& [k, v] : r.attributes) {
      sha.field(std::string_view(k));
      sha.field(v);
    }
    sha.field(r.last_updated);
  }

  using EdgeKey = std::tuple<const std::string*, const std::string*, IfaceId, std::int64_t>;
  std::vector<EdgeKey> edges;
  edges.reserve(graph.edge_count());
  for (NodeHandle h = 0; h < graph.node_count(); ++h) {
    for (const auto& l : graph.out_links(h)) {
      edges.emplace_back(&graph.record(h).id, &graph.record(l.peer).id, l.iface, l.timestamp);
    }
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeKey& a, const EdgeKey& b) {
    return std::tie(*std::get<0>(a), *std::get<1>(a), std::get<2>(a), std::get<3>(a)) <
           std::tie(*std::get<0>(b), *std::get<1>(b), std::get<2>(b), std::get<3>(b));
  });
  sha.field(std::string_view("edges"));
  for (const auto& [s, d, i, t] : edges) {
    sha.field(std::string_view(*s));
    sha.field(std::string_view(*d));
    sha.field(interface_name(i));
    sha.field(t);
  }
  return sha.hex();
}

}  // namespace nkgov
