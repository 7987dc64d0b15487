#include "nkgov/vocabulary.hpp"

#include <atomic>

#include "nkgov/error.hpp"

namespace nkgov {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownInterface: return "UnknownInterface";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::UnknownShape: return "UnknownShape";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::UnknownActionKind: return "UnknownActionKind";
    case ErrorCode::UnknownStatus: return "UnknownStatus";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::InsufficientSizes: return "InsufficientSizes";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(NodeStatus status) {
  switch (status) {
    case NodeStatus::Active: return "ACTIVE";
    case NodeStatus::Standby: return "STANDBY";
    case NodeStatus::Failed: return "FAILED";
    case NodeStatus::Decommissioned: return "DECOMMISSIONED";
  }
  return "ACTIVE";
}

std::optional<NodeStatus> parse_status(std::string_view text) {
  if (text == "ACTIVE") return NodeStatus::Active;
  if (text == "STANDBY") return NodeStatus::Standby;
  if (text == "FAILED") return NodeStatus::Failed;
  if (text == "DECOMMISSIONED") return NodeStatus::Decommissioned;
  return std::nullopt;
}

std::optional<IfaceId> parse_interface(std::string_view name) {
  for (std::size_t i = 0; i < kInterfaces.size(); ++i) {
    if (kInterfaces[i] == name) return static_cast<IfaceId>(i);
  }
  return std::nullopt;
}

std::string_view interface_name(IfaceId id) { return kInterfaces.at(id); }

ClassHierarchy ClassHierarchy::standard() {
  using namespace classes;
  ClassHierarchy h{std::string(kTop)};
  h.add(kManagedFunction, kTop);
  h.add(kAmf, kManagedFunction);
  h.add(kSmf, kManagedFunction);
  h.add(kUpf, kManagedFunction);
  h.add(kGnb, kManagedFunction);
  h.add(kTransport, kManagedFunction);
  h.add(kSlice, kTop);
  return h;
}

namespace {
std::atomic<std::uint64_t> hierarchy_versions{0};
}

ClassHierarchy::ClassHierarchy(std::string root) : version_(++hierarchy_versions) {
  by_name_.emplace(root, 0);
  names_.push_back(std::move(root));
  parents_.push_back(-1);
}

ClassId ClassHierarchy::add(std::string_view name, std::string_view parent) {
  if (name.empty()) throw Error(ErrorCode::UnknownClass, "empty class name");
  const auto parent_id = find(parent);
  if (!parent_id) {
    throw Error(ErrorCode::UnknownClass,
                "parent '" + std::string(parent) + "' of class '" + std::string(name) + "'");
  }
  if (auto existing = find(name)) {
    if (parents_[*existing] != static_cast<int>(*parent_id)) {
      throw Error(ErrorCode::UnknownClass, "class '" + std::string(name) +
                                               "' already declared with a different parent");
    }
    return *existing;
  }
  const auto id = static_cast<ClassId>(names_.size());
  names_.emplace_back(name);
  parents_.push_back(*parent_id);
  by_name_.emplace(std::string(name), id);
  version_ = ++hierarchy_versions;
  return id;
}

bool ClassHierarchy::contains(std::string_view name) const { return find(name).has_value(); }

std::optional<ClassId> ClassHierarchy::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

ClassId ClassHierarchy::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw Error(ErrorCode::UnknownClass, "'" + std::string(name) + "'");
}

std::optional<ClassId> ClassHierarchy::parent(ClassId id) const {
  if (parents_.at(id) < 0) return std::nullopt;
  return static_cast<ClassId>(parents_[id]);
}

bool ClassHierarchy::is_a(ClassId cls, ClassId ancestor) const {
  int cur = cls;
  while (cur >= 0) {
    if (cur == ancestor) return true;
    cur = parents_[cur];
  }
  return false;
}

bool ClassHierarchy::is_a(std::string_view cls, std::string_view ancestor) const {
  auto c = find(cls);
  auto a = find(ancestor);
  return c && a && is_a(*c, *a);
}

std::vector<ClassId> ClassHierarchy::lineage(ClassId cls) const {
  std::vector<ClassId> out;
  for (int cur = cls; cur >= 0; cur = parents_[cur]) out.push_back(static_cast<ClassId>(cur));
  return out;
}

std::vector<ClassId> ClassHierarchy::subtree(ClassId cls) const {
  std::vector<ClassId> out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (is_a(static_cast<ClassId>(i), cls)) out.push_back(static_cast<ClassId>(i));
  }
  return out;
}

}  // namespace nkgov
