#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nkgov {

using NodeId = std::string;
using ClassId = std::uint16_t;
using IfaceId = std::uint8_t;

enum class NodeStatus : std::uint8_t { Active, Standby, Failed, Decommissioned };

std::string_view to_string(NodeStatus status);
std::optional<NodeStatus> parse_status(std::string_view text);

// Edge labels admitted by the store: control/user-plane reference points plus
// the inventory relations (transport, measurement, slice configuration).
inline constexpr std::array<std::string_view, 8> kInterfaces = {
    "N2", "N3", "N4", "N6", "N11", "transportLink", "measurementPoint", "s-nssai-config"};

std::optional<IfaceId> parse_interface(std::string_view name);
std::string_view interface_name(IfaceId id);

namespace classes {
inline constexpr std::string_view kTop = "Top";
inline constexpr std::string_view kManagedFunction = "ManagedFunction";
inline constexpr std::string_view kAmf = "AMFFunction";
inline constexpr std::string_view kSmf = "SMFFunction";
inline constexpr std::string_view kUpf = "UPFFunction";
inline constexpr std::string_view kGnb = "GnbFunction";
inline constexpr std::string_view kTransport = "TransportNode";
inline constexpr std::string_view kSlice = "NetworkSlice";
}  // namespace classes

/// Single-rooted class tree. Class ids are dense and stable for the lifetime
/// of the hierarchy; a class is only ever added below an existing parent, so
/// the tree stays acyclic by construction.
class ClassHierarchy {
 public:
  /// Root `Top`; `ManagedFunction` with the NF subclasses and `TransportNode`;
  /// `NetworkSlice` directly under `Top`.
  static ClassHierarchy standard();

  explicit ClassHierarchy(std::string root);

  /// Adds `name` under `parent`. Re-adding an existing class with the same
  /// parent is a no-op; a different parent is rejected.
  ClassId add(std::string_view name, std::string_view parent);

  bool contains(std::string_view name) const;
  std::optional<ClassId> find(std::string_view name) const;
  ClassId id(std::string_view name) const;  // throws UnknownClass
  const std::string& name(ClassId id) const { return names_[id]; }
  std::optional<ClassId> parent(ClassId id) const;
  ClassId root() const { return 0; }
  std::size_t size() const { return names_.size(); }
  /// Changes whenever a class is added; equal versions mean equal content.
  std::uint64_t version() const { return version_; }

  bool is_a(ClassId cls, ClassId ancestor) const;
  bool is_a(std::string_view cls, std::string_view ancestor) const;

  /// `cls` followed by its ancestors up to the root.
  std::vector<ClassId> lineage(ClassId cls) const;
  /// Every class in the subtree rooted at `cls`, including itself.
  std::vector<ClassId> subtree(ClassId cls) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> parents_;  // -1 for the root
  std::unordered_map<std::string, ClassId> by_name_;
  std::uint64_t version_ = 0;
};

}  // namespace nkgov
