#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "nkgov/graph.hpp"

namespace nkgov {

// ---- Constraint kinds -------------------------------------------------------

/// Flags any live edge between the focus and a `peer_class` node, in either
/// direction. `iface == nullopt` matches every interface.
struct ForbiddenAdjacency {
  std::optional<std::string> iface;
  std::string peer_class;
  bool operator==(const ForbiddenAdjacency&) const = default;
};

/// Flags a focus with a directed live path of at most `max_depth` hops to a
/// `peer_class` node that passes through no `via_class` node.
struct RequiredMediation {
  std::string peer_class;
  std::string via_class;
  int max_depth = 4;
  bool operator==(const RequiredMediation&) const = default;
};

struct AttributeRange {
  std::string attribute;
  std::optional<double> min_inclusive;
  std::optional<double> max_inclusive;
  bool operator==(const AttributeRange&) const = default;
};

/// Only the node status is enumerable.
struct AttributeEnum {
  std::string attribute = "status";
  std::vector<NodeStatus> allowed;
  bool operator==(const AttributeEnum&) const = default;
};

/// Safe iff now - lastUpdated <= max_age_seconds.
struct Freshness {
  std::int64_t max_age_seconds = 15;
  bool operator==(const Freshness&) const = default;
};

/// Blast-radius bound: 100 * value / referenceValue must lie in
/// [min_percent, max_percent]. Nodes absent from the reference are exempt.
struct DeltaBound {
  std::string attribute;
  double min_percent = 80;
  double max_percent = 120;
  bool operator==(const DeltaBound&) const = default;
};

using Constraint = std::variant<ForbiddenAdjacency, RequiredMediation, AttributeRange,
                                AttributeEnum, Freshness, DeltaBound>;

enum class ConstraintFamily { Topological, Resource, State, Temporal, Delta };

ConstraintFamily family_of(const Constraint& c);
std::string_view kind_name(const Constraint& c);
std::string_view to_string(ConstraintFamily f);

struct PolicyShape {
  std::string id;
  std::string target_class;
  Constraint constraint;
  std::string message;

  ConstraintFamily family() const { return family_of(constraint); }
};

struct Violation {
  std::string shape_id;
  NodeId focus;
  std::string message;
  std::string detail;

  auto operator<=>(const Violation&) const = default;
  bool operator==(const Violation&) const = default;
};

class PolicySet;

struct ValidationReport {
  std::vector<Violation> violations;  // sorted by (shape, focus, detail)

  bool conforms() const { return violations.empty(); }
  /// True when every violation comes from a Freshness shape.
  bool only_freshness(const PolicySet& policies) const;
};

/// Shape counts per family. `total()` is the governance-rule count
/// (topological + resource + state); temporal and delta guardrails are
/// reported alongside and included in `all()`.
struct PolicyStats {
  int topological = 0;
  int resource = 0;
  int state = 0;
  int temporal = 0;
  int delta = 0;

  int total() const { return topological + resource + state; }
  int all() const { return total() + temporal + delta; }
  bool operator==(const PolicyStats&) const = default;
};

/// Parameter values used when a shape omits them.
struct PolicyDefaults {
  std::int64_t freshness_max_age = 15;
  double delta_theta = 20.0;
  int mediation_depth = 4;
};

/// Immutable, validated collection of shapes.
class PolicySet {
 public:
  PolicySet() = default;
  /// Validates every shape against `classes`; throws on the first defect.
  PolicySet(std::vector<PolicyShape> shapes, const ClassHierarchy& classes);

  std::span<const PolicyShape> shapes() const { return shapes_; }
  std::size_t size() const { return shapes_.size(); }
  bool empty() const { return shapes_.empty(); }
  const PolicyShape* find(std::string_view id) const;
  const PolicyShape& shape(std::string_view id) const;  // throws UnknownShape
  bool has_delta() const;
  PolicyStats stats() const;

  PolicySet without(std::string_view id) const;
  PolicySet filtered(ConstraintFamily family) const;

  /// Identifies this content; copies share it, every other set differs.
  std::uint64_t serial() const { return serial_; }

 private:
  std::vector<PolicyShape> shapes_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::uint64_t serial_ = next_serial();

  static std::uint64_t next_serial();
};

/// Parses `{"shapes": [{"id","targetClass","kind","params":{...},"message"}]}`.
/// A blank document yields an empty set.
PolicySet load_policies(std::string_view text, const ClassHierarchy& classes,
                        const PolicyDefaults& defaults = {},
                        std::string_view source = "<policies>");
PolicySet load_policies_file(const std::filesystem::path& path, const ClassHierarchy& classes,
                             const PolicyDefaults& defaults = {});
std::string dump_policies(const PolicySet& policies);

PolicyStats policy_stats(const PolicySet& policies);

/// Live nodes whose class is the shape's target class or a descendant, by id.
std::vector<NodeId> shape_targets(const PolicySet& policies, const Graph& graph,
                                  std::string_view shape_id);

struct ValidationOptions {
  std::int64_t now = 0;
  /// Committed state for DeltaBound shapes; required when any are present.
  const Graph* reference = nullptr;
  /// Restricts focus nodes to this set when present.
  std::optional<std::vector<NodeId>> scope;
};

ValidationReport validate(const Graph& graph, const PolicySet& policies,
                          const ValidationOptions& options);

std::string report_to_json(const ValidationReport& report, int indent = 2);

}  // namespace nkgov
