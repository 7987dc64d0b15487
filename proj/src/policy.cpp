#include "nkgov/policy.hpp"

#include <atomic>
#include <cmath>

#include "json_support.hpp"
#include "nkgov/error.hpp"
#include "nkgov/topology_io.hpp"

namespace nkgov {

using detail::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_class(const ClassHierarchy& classes, const std::string& name, const std::string& ctx) {
  if (!classes.contains(name)) {
    throw Error(ErrorCode::UnknownClass, ctx + ": unknown class '" + name + "'");
  }
}

void check_shape(const PolicyShape& s, const ClassHierarchy& classes) {
  const std::string ctx = "shape '" + s.id + "'";
  if (s.id.empty()) throw Error(ErrorCode::ParseError, "shape with empty id");
  if (s.message.empty()) throw Error(ErrorCode::ParseError, ctx + ": empty message");
  check_class(classes, s.target_class, ctx);
  std::visit(
      overloaded{
          [&](const ForbiddenAdjacency& c) {
            check_class(classes, c.peer_class, ctx);
            if (c.iface && !parse_interface(*c.iface)) {
              throw Error(ErrorCode::UnknownInterface, ctx + ": '" + *c.iface + "'");
            }
          },
          [&](const RequiredMediation& c) {
            check_class(classes, c.peer_class, ctx);
            check_class(classes, c.via_class, ctx);
            if (c.max_depth <= 0) throw Error(ErrorCode::InvalidBounds, ctx + ": maxDepth must be positive");
          },
          [&](const AttributeRange& c) {
            if (c.attribute.empty()) throw Error(ErrorCode::ParseError, ctx + ": empty attribute");
            if ((c.min_inclusive && !std::isfinite(*c.min_inclusive)) ||
                (c.max_inclusive && !std::isfinite(*c.max_inclusive))) {
              throw Error(ErrorCode::InvalidBounds, ctx + ": bounds must be finite");
            }
            if (c.min_inclusive && c.max_inclusive && *c.min_inclusive > *c.max_inclusive) {
              throw Error(ErrorCode::InvalidBounds, ctx + ": minInclusive exceeds maxInclusive");
            }
          },
          [&](const AttributeEnum& c) {
            if (c.attribute != "status") {
              throw Error(ErrorCode::ParseError, ctx + ": only 'status' is enumerable");
            }
            if (c.allowed.empty()) throw Error(ErrorCode::ParseError, ctx + ": empty allowed set");
          },
          [&](const Freshness& c) {
            if (c.max_age_seconds <= 0) {
              throw Error(ErrorCode::InvalidBounds, ctx + ": maxAgeSeconds must be positive");
            }
          },
          [&](const DeltaBound& c) {
            if (c.attribute.empty()) throw Error(ErrorCode::ParseError, ctx + ": empty attribute");
            if (!(std::isfinite(c.min_percent) && std::isfinite(c.max_percent) &&
                  0 < c.min_percent && c.min_percent < 100 && 100 < c.max_percent)) {
              throw Error(ErrorCode::InvalidBounds,
                          ctx + ": need 0 < minPercent < 100 < maxPercent");
            }
          },
      },
      s.constraint);
}

std::optional<double> opt_number(const json& params, const char* key, const std::string& ctx) {
  auto it = params.find(key);
  if (it == params.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorCode::ParseError, ctx + ": '" + key + "' must be a number");
  return it->get<double>();
}

Constraint parse_constraint(const std::string& kind, const json& params, const PolicyDefaults& d,
                            const std::string& ctx) {
  if (kind == "ForbiddenAdjacency") {
    ForbiddenAdjacency c;
    c.peer_class = detail::get_field<std::string>(params, "peerClass", ctx);
    if (params.contains("iface")) {
      auto iface = detail::get_field<std::string>(params, "iface", ctx);
      if (iface != "*") c.iface = std::move(iface);
    }
    return c;
  }
  if (kind == "RequiredMediation") {
    RequiredMediation c;
    c.peer_class = detail::get_field<std::string>(params, "peerClass", ctx);
    c.via_class = detail::get_field<std::string>(params, "viaClass", ctx);
    c.max_depth = params.contains("maxDepth") ? detail::get_field<int>(params, "maxDepth", ctx)
                                              : d.mediation_depth;
    return c;
  }
  if (kind == "AttributeRange") {
    AttributeRange c;
    c.attribute = detail::get_field<std::string>(params, "attribute", ctx);
    c.min_inclusive = opt_number(params, "minInclusive", ctx);
    c.max_inclusive = opt_number(params, "maxInclusive", ctx);
    return c;
  }
  if (kind == "AttributeEnum") {
    AttributeEnum c;
    c.attribute = params.contains("attribute")
                      ? detail::get_field<std::string>(params, "attribute", ctx)
                      : std::string("status");
    for (const auto& v : detail::get_field<std::vector<std::string>>(params, "allowed", ctx)) {
      auto st = parse_status(v);
      if (!st) throw Error(ErrorCode::UnknownStatus, ctx + ": '" + v + "'");
      c.allowed.push_back(*st);
    }
    return c;
  }
  if (kind == "Freshness") {
    Freshness c;
    c.max_age_seconds = params.contains("maxAgeSeconds")
                            ? detail::get_field<std::int64_t>(params, "maxAgeSeconds", ctx)
                            : d.freshness_max_age;
    return c;
  }
  if (kind == "DeltaBound") {
    DeltaBound c;
    c.attribute = detail::get_field<std::string>(params, "attribute", ctx);
    c.min_percent = opt_number(params, "minPercent", ctx).value_or(100.0 - d.delta_theta);
    c.max_percent = opt_number(params, "maxPercent", ctx).value_or(100.0 + d.delta_theta);
    return c;
  }
  throw Error(ErrorCode::ParseError, ctx + ": unknown constraint kind '" + kind + "'");
}

nlohmann::ordered_json params_to_json(const Constraint& constraint) {
  using ojson = nlohmann::ordered_json;
  return std::visit(
      overloaded{
          [](const ForbiddenAdjacency& c) {
            return ojson{{"iface", c.iface.value_or("*")}, {"peerClass", c.peer_class}};
          },
          [](const RequiredMediation& c) {
            return ojson{{"peerClass", c.peer_class},
                         {"viaClass", c.via_class},
                         {"maxDepth", c.max_depth}};
          },
          [](const AttributeRange& c) {
            ojson j{{"attribute", c.attribute}};
            if (c.min_inclusive) j["minInclusive"] = *c.min_inclusive;
            if (c.max_inclusive) j["maxInclusive"] = *c.max_inclusive;
            return j;
          },
          [](const AttributeEnum& c) {
            ojson allowed = ojson::array();
            for (auto st : c.allowed) allowed.push_back(std::string(to_string(st)));
            return ojson{{"attribute", c.attribute}, {"allowed", allowed}};
          },
          [](const Freshness& c) { return ojson{{"maxAgeSeconds", c.max_age_seconds}}; },
          [](const DeltaBound& c) {
            return ojson{{"attribute", c.attribute},
                         {"minPercent", c.min_percent},
                         {"maxPercent", c.max_percent}};
          },
      },
      constraint);
}

}  // namespace

ConstraintFamily family_of(const Constraint& c) {
  return std::visit(overloaded{
                        [](const ForbiddenAdjacency&) { return ConstraintFamily::Topological; },
                        [](const RequiredMediation&) { return ConstraintFamily::Topological; },
                        [](const AttributeRange&) { return ConstraintFamily::Resource; },
                        [](const AttributeEnum&) { return ConstraintFamily::State; },
                        [](const Freshness&) { return ConstraintFamily::Temporal; },
                        [](const DeltaBound&) { return ConstraintFamily::Delta; },
                    },
                    c);
}

std::string_view kind_name(const Constraint& c) {
  static constexpr std::string_view kNames[] = {"ForbiddenAdjacency", "RequiredMediation",
                                                "AttributeRange",     "AttributeEnum",
                                                "Freshness",          "DeltaBound"};
  return kNames[c.index()];
}

std::string_view to_string(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::Topological: return "topological";
    case ConstraintFamily::Resource: return "resource";
    case ConstraintFamily::State: return "state";
    case ConstraintFamily::Temporal: return "temporal";
    case ConstraintFamily::Delta: return "delta";
  }
  return "topological";
}

PolicySet::PolicySet(std::vector<PolicyShape> shapes, const ClassHierarchy& classes)
    : shapes_(std::move(shapes)) {
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    check_shape(shapes_[i], classes);
    if (!by_id_.emplace(shapes_[i].id, i).second) {
      throw Error(ErrorCode::ParseError, "duplicate shape id '" + shapes_[i].id + "'");
    }
  }
}

std::uint64_t PolicySet::next_serial() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

const PolicyShape* PolicySet::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &shapes_[it->second];
}

const PolicyShape& PolicySet::shape(std::string_view id) const {
  if (const auto* s = find(id)) return *s;
  throw Error(ErrorCode::UnknownShape, "'" + std::string(id) + "'");
}

bool PolicySet::has_delta() const {
  for (const auto& s : shapes_) {
    if (std::holds_alternative<DeltaBound>(s.constraint)) return true;
  }
  return false;
}

PolicyStats PolicySet::stats() const {
  PolicyStats st;
  for (const auto& s : shapes_) {
    switch (s.family()) {
      case ConstraintFamily::Topological: ++st.topological; break;
      case ConstraintFamily::Resource: ++st.resource; break;
      case ConstraintFamily::State: ++st.state; break;
      case ConstraintFamily::Temporal: ++st.temporal; break;
      case ConstraintFamily::Delta: ++st.delta; break;
    }
  }
  return st;
}

PolicySet PolicySet::without(std::string_view id) const {
  PolicySet out;
  for (const auto& s : shapes_) {
    if (s.id == id) continue;
    out.by_id_.emplace(s.id, out.shapes_.size());
    out.shapes_.push_back(s);
  }
  return out;
}

PolicySet PolicySet::filtered(ConstraintFamily family) const {
  PolicySet out;
  for (const auto& s : shapes_) {
    if (s.family() != family) continue;
    out.by_id_.emplace(s.id, out.shapes_.size());
    out.shapes_.push_back(s);
  }
  return out;
}

PolicyStats policy_stats(const PolicySet& policies) { return policies.stats(); }

PolicySet load_policies(std::string_view text, const ClassHierarchy& classes,
                        const PolicyDefaults& defaults, std::string_view source) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  const json doc = detail::parse_json(text, source);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, std::string(source) + ": not an object");
  auto it = doc.find("shapes");
  if (it == doc.end()) return {};
  if (!it->is_array()) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": 'shapes' must be an array");
  }

  const auto lines = detail::element_lines(text, "shapes");
  std::vector<PolicyShape> shapes;
  shapes.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& entry = (*it)[i];
    const auto ctx = detail::where(source, lines, i);
    PolicyShape shape;
    shape.id = detail::get_field<std::string>(entry, "id", ctx);
    shape.target_class = detail::get_field<std::string>(entry, "targetClass", ctx);
    shape.message = detail::get_field<std::string>(entry, "message", ctx);
    if (entry.contains("severity") &&
        detail::get_field<std::string>(entry, "severity", ctx) != "VIOLATION") {
      throw Error(ErrorCode::ParseError, ctx + ": severity must be VIOLATION");
    }
    const auto kind = detail::get_field<std::string>(entry, "kind", ctx);
    const json params = entry.contains("params") ? entry.at("params") : json::object();
    if (!params.is_object()) throw Error(ErrorCode::ParseError, ctx + ": params must be an object");
    shape.constraint = parse_constraint(kind, params, defaults, ctx + " shape '" + shape.id + "'");
    try {
      check_shape(shape, classes);
    } catch (const Error& e) {
      throw Error(e.code(), ctx + ": " + e.detail());
    }
    shapes.push_back(std::move(shape));
  }
  try {
    return PolicySet(std::move(shapes), classes);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(source) + ": " + e.detail());
  }
}

PolicySet load_policies_file(const std::filesystem::path& path, const ClassHierarchy& classes,
                             const PolicyDefaults& defaults) {
  return load_policies(read_text_file(path), classes, defaults, path.string());
}

std::string dump_policies(const PolicySet& policies) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["shapes"] = ojson::array();
  for (const auto& s : policies.shapes()) {
    doc["shapes"].push_back({{"id", s.id},
                             {"targetClass", s.target_class},
                             {"kind", std::string(kind_name(s.constraint))},
                             {"params", params_to_json(s.constraint)},
                             {"message", s.message}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace nkgov
