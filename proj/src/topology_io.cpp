#include "nkgov/topology_io.hpp"

#include <fstream>
#include <sstream>

#include "json_support.hpp"

namespace nkgov {

using detail::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "short write to '" + path.string() + "'");
}

Graph load_topology(std::string_view text, std::string_view source) {
  const json doc = detail::parse_json(text, source);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, std::string(source) + ": not an object");

  Graph graph;
  std::int64_t newest = 0;

  auto section = [&](const char* key) -> const json* {
    auto it = doc.find(key);
    if (it == doc.end()) return nullptr;
    if (!it->is_array()) {
      throw Error(ErrorCode::ParseError,
                  std::string(source) + ": '" + key + "' must be an array");
    }
    return &*it;
  };

  if (const json* classes = section("classes")) {
    const auto lines = detail::element_lines(text, "classes");
    for (std::size_t i = 0; i < classes->size(); ++i) {
      const auto ctx = detail::where(source, lines, i);
      const auto& c = (*classes)[i];
      const auto name = detail::get_field<std::string>(c, "name", ctx);
      const auto parent = detail::get_field<std::string>(c, "parent", ctx);
      try {
        graph.add_class(name, parent);
      } catch (const Error& e) {
        throw Error(e.code(), ctx + ": " + e.detail());
      }
    }
  }

  if (const json* nodes = section("nodes")) {
    const auto lines = detail::element_lines(text, "nodes");
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto ctx = detail::where(source, lines, i);
      const auto& n = (*nodes)[i];
      NodeRecord rec;
      rec.id = detail::get_field<std::string>(n, "id", ctx);
      rec.cls = detail::get_field<std::string>(n, "class", ctx);
      if (!graph.classes().contains(rec.cls)) {
        throw Error(ErrorCode::UnknownClass,
                    ctx + ": node '" + rec.id + "' has unknown class '" + rec.cls + "'");
      }
      const auto status_text =
          n.contains("status") ? detail::get_field<std::string>(n, "status", ctx) : "ACTIVE";
      const auto status = parse_status(status_text);
      if (!status) {
        throw Error(ErrorCode::UnknownStatus,
                    ctx + ": node '" + rec.id + "' has unknown status '" + status_text + "'");
      }
      rec.status = *status;
      if (auto a = n.find("attributes"); a != n.end()) {
        if (!a->is_object()) throw Error(ErrorCode::ParseError, ctx + ": attributes must be an object");
        for (const auto& [k, v] : a->items()) {
          if (!v.is_number()) {
            throw Error(ErrorCode::ParseError, ctx + ": attribute '" + k + "' is not a number");
          }
          rec.attributes[k] = v.get<double>();
        }
      }
      rec.last_updated =
          n.contains("lastUpdated") ? detail::get_field<std::int64_t>(n, "lastUpdated", ctx) : 0;
      newest = std::max(newest, rec.last_updated);
      try {
        graph.add_node(std::move(rec));
      } catch (const Error& e) {
        throw Error(e.code(), ctx + ": " + e.detail());
      }
    }
  }

  if (const json* edges = section("edges")) {
    const auto lines = detail::element_lines(text, "edges");
    for (std::size_t i = 0; i < edges->size(); ++i) {
      const auto ctx = detail::where(source, lines, i);
      const auto& e = (*edges)[i];
      const auto src = detail::get_field<std::string>(e, "src", ctx);
      const auto dst = detail::get_field<std::string>(e, "dst", ctx);
      const auto iface = detail::get_field<std::string>(e, "iface", ctx);
      const auto ts =
          e.contains("timestamp") ? detail::get_field<std::int64_t>(e, "timestamp", ctx) : 0;
      newest = std::max(newest, ts);
      try {
        graph.add_edge(src, dst, iface, ts);
      } catch (const Error& err) {
        throw Error(err.code(), ctx + ": " + err.detail());
      }
    }
  }

  graph.advance_clock(newest);
  return graph;
}

Graph load_topology_file(const std::filesystem::path& path) {
  return load_topology(read_text_file(path), path.string());
}

std::string dump_topology(const Graph& graph, int indent) {
  using ojson = nlohmann::ordered_json;
  const auto standard = ClassHierarchy::standard();
  const auto& classes = graph.classes();

  ojson doc;
  doc["classes"] = ojson::array();
  for (ClassId c = 0; c < classes.size(); ++c) {
    if (standard.contains(classes.name(c))) continue;
    doc["classes"].push_back({{"name", classes.name(c)}, {"parent", classes.name(*classes.parent(c))}});
  }
  doc["nodes"] = ojson::array();
  graph.for_each_node([&](NodeHandle, const NodeRecord& r) {
    ojson attrs = ojson::object();
    for (const auto& [k, v] : r.attributes) attrs[k] = v;
    doc["nodes"].push_back({{"id", r.id},
                            {"class", r.cls},
                            {"status", std::string(to_string(r.status))},
                            {"attributes", std::move(attrs)},
                            {"lastUpdated", r.last_updated}});
  });
  doc["edges"] = ojson::array();
  for (const auto& e : graph.edges()) {
    doc["edges"].push_back(
        {{"src", e.src}, {"dst", e.dst}, {"iface", e.iface}, {"timestamp", e.timestamp}});
  }
  return doc.dump(indent) + "\n";
}

}  // namespace nkgov
