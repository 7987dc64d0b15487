#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nkgov/graph.hpp"

namespace nkgov {

/// Parses a topology document:
///   { "classes": [{"name","parent"}], "nodes": [{"id","class","status",
///     "attributes":{...},"lastUpdated"}], "edges": [{"src","dst","iface","timestamp"}] }
/// Classes extend the standard hierarchy. Errors name the source and line of
/// the offending entry. The graph clock starts at the newest timestamp seen.
Graph load_topology(std::string_view text, std::string_view source = "<topology>");
Graph load_topology_file(const std::filesystem::path& path);

/// Canonical document for `graph`: non-standard classes, nodes and edges in
/// insertion order. Loading the result reproduces the same graph_hash.
std::string dump_topology(const Graph& graph, int indent = 2);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nkgov
