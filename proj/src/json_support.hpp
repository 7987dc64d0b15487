#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "nkgov/error.hpp"

namespace nkgov::detail {

using nlohmann::json;

/// Line numbers (1-based) of each element of the array stored under
/// `key` in the top-level object of `text`. Empty when the key is absent or
/// not an array. Used to attach source lines to semantic load errors.
inline std::vector<std::size_t> element_lines(std::string_view text, std::string_view key) {
  std::vector<std::size_t> lines;
  std::size_t line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  std::string current;
  std::string last_string;
  bool in_target = false;
  bool expect_element = false;

  for (char c : text) {
    if (in_string) {
      if (escaped) {
        escaped = false;
        current += c;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
        last_string = current;
      } else {
        current += c;
      }
      if (c == '\n') ++line;
      continue;
    }
    if (c == '\n') {
      ++line;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') continue;

    if (in_target && depth == 2 && expect_element && c != ']') {
      lines.push_back(line);
      expect_element = false;
    }
    switch (c) {
      case '"':
        in_string = true;
        current.clear();
        break;
      case ':':
        if (depth == 1) in_target = (last_string == key);
        break;
      case '{':
      case '[':
        ++depth;
        if (depth == 2 && in_target && c == '[') expect_element = true;
        break;
      case '}':
      case ']':
        --depth;
        if (depth == 1) in_target = false;
        break;
      case ',':
        if (depth == 2 && in_target) expect_element = true;
        if (depth == 1) in_target = false;
        break;
      default:
        break;
    }
  }
  return lines;
}

inline std::string where(std::string_view source, const std::vector<std::size_t>& lines,
                         std::size_t index) {
  std::string out(source.empty() ? "<input>" : source);
  if (index < lines.size()) out += ":" + std::to_string(lines[index]);
  return out;
}

inline json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": " + e.what());
  }
}

template <typename T>
T get_field(const json& obj, const char* field, const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw Error(ErrorCode::ParseError, context + ": missing field '" + field + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseError, context + ": field '" + field + "' has the wrong type");
  }
}

}  // namespace nkgov::detail
