#pragma once

// nlohmann/json adapters shared by the text formats.

#include <string>
#include <vector>

#include <json.hpp>

#include "liftsub/lift.hpp"

namespace liftsub {

inline nlohmann::json to_json_value(VertexId v) { return nlohmann::json::array({v.fiber, v.layer}); }

inline nlohmann::json to_json_value(const std::vector<VertexId>& vs) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto v : vs) arr.push_back(to_json_value(v));
  return arr;
}

inline VertexId vertex_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned())
    throw ParseError(field, "expected [fiber, layer]");
  return {j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
}

inline std::vector<VertexId> vertices_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected an array of [fiber, layer]");
  std::vector<VertexId> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(vertex_from_json(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

inline nlohmann::json parse_document(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
}

}  // namespace liftsub
