#pragma once

// JSON encodings of graph specs, exact scalars, polynomials and results.

#include <json.hpp>

#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "rcm/algebra/poly.hpp"
#include "rcm/algebra/scalar.hpp"
#include "rcm/cumulants.hpp"
#include "rcm/diagram.hpp"
#include "rcm/errors.hpp"
#include "rcm/partition.hpp"

namespace rcm::io {

using json = nlohmann::json;

/// 17 significant digits, the CSV float format.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
inline json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return static_cast<long long>(v.get_si());
  return v.get_str();
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw DomainError("malformed integer string in JSON");
    return v;
  }
  throw DomainError("expected an integer in JSON");
}

/// [{"sqrt": s, "num": p, "den": q}, ...]
inline json to_json(const AlgebraicScalar& a) {
  json out = json::array();
  for (const auto& [s, q] : a.terms())
    out.push_back({{"sqrt", integer_to_json(s)}, {"num", integer_to_json(q.get_num())}, {"den", integer_to_json(q.get_den())}});
  return out;
}

inline AlgebraicScalar scalar_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("algebraic scalar must be a JSON array");
  AlgebraicScalar out;
  for (const auto& t : j) {
    Rational q(integer_from_json(t.at("num")), integer_from_json(t.at("den")));
    if (q.get_den() == 0) throw DomainError("zero denominator in algebraic scalar");
    q.canonicalize();
    out += AlgebraicScalar::term(q, integer_from_json(t.at("sqrt")));
  }
  return out;
}

/// {"<degree>": [terms...], ...}
inline json to_json(const LambdaPoly& p) {
  json out = json::object();
  for (const auto& [k, c] : p.coeffs()) out[std::to_string(k)] = to_json(c);
  return out;
}

inline LambdaPoly poly_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("polynomial must be a JSON object keyed by degree");
  LambdaPoly out;
  for (const auto& [key, value] : j.items()) out.add(std::stoi(key), scalar_from_json(value));
  return out;
}

inline json to_json(const GraphSpec& s) {
  json edges = json::array();
  for (auto [a, b] : s.core_edges) edges.push_back({a, b});
  json out = {{"edges", edges}, {"endpoints", s.endpoint_attachments}};
  if (!s.attaches.empty()) out["attaches"] = s.attaches;
  return out;
}

inline GraphSpec graph_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("edges")) throw DomainError("graph spec must be an object with \"edges\"");
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw DomainError("each edge must be a pair of vertex labels");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  std::vector<std::vector<int>> endpoints;
  if (j.contains("endpoints")) endpoints = j.at("endpoints").get<std::vector<std::vector<int>>>();
  std::vector<int> attaches;
  if (j.contains("attaches")) attaches = j.at("attaches").get<std::vector<int>>();
  return GraphSpec::from_edges(std::move(edges), std::move(endpoints), std::move(attaches));
}

/// A single spec object or an array of them.
inline std::vector<GraphSpec> graph_specs_from_json(const json& j) {
  std::vector<GraphSpec> out;
  if (j.is_array()) {
    for (const auto& s : j) out.push_back(graph_spec_from_json(s));
  } else {
    out.push_back(graph_spec_from_json(j));
  }
  return out;
}

inline json to_json(const Census& c) {
  json by = json::object();
  for (const auto& [blocks, count] : c.by_block_count) by[std::to_string(blocks)] = count;
  return {{"by_blocks", by}, {"total", c.total}};
}

inline Census census_from_json(const json& j) {
  Census c;
  for (const auto& [key, value] : j.at("by_blocks").items()) c.by_block_count[std::stoi(key)] = value.get<std::uint64_t>();
  c.total = j.at("total").get<std::uint64_t>();
  return c;
}

inline json to_json(const CumulantResult& r) {
  json numeric = json::object();
  for (const auto& [k, v] : r.numeric_value) numeric[std::to_string(k)] = v;
  json out = {{"kind", r.kind},
              {"row_sizes", r.row_sizes},
              {"order", r.order()},
              {"exact", r.exact},
              {"numeric", numeric},
              {"partition_count", r.partition_count},
              {"census", to_json(r.census)},
              {"seconds", r.seconds}};
  if (r.exact) {
    out["polynomial"] = to_json(r.value);
    out["polynomial_text"] = r.value.to_string();
  }
  return out;
}

}  // namespace rcm::io
