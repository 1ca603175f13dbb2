#pragma once

// Template graphs with endpoints, the merged graph rho_G of a partition, and
// the integer quadratic form of its Gaussian integral.

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rcm/algebra/determinant.hpp"
#include "rcm/errors.hpp"
#include "rcm/model.hpp"
#include "rcm/partition.hpp"

namespace rcm {

using Edge = std::pair<int, int>;

/// Core graph on vertices 1..r plus endpoint attachments. endpoint_attachments[j]
/// lists the core vertices adjacent to the j-th endpoint of this spec;
/// `attaches[j]` is that endpoint's 1-based index in the global endpoint list
/// (identity when empty).
struct GraphSpec {
  int r = 0;
  std::vector<Edge> core_edges;
  std::vector<std::vector<int>> endpoint_attachments;
  std::vector<int> attaches;

  /// r is inferred as the largest vertex label.
  static GraphSpec from_edges(std::vector<Edge> edges, std::vector<std::vector<int>> endpoints = {},
                              std::vector<int> attaches = {}) {
    GraphSpec s;
    for (const auto& [a, b] : edges) s.r = std::max({s.r, a, b});
    s.core_edges = std::move(edges);
    s.endpoint_attachments = std::move(endpoints);
    s.attaches = std::move(attaches);
    return s;
  }

  int local_endpoint_count() const { return static_cast<int>(endpoint_attachments.size()); }

  /// 1-based global endpoint id of local endpoint j (0-based).
  int global_endpoint(int j) const {
    return attaches.empty() ? j + 1 : attaches.at(static_cast<std::size_t>(j));
  }

  bool operator==(const GraphSpec&) const = default;
};

/// Empty when the spec is valid; otherwise one message per violation.
inline std::vector<std::string> validate_graph_spec(const GraphSpec& s) {
  std::vector<std::string> out;
  if (s.r < 2) out.push_back("core needs at least 2 vertices");
  std::set<Edge> seen;
  bool labels_ok = true;
  for (auto [a, b] : s.core_edges) {
    if (a < 1 || b < 1 || a > s.r || b > s.r) {
      out.push_back("edge [" + std::to_string(a) + "," + std::to_string(b) + "] uses a vertex outside 1..r");
      labels_ok = false;
      continue;
    }
    if (a == b) {
      out.push_back("self-loop at vertex " + std::to_string(a));
      continue;
    }
    if (!seen.insert(std::minmax(a, b)).second)
      out.push_back("duplicate edge [" + std::to_string(a) + "," + std::to_string(b) + "]");
  }
  if (labels_ok && s.r >= 2) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(s.r) + 1);
    for (auto [a, b] : seen) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<bool> reached(static_cast<std::size_t>(s.r) + 1, false);
    std::deque<int> queue{1};
    reached[1] = true;
    int count = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (!reached[static_cast<std::size_t>(w)]) {
          reached[static_cast<std::size_t>(w)] = true;
          ++count;
          queue.push_back(w);
        }
      }
    }
    if (count != s.r) out.push_back("core not connected");
  }
  for (std::size_t j = 0; j < s.endpoint_attachments.size(); ++j) {
    const auto& ep = s.endpoint_attachments[j];
    if (ep.empty()) out.push_back("empty endpoint attachment for endpoint " + std::to_string(j + 1));
    std::set<int> members;
    for (int v : ep) {
      if (v < 1 || v > s.r)
        out.push_back("endpoint " + std::to_string(j + 1) + " attaches to vertex " + std::to_string(v) + " outside 1..r");
      else if (!members.insert(v).second)
        out.push_back("endpoint " + std::to_string(j + 1) + " lists vertex " + std::to_string(v) + " twice");
    }
  }
  if (!s.attaches.empty()) {
    if (s.attaches.size() != s.endpoint_attachments.size())
      out.push_back("attaches must name one global endpoint per endpoint attachment");
    std::set<int> ids;
    for (int id : s.attaches) {
      if (id < 1) out.push_back("global endpoint ids are 1-based");
      else if (!ids.insert(id).second) out.push_back("global endpoint " + std::to_string(id) + " attached twice");
    }
  }
  return out;
}

inline void require_valid(const GraphSpec& s) {
  auto diagnostics = validate_graph_spec(s);
  if (diagnostics.empty()) return;
  std::string msg = "invalid graph spec:";
  for (const auto& d : diagnostics) msg += " " + d + ";";
  throw DomainError(msg);
}

/// Size of the global endpoint list shared by specs.
inline int global_endpoint_count(std::span<const GraphSpec> specs) {
  int m = 0;
  for (const auto& s : specs)
    for (int j = 0; j < s.local_endpoint_count(); ++j) m = std::max(m, s.global_endpoint(j));
  return m;
}

inline std::vector<GraphSpec> replicate(const GraphSpec& s, int n) {
  return std::vector<GraphSpec>(static_cast<std::size_t>(n), s);
}

inline GroundSet ground_set_of(std::span<const GraphSpec> specs) {
  std::vector<int> rows;
  rows.reserve(specs.size());
  for (const auto& s : specs) rows.push_back(s.r);
  return GroundSet(std::move(rows));
}

/// rho_G: vertices 1..|rho| are the blocks in canonical order, endpoints are
/// |rho|+1..|rho|+m. Edges are deduplicated pairs (a < b) over block indices.
struct RhoGraph {
  int core_vertex_count = 0;
  int endpoint_count = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> endpoint_neighborhoods;

  bool operator==(const RhoGraph&) const = default;

  /// Connectivity of the full graph on |rho| + m vertices.
  bool connected_with_endpoints() const {
    const int total = core_vertex_count + endpoint_count;
    if (total == 0) return true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(total) + 1);
    auto link = [&](int a, int b) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    };
    for (auto [a, b] : edges) link(a, b);
    for (int j = 0; j < endpoint_count; ++j)
      for (int k : endpoint_neighborhoods[static_cast<std::size_t>(j)]) link(k, core_vertex_count + j + 1);
    std::vector<bool> reached(static_cast<std::size_t>(total) + 1, false);
    std::deque<int> queue{1};
    reached[1] = true;
    int count = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (!reached[static_cast<std::size_t>(w)]) {
          reached[static_cast<std::size_t>(w)] = true;
          ++count;
          queue.push_back(w);
        }
      }
    }
    return count == total;
  }
};

namespace detail {

inline RhoGraph build_rho_graph(std::span<const GraphSpec> specs, const GroundSet& ground, std::span<const int> labels,
                                int blocks) {
  if (static_cast<int>(specs.size()) != ground.rows())
    throw DomainError("partition has " + std::to_string(ground.rows()) + " rows but " + std::to_string(specs.size()) +
                      " graph specs were given");
  for (int i = 0; i < ground.rows(); ++i) {
    if (specs[static_cast<std::size_t>(i)].r != ground.row_size(i + 1))
      throw DomainError("row " + std::to_string(i + 1) + " has " + std::to_string(ground.row_size(i + 1)) +
                        " elements but its graph spec has r = " + std::to_string(specs[static_cast<std::size_t>(i)].r));
  }
  RhoGraph g;
  g.core_vertex_count = blocks;
  g.endpoint_count = global_endpoint_count(specs);
  std::set<Edge> edges;
  std::vector<std::set<int>> hoods(static_cast<std::size_t>(g.endpoint_count));
  for (int i = 0; i < ground.rows(); ++i) {
    const auto& spec = specs[static_cast<std::size_t>(i)];
    auto block_of = [&](int v) { return labels[static_cast<std::size_t>(ground.index_of({i + 1, v}))] + 1; };
    for (auto [a, b] : spec.core_edges) {
      int ba = block_of(a);
      int bb = block_of(b);
      if (ba == bb)
        throw DomainError("partition merges both ends of edge [" + std::to_string(a) + "," + std::to_string(b) +
                          "] in row " + std::to_string(i + 1) + " (flat partition)");
      edges.insert(std::minmax(ba, bb));
    }
    for (int j = 0; j < spec.local_endpoint_count(); ++j) {
      auto& hood = hoods[static_cast<std::size_t>(spec.global_endpoint(j) - 1)];
      for (int v : spec.endpoint_attachments[static_cast<std::size_t>(j)]) hood.insert(block_of(v));
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  for (const auto& h : hoods) g.endpoint_neighborhoods.emplace_back(h.begin(), h.end());
  return g;
}

}  // namespace detail

/// Stacks one copy of specs[i] on row i, merges vertices sharing a block of p,
/// and removes duplicate edges.
inline RhoGraph build_rho_graph(std::span<const GraphSpec> specs, const SetPartition& p) {
  return detail::build_rho_graph(specs, p.ground(), p.encoding(), p.block_count());
}

inline RhoGraph build_rho_graph(std::span<const GraphSpec> specs, const PartitionCursor& c) {
  return detail::build_rho_graph(specs, c.ground(), c.encoding(), c.block_count());
}

/// Symmetric k x k integer matrix M with exponent -beta * x^T M x per
/// coordinate: the core Laplacian of rho_G plus a diagonal anchor term.
struct IntegerGramMatrix {
  int size = 0;
  std::vector<long long> entries;

  long long at(int i, int j) const {
    return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) + static_cast<std::size_t>(j)];
  }

  IntegerMatrix to_matrix() const {
    IntegerMatrix m(size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) m.at(i, j) = Integer(std::to_string(at(i, j)));
    return m;
  }

  bool operator==(const IntegerGramMatrix&) const = default;
};

inline IntegerGramMatrix assemble_gram_matrix(const RhoGraph& g, Intensity intensity) {
  const int k = g.core_vertex_count;
  IntegerGramMatrix m{k, std::vector<long long>(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0)};
  auto cell = [&](int i, int j) -> long long& {
    return m.entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)];
  };
  for (auto [a, b] : g.edges) {
    cell(a - 1, b - 1) -= 1;
    cell(b - 1, a - 1) -= 1;
    cell(a - 1, a - 1) += 1;
    cell(b - 1, b - 1) += 1;
  }
  for (const auto& hood : g.endpoint_neighborhoods)
    for (int v : hood) cell(v - 1, v - 1) += 1;
  if (intensity == Intensity::gaussian)
    for (int v = 0; v < k; ++v) cell(v, v) += 1;
  return m;
}

inline IntegerGramMatrix assemble_gram_matrix(const RhoGraph& g, const ModelConfig& model) {
  return assemble_gram_matrix(g, model.intensity);
}

}  // namespace rcm
