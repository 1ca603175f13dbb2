#pragma once

// Monte Carlo sampling of the random-connection model with fixed endpoints.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rcm/diagram.hpp"
#include "rcm/errors.hpp"
#include "rcm/model.hpp"
#include "rcm/parallel.hpp"

namespace rcm {

struct SimConfig {
  double half_width = 0.0;  // window [-L, L]^d; 0 selects default_half_width
  double lambda = 1.0;
  std::uint64_t replications = 1000;
  std::uint64_t seed = 1;
  int batches = 20;
  unsigned workers = 1;  // 0 selects all cores
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline double max_endpoint_coordinate(const ModelConfig& model) {
  double out = 0;
  for (const auto& y : model.endpoint_positions)
    for (double c : y) out = std::max(out, std::abs(c));
  return out;
}

}  // namespace detail

/// Largest endpoint coordinate plus 5/sqrt(beta), where the kernel has
/// dropped to e^{-25}.
inline double default_half_width(const ModelConfig& model) {
  return detail::max_endpoint_coordinate(model) + 5.0 / std::sqrt(model.beta.value);
}

/// One realization of the Poisson points in the window together with a
/// counter-based edge oracle: the edge between two vertices is decided by a
/// uniform derived from (edge_seed, pair) alone, so it can be queried lazily
/// in any order and always gives the same answer.
class SampleGraph {
 public:
  SampleGraph(int dimension, double beta, std::vector<double> coords, std::vector<std::vector<double>> endpoints,
              std::uint64_t edge_seed)
      : dimension_(dimension),
        beta_(beta),
        coords_(std::move(coords)),
        endpoints_(std::move(endpoints)),
        edge_seed_(edge_seed) {
    if (dimension_ < 1 || coords_.size() % static_cast<std::size_t>(dimension_) != 0)
      throw DomainError("point coordinates do not match the dimension");
    for (const auto& y : endpoints_)
      if (static_cast<int>(y.size()) != dimension_) throw DomainError("endpoint has the wrong dimension");
  }

  int dimension() const { return dimension_; }
  double beta() const { return beta_; }
  int point_count() const { return static_cast<int>(coords_.size() / static_cast<std::size_t>(dimension_)); }
  int endpoint_count() const { return static_cast<int>(endpoints_.size()); }

  std::span<const double> point(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dimension_),
            static_cast<std::size_t>(dimension_)};
  }
  std::span<const double> endpoint(int j) const { return endpoints_[static_cast<std::size_t>(j)]; }

  /// Points a != b; never true for a == b.
  bool adjacent(int a, int b) const {
    if (a == b) return false;
    return draw(a, b, point(a), point(b));
  }

  /// Point i and 0-based endpoint j.
  bool adjacent_to_endpoint(int i, int j) const {
    return draw(i, point_count() + j, point(i), endpoint(j));
  }

 private:
  bool draw(int u, int v, std::span<const double> x, std::span<const double> y) const {
    double dist2 = 0;
    for (int l = 0; l < dimension_; ++l) {
      double diff = x[static_cast<std::size_t>(l)] - y[static_cast<std::size_t>(l)];
      dist2 += diff * diff;
    }
    const auto lo = static_cast<std::uint64_t>(std::min(u, v));
    const auto hi = static_cast<std::uint64_t>(std::max(u, v));
    std::uint64_t h = detail::splitmix64(edge_seed_ ^ detail::splitmix64((lo << 32) | hi));
    return detail::unit_interval(h) < std::exp(-beta_ * dist2);
  }

  int dimension_;
  double beta_;
  std::vector<double> coords_;
  std::vector<std::vector<double>> endpoints_;
  std::uint64_t edge_seed_;
};

/// Replication `stream` of the point process under (model, sim). Streams are
/// independent of each other and of the order in which they are drawn.
inline SampleGraph sample_rcm(const ModelConfig& model, const SimConfig& sim, std::uint64_t stream,
                              int endpoint_count) {
  if (model.intensity != Intensity::flat) throw DomainError("the simulator samples flat intensity only");
  if (!(sim.lambda >= 0)) throw DomainError("lambda must be non-negative");
  const int d = model.dimension;
  const double half_width = sim.half_width > 0 ? sim.half_width : default_half_width(model);
  std::mt19937_64 rng(detail::splitmix64(sim.seed ^ detail::splitmix64(stream + 0x632be59bd9b4e019ull)));
  const double mean = sim.lambda * std::pow(2.0 * half_width, d);
  std::uint64_t n = 0;
  if (mean > 0) n = std::poisson_distribution<std::uint64_t>(mean)(rng);
  std::uniform_real_distribution<double> uniform(-half_width, half_width);
  std::vector<double> coords(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (auto& c : coords) c = uniform(rng);
  std::vector<std::vector<double>> endpoints;
  for (int j = 0; j < endpoint_count; ++j) endpoints.push_back(model.endpoint(j));
  return SampleGraph(d, model.beta.value, std::move(coords), std::move(endpoints), rng());
}

/// Number of ordered tuples of distinct points (x_1..x_r) such that
/// x_k ~ x_l for every core edge and x_i ~ y_j for every endpoint attachment.
inline std::uint64_t count_embeddings(const SampleGraph& g, const GraphSpec& spec) {
  require_valid(spec);
  const int r = spec.r;
  const int n = g.point_count();
  if (n < r) return 0;

  std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(r) + 1);
  for (auto [a, b] : spec.core_edges) {
    neighbors[static_cast<std::size_t>(a)].push_back(b);
    neighbors[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<std::vector<int>> anchors(static_cast<std::size_t>(r) + 1);
  for (int j = 0; j < spec.local_endpoint_count(); ++j) {
    int global = spec.global_endpoint(j) - 1;
    if (global >= g.endpoint_count()) throw DomainError("graph spec attaches to an endpoint the sample does not have");
    for (int v : spec.endpoint_attachments[static_cast<std::size_t>(j)]) anchors[static_cast<std::size_t>(v)].push_back(global);
  }

  // Placement order: most constrained vertex first, then greedily the vertex
  // with the most already-placed neighbours.
  std::vector<int> order;
  std::vector<bool> placed(static_cast<std::size_t>(r) + 1, false);
  for (int step = 0; step < r; ++step) {
    int best = -1;
    std::pair<int, int> best_key{-1, -1};
    for (int v = 1; v <= r; ++v) {
      if (placed[static_cast<std::size_t>(v)]) continue;
      int linked = 0;
      for (int w : neighbors[static_cast<std::size_t>(v)]) linked += placed[static_cast<std::size_t>(w)] ? 1 : 0;
      std::pair<int, int> key{linked, static_cast<int>(anchors[static_cast<std::size_t>(v)].size())};
      if (key > best_key) {
        best_key = key;
        best = v;
      }
    }
    placed[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
  }
  std::vector<int> position(static_cast<std::size_t>(r) + 1, 0);
  for (int i = 0; i < r; ++i) position[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

  // Candidate points per vertex from its endpoint constraints alone.
  std::vector<std::vector<int>> base(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    int v = order[static_cast<std::size_t>(i)];
    for (int p = 0; p < n; ++p) {
      bool ok = true;
      for (int j : anchors[static_cast<std::size_t>(v)]) {
        if (!g.adjacent_to_endpoint(p, j)) {
          ok = false;
          break;
        }
      }
      if (ok) base[static_cast<std::size_t>(i)].push_back(p);
    }
    if (base[static_cast<std::size_t>(i)].empty()) return 0;
  }
  std::vector<std::vector<int>> earlier(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    for (int w : neighbors[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
      if (position[static_cast<std::size_t>(w)] < i) earlier[static_cast<std::size_t>(i)].push_back(position[static_cast<std::size_t>(w)]);

  std::vector<int> assigned(static_cast<std::size_t>(r), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::uint64_t count = 0;
  auto place = [&](auto&& self, int i) -> void {
    if (i == r) {
      ++count;
      return;
    }
    for (int p : base[static_cast<std::size_t>(i)]) {
      if (used[static_cast<std::size_t>(p)]) continue;
      bool ok = true;
      for (int e : earlier[static_cast<std::size_t>(i)]) {
        if (!g.adjacent(p, assigned[static_cast<std::size_t>(e)])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(p)] = 1;
      assigned[static_cast<std::size_t>(i)] = p;
      self(self, i + 1);
      used[static_cast<std::size_t>(p)] = 0;
    }
  };
  place(place, 0);
  return count;
}

struct Estimate {
  double value = 0;
  double standard_error = 0;
};

struct Estimates {
  Estimate mean;           // E[N]
  Estimate second_moment;  // E[N^2]
  Estimate kappa2;
  Estimate kappa3;
  Estimate prob_positive;  // P(N > 0)
  double half_width = 0;
  std::vector<std::uint64_t> counts;  // one per replication
};

struct SampleStatistics {
  double mean = 0, second_moment = 0, kappa2 = 0, kappa3 = 0, prob_positive = 0;
};

/// k-statistics up to order 3 for a sample of counts.
inline SampleStatistics sample_statistics(std::span<const std::uint64_t> counts) {
  const auto r = static_cast<long double>(counts.size());
  if (counts.size() < 3) throw DomainError("kappa_3 estimation needs at least 3 replications");
  long double sum = 0, sum2 = 0, positive = 0;
  for (auto c : counts) {
    auto x = static_cast<long double>(c);
    sum += x;
    sum2 += x * x;
    positive += c > 0 ? 1 : 0;
  }
  const long double mean = sum / r;
  long double c2 = 0, c3 = 0;
  for (auto c : counts) {
    long double dx = static_cast<long double>(c) - mean;
    c2 += dx * dx;
    c3 += dx * dx * dx;
  }
  SampleStatistics s;
  s.mean = static_cast<double>(mean);
  s.second_moment = static_cast<double>(sum2 / r);
  s.kappa2 = static_cast<double>(c2 / (r - 1));
  s.kappa3 = static_cast<double>(r * c3 / ((r - 1) * (r - 2)));
  s.prob_positive = static_cast<double>(positive / r);
  return s;
}

inline void validate(const SimConfig& sim, const ModelConfig& model) {
  if (sim.batches < 1) throw DomainError("at least one batch is required");
  if (sim.replications < 2 * static_cast<std::uint64_t>(sim.batches))
    throw DomainError("replications must be at least twice the batch count");
  if (!(sim.lambda >= 0)) throw DomainError("lambda must be non-negative");
  if (sim.half_width > 0 && !(sim.half_width > detail::max_endpoint_coordinate(model)))
    throw DomainError("window half-width must exceed every endpoint coordinate");
}

/// Monte Carlo estimates with batch-means standard errors. Counts are stored
/// per replication and reduced in replication order, so the result does not
/// depend on the worker count.
inline Estimates estimate(const ModelConfig& model, const GraphSpec& spec, const SimConfig& sim) {
  require_valid(spec);
  validate(sim, model);
  const int m = global_endpoint_count(std::span<const GraphSpec>(&spec, 1));
  model.validate(m);
  if (sim.replications < 3) throw DomainError("kappa_3 estimation needs at least 3 replications");
  const auto batch_size = sim.replications / static_cast<std::uint64_t>(sim.batches);
  if (sim.batches > 1 && batch_size < 3) throw DomainError("each batch needs at least 3 replications");

  Estimates out;
  out.half_width = sim.half_width > 0 ? sim.half_width : default_half_width(model);
  out.counts.assign(sim.replications, 0);
  parallel_for(sim.replications, sim.workers, [&](std::size_t i, unsigned) {
    out.counts[i] = count_embeddings(sample_rcm(model, sim, i, m), spec);
  });

  SampleStatistics all = sample_statistics(out.counts);
  out.mean.value = all.mean;
  out.second_moment.value = all.second_moment;
  out.kappa2.value = all.kappa2;
  out.kappa3.value = all.kappa3;
  out.prob_positive.value = all.prob_positive;

  if (sim.batches > 1) {
    std::vector<SampleStatistics> per_batch;
    for (int b = 0; b < sim.batches; ++b) {
      std::size_t begin = static_cast<std::size_t>(b) * batch_size;
      std::size_t end = b + 1 == sim.batches ? out.counts.size() : begin + batch_size;
      per_batch.push_back(sample_statistics(std::span<const std::uint64_t>(out.counts).subspan(begin, end - begin)));
    }
    auto se = [&](double SampleStatistics::*field) {
      long double mean = 0;
      for (const auto& s : per_batch) mean += s.*field;
      mean /= per_batch.size();
      long double var = 0;
      for (const auto& s : per_batch) var += (s.*field - mean) * (s.*field - mean);
      var /= (per_batch.size() - 1);
      return static_cast<double>(std::sqrt(var / per_batch.size()));
    };
    out.mean.standard_error = se(&SampleStatistics::mean);
    out.second_moment.standard_error = se(&SampleStatistics::second_moment);
    out.kappa2.standard_error = se(&SampleStatistics::kappa2);
    out.kappa3.standard_error = se(&SampleStatistics::kappa3);
    out.prob_positive.standard_error = se(&SampleStatistics::prob_positive);
  }
  return out;
}

}  // namespace rcm
