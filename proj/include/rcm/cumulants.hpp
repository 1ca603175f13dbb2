#pragma once

// Moments, cumulants and joint cumulants of subgraph counts as polynomials in
// the intensity lambda. Every partition of the summation domain contributes
//
//   lambda^{|rho|} * prod_l (pi/beta)^{k/2} det(M)^{-1/2} exp(beta (b_l^T M^{-1} b_l - c_l))
//
// where M is the Gram matrix of rho_G and b_l, c_l collect the endpoint
// coordinates along axis l. With beta = pi and endpoints at the origin this is
// det(M)^{-d/2}, which is kept exact.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rcm/algebra/determinant.hpp"
#include "rcm/algebra/poly.hpp"
#include "rcm/algebra/scalar.hpp"
#include "rcm/diagram.hpp"
#include "rcm/errors.hpp"
#include "rcm/model.hpp"
#include "rcm/parallel.hpp"
#include "rcm/partition.hpp"

namespace rcm {

struct EngineOptions {
  unsigned workers = 1;  // 0 selects all cores
  int max_elements = kDefaultMaxElements;
  // Summation domain used for (joint) cumulants. The single-pass variant only
  // exists to reproduce historical tables.
  PartitionFilter cumulant_filter = PartitionFilter::connected_non_flat;
  // Progress ticker every `progress_every` partitions; never written to stdout
  // by the library itself.
  std::ostream* progress = nullptr;
  std::uint64_t progress_every = 1000;
  // Cholesky pivots below this are treated as a singular Gram matrix.
  double pivot_tolerance = 1e-12;
};

/// lambda^degree times a coefficient; `exact` is set on the exact path.
struct PartitionTerm {
  int degree = 0;
  std::optional<AlgebraicScalar> exact;
  double numeric = 0.0;
};

struct CumulantResult {
  std::string kind;  // moment | cumulant | joint-moment | joint-cumulant
  std::vector<int> row_sizes;
  bool exact = true;
  LambdaPoly value;                      // exact path only
  std::map<int, double> numeric_value;   // always filled
  std::uint64_t partition_count = 0;
  Census census;
  double seconds = 0.0;

  int order() const { return static_cast<int>(row_sizes.size()); }

  double evaluate(double lambda) const {
    if (lambda < 0) throw DomainError("lambda must be non-negative");
    if (exact) return value.evaluate(lambda);
    long double acc = 0;
    for (auto it = numeric_value.rbegin(); it != numeric_value.rend(); ++it)
      acc += static_cast<long double>(it->second) * std::pow(static_cast<long double>(lambda), it->first);
    return static_cast<double>(acc);
  }
};

inline bool all_coefficients_positive(const LambdaPoly& p) {
  if (p.is_zero()) return false;
  for (const auto& [k, c] : p.coeffs())
    if (!c.all_terms_positive()) return false;
  return true;
}

namespace detail {

/// det(M)^{-d/2} as an exact scalar: rational for even d, otherwise
/// sqrt(D) / D^{(d+1)/2}.
inline AlgebraicScalar inverse_det_power(const Integer& det, int dimension) {
  if (dimension % 2 == 0) {
    return AlgebraicScalar(Rational(Integer(1), pow(det, static_cast<unsigned long>(dimension / 2))));
  }
  return AlgebraicScalar::term(Rational(Integer(1), pow(det, static_cast<unsigned long>((dimension + 1) / 2))), det);
}

struct VectorHash {
  std::size_t operator()(const std::vector<long long>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (long long x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

using ExactTermCache = std::unordered_map<std::vector<long long>, AlgebraicScalar, VectorHash>;

[[noreturn]] inline void throw_divergence(const std::string& partition, const char* reason) {
  throw DivergenceError(std::string("integral diverges for partition ") + partition + ": " + reason, partition);
}

// Cholesky of M in binary64; returns false when a pivot falls below tolerance.
inline bool cholesky(const IntegerGramMatrix& m, std::vector<double>& lower, double tolerance) {
  const int k = m.size;
  lower.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
  auto L = [&](int i, int j) -> double& { return lower[static_cast<std::size_t>(i * k + j)]; };
  for (int j = 0; j < k; ++j) {
    double diag = static_cast<double>(m.at(j, j));
    for (int p = 0; p < j; ++p) diag -= L(j, p) * L(j, p);
    if (!(diag > tolerance)) return false;
    L(j, j) = std::sqrt(diag);
    for (int i = j + 1; i < k; ++i) {
      double v = static_cast<double>(m.at(i, j));
      for (int p = 0; p < j; ++p) v -= L(i, p) * L(j, p);
      L(i, j) = v / L(j, j);
    }
  }
  return true;
}

inline double numeric_term(const RhoGraph& g, const IntegerGramMatrix& m, const ModelConfig& model,
                           const std::string& partition, double tolerance) {
  const int k = m.size;
  std::vector<double> lower;
  if (!cholesky(m, lower, tolerance)) throw_divergence(partition, "Gram matrix is singular");
  auto L = [&](int i, int j) { return lower[static_cast<std::size_t>(i * k + j)]; };
  double log_det = 0;
  for (int i = 0; i < k; ++i) log_det += 2.0 * std::log(L(i, i));
  const double beta = model.beta.value;
  const int d = model.dimension;
  double exponent = 0;
  for (int axis = 0; axis < d; ++axis) {
    std::vector<double> b(static_cast<std::size_t>(k), 0.0);
    double c = 0;
    for (int j = 0; j < g.endpoint_count; ++j) {
      double y = model.endpoint(j)[static_cast<std::size_t>(axis)];
      for (int v : g.endpoint_neighborhoods[static_cast<std::size_t>(j)]) {
        b[static_cast<std::size_t>(v - 1)] += y;
        c += y * y;
      }
    }
    // b^T M^{-1} b = |L^{-1} b|^2 by forward substitution.
    double quad = 0;
    std::vector<double> z(static_cast<std::size_t>(k), 0.0);
    for (int i = 0; i < k; ++i) {
      double v = b[static_cast<std::size_t>(i)];
      for (int p = 0; p < i; ++p) v -= L(i, p) * z[static_cast<std::size_t>(p)];
      z[static_cast<std::size_t>(i)] = v / L(i, i);
      quad += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    }
    exponent += beta * (quad - c);
  }
  double log_value = 0.5 * d * k * std::log(std::numbers::pi / beta) - 0.5 * d * log_det + exponent;
  return std::exp(log_value);
}

inline PartitionTerm evaluate_term(std::span<const GraphSpec> specs, const PartitionCursor& cursor,
                                   const ModelConfig& model, const EngineOptions& options, ExactTermCache* cache) {
  RhoGraph g = build_rho_graph(specs, cursor);
  IntegerGramMatrix m = assemble_gram_matrix(g, model.intensity);
  PartitionTerm term;
  term.degree = cursor.block_count();
  if (model.uses_exact_path()) {
    if (cache) {
      auto it = cache->find(m.entries);
      if (it != cache->end()) {
        term.exact = it->second;
        term.numeric = it->second.to_double();
        return term;
      }
    }
    Integer det = det_fraction_free(m.to_matrix());
    if (det <= 0) throw_divergence(cursor.materialize().to_string(), "det(M) = 0");
    AlgebraicScalar value = inverse_det_power(det, model.dimension);
    if (cache) cache->emplace(m.entries, value);
    term.numeric = value.to_double();
    term.exact = std::move(value);
  } else {
    term.numeric = numeric_term(g, m, model, cursor.materialize().to_string(), options.pivot_tolerance);
  }
  return term;
}

struct ChunkSum {
  LambdaPoly exact;
  std::map<int, long double> numeric;
  Census census;
  std::optional<DivergenceError> divergence;
};

inline CumulantResult sum_over_partitions(std::string kind, std::vector<GraphSpec> specs, PartitionFilter filter,
                                          const ModelConfig& model, const EngineOptions& options) {
  auto start = std::chrono::steady_clock::now();
  if (specs.empty()) throw DomainError("at least one graph spec is required");
  for (const auto& s : specs) require_valid(s);
  model.validate(global_endpoint_count(specs));

  GroundSet ground = ground_set_of(specs);
  PartitionEnumerator enumerator(ground, filter, options.max_elements);
  const unsigned workers = options.workers == 0 ? default_worker_count() : options.workers;
  std::vector<PartitionChunk> chunks =
      workers <= 1 ? std::vector<PartitionChunk>{PartitionChunk{}} : enumerator.chunks(std::size_t{workers} * 8);

  std::uint64_t expected_total = 0;
  if (options.progress) {
    enumerator.for_each([&](const PartitionCursor&) { ++expected_total; });
  }
  std::atomic<std::uint64_t> done{0};
  std::mutex progress_mutex;
  auto tick = [&] {
    std::uint64_t i = ++done;
    if (!options.progress || options.progress_every == 0 || i % options.progress_every != 0) return;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double eta_min = elapsed * static_cast<double>(expected_total - i) / static_cast<double>(i) / 60.0;
    std::lock_guard lock(progress_mutex);
    *options.progress << "[" << i << "/" << expected_total << "] ETA " << std::fixed << std::setprecision(2) << eta_min
                      << " min\n";
  };

  const bool exact = model.uses_exact_path();
  std::vector<ChunkSum> sums(chunks.size());
  std::vector<ExactTermCache> caches(std::max(1u, workers));
  parallel_for(chunks.size(), workers, [&](std::size_t index, unsigned worker) {
    ChunkSum& sum = sums[index];
    ExactTermCache* cache = exact ? &caches[worker] : nullptr;
    enumerator.for_each_in(chunks[index], [&](const PartitionCursor& cursor) {
      if (sum.divergence) return;
      try {
        PartitionTerm term = evaluate_term(specs, cursor, model, options, cache);
        if (term.exact) sum.exact.add(term.degree, *term.exact);
        sum.numeric[term.degree] += term.numeric;
        sum.census.add(cursor.block_count());
      } catch (const DivergenceError& e) {
        sum.divergence = e;
      }
      tick();
    });
  });

  CumulantResult result;
  result.kind = std::move(kind);
  result.row_sizes = ground.row_sizes();
  result.exact = exact;
  std::map<int, long double> numeric;
  for (auto& sum : sums) {
    if (sum.divergence) throw *sum.divergence;
    result.value += sum.exact;
    for (const auto& [k, v] : sum.numeric) numeric[k] += v;
    result.census.merge(sum.census);
  }
  if (exact) {
    for (const auto& [k, c] : result.value.coeffs()) result.numeric_value[k] = c.to_double();
  } else {
    for (const auto& [k, v] : numeric) result.numeric_value[k] = static_cast<double>(v);
  }
  result.partition_count = result.census.total;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace detail

/// Contribution of a single non-flat partition.
inline PartitionTerm partition_term(const SetPartition& p, std::span<const GraphSpec> specs, const ModelConfig& model,
                                    const EngineOptions& options = {}) {
  if (!is_non_flat(p)) throw DomainError("partition_term expects a non-flat partition");
  for (const auto& s : specs) require_valid(s);
  model.validate(global_endpoint_count(specs));
  auto masks = p.block_row_masks();
  PartitionCursor cursor(p.ground(), p.encoding(), p.block_count(), masks);
  return detail::evaluate_term(specs, cursor, model, options, nullptr);
}

inline PartitionTerm partition_term(const SetPartition& p, const GraphSpec& spec, const ModelConfig& model,
                                    const EngineOptions& options = {}) {
  auto specs = replicate(spec, p.ground().rows());
  return partition_term(p, specs, model, options);
}

/// E[N^n]: sum over non-flat partitions of [n]x[r].
inline CumulantResult moment(int n, const GraphSpec& spec, const ModelConfig& model, const EngineOptions& options = {}) {
  if (n < 1) throw DomainError("moment order must be at least 1");
  return detail::sum_over_partitions("moment", replicate(spec, n), PartitionFilter::non_flat, model, options);
}

/// kappa_n(N): sum over connected non-flat partitions of [n]x[r].
inline CumulantResult cumulant(int n, const GraphSpec& spec, const ModelConfig& model,
                               const EngineOptions& options = {}) {
  if (n < 1) throw DomainError("cumulant order must be at least 1");
  return detail::sum_over_partitions("cumulant", replicate(spec, n), options.cumulant_filter, model, options);
}

/// E[N^{G_1} ... N^{G_n}] over non-flat partitions of pi_1 u ... u pi_n.
inline CumulantResult joint_moment(std::span<const GraphSpec> specs, const ModelConfig& model,
                                   const EngineOptions& options = {}) {
  return detail::sum_over_partitions("joint-moment", {specs.begin(), specs.end()}, PartitionFilter::non_flat, model,
                                     options);
}

/// kappa(N^{G_1}, ..., N^{G_n}) over connected non-flat partitions.
inline CumulantResult joint_cumulant(std::span<const GraphSpec> specs, const ModelConfig& model,
                                     const EngineOptions& options = {}) {
  return detail::sum_over_partitions("joint-cumulant", {specs.begin(), specs.end()}, options.cumulant_filter, model,
                                     options);
}

namespace detail {

inline double scale_by(double v, const Integer& c) { return v * c.get_d(); }
inline LambdaPoly scale_by(const LambdaPoly& p, const Integer& c) { return p.scaled(AlgebraicScalar(Rational(c))); }

// Block-size multisets of all set partitions of [n], with multiplicities.
inline std::map<std::vector<int>, Integer> block_size_types(int n) {
  std::map<std::vector<int>, Integer> types;
  PartitionEnumerator all(GroundSet(std::vector<int>(static_cast<std::size_t>(n), 1)), PartitionFilter::all, 64);
  all.for_each([&](const PartitionCursor& c) {
    std::vector<int> sizes(static_cast<std::size_t>(c.block_count()), 0);
    for (int label : c.encoding()) ++sizes[static_cast<std::size_t>(label)];
    std::sort(sizes.begin(), sizes.end());
    types[sizes] += 1;
  });
  return types;
}

template <class T>
std::vector<T> partition_transform(const std::vector<T>& input, bool mobius) {
  if (input.empty()) throw DomainError("at least one moment is required");
  std::vector<T> out;
  out.reserve(input.size());
  for (int n = 1; n <= static_cast<int>(input.size()); ++n) {
    T total{};
    for (const auto& [sizes, count] : block_size_types(n)) {
      T product = input[static_cast<std::size_t>(sizes[0] - 1)];
      for (std::size_t b = 1; b < sizes.size(); ++b) product = product * input[static_cast<std::size_t>(sizes[b] - 1)];
      Integer weight = count;
      if (mobius) {
        const auto k = static_cast<unsigned long>(sizes.size());
        Integer factorial;
        mpz_fac_ui(factorial.get_mpz_t(), k - 1);
        weight *= factorial;
        if (k % 2 == 0) weight = -weight;
      }
      total = total + scale_by(product, weight);
    }
    out.push_back(std::move(total));
  }
  return out;
}

}  // namespace detail

/// kappa_n = sum over set partitions sigma of [n] of
///   (-1)^{|sigma|-1} (|sigma|-1)! prod_{b in sigma} m_{|b|}.
template <class T>
std::vector<T> moments_to_cumulants(const std::vector<T>& moments) {
  return detail::partition_transform(moments, true);
}

/// m_n = sum over set partitions sigma of [n] of prod_{b in sigma} kappa_{|b|}.
template <class T>
std::vector<T> cumulants_to_moments(const std::vector<T>& cumulants) {
  return detail::partition_transform(cumulants, false);
}

/// kappa_n(lambda) / kappa_2(lambda)^{n/2}.
inline double normalized_cumulant(int n, const LambdaPoly& kappa_n, const LambdaPoly& kappa_2, double lambda) {
  if (n < 2) throw DomainError("normalized cumulants need n >= 2");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  double variance = kappa_2.evaluate(lambda);
  if (!(variance > 0)) throw DomainError("kappa_2 vanishes at this lambda");
  if (n == 2) return 1.0;
  return kappa_n.evaluate(lambda) / std::pow(variance, 0.5 * n);
}

inline double normalized_cumulant(int n, const GraphSpec& spec, const ModelConfig& model, double lambda,
                                  const EngineOptions& options = {}) {
  if (n < 2) throw DomainError("normalized cumulants need n >= 2");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  CumulantResult k2 = cumulant(2, spec, model, options);
  double variance = k2.evaluate(lambda);
  if (!(variance > 0)) throw DomainError("kappa_2 vanishes at this lambda");
  if (n == 2) return 1.0;
  CumulantResult kn = cumulant(n, spec, model, options);
  return kn.evaluate(lambda) / std::pow(variance, 0.5 * n);
}

}  // namespace rcm
