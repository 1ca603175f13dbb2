#pragma once

// Set partitions of multirow ground sets [n]x[r] (or pi_1 u ... u pi_n with
// uneven rows), the summation domains of the moment and cumulant formulas.

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcm/errors.hpp"
#include "rcm/parallel.hpp"

namespace rcm {

inline constexpr int kDefaultMaxElements = 16;

/// Ground-set element (i, j): row i, column j, both 1-based.
struct Element {
  int row = 0;
  int col = 0;
  auto operator<=>(const Element&) const = default;
};

/// Rows pi_1..pi_n with pi_i = {(i,1), ..., (i,r_i)}. Elements are indexed
/// 0..size()-1 in row-major lexicographic order.
class GroundSet {
 public:
  explicit GroundSet(std::vector<int> row_sizes) : row_sizes_(std::move(row_sizes)) {
    if (row_sizes_.empty()) throw DomainError("ground set needs at least one row");
    if (row_sizes_.size() > 64) throw DomainError("ground set supports at most 64 rows");
    offsets_.reserve(row_sizes_.size() + 1);
    offsets_.push_back(0);
    for (int r : row_sizes_) {
      if (r < 1) throw DomainError("ground set rows must be non-empty");
      offsets_.push_back(offsets_.back() + r);
    }
    row_of_.reserve(static_cast<std::size_t>(size()));
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < row_sizes_[static_cast<std::size_t>(i)]; ++j) row_of_.push_back(i);
  }

  static GroundSet uniform(int n, int r) {
    if (n < 1 || r < 1) throw DomainError("uniform ground set needs n >= 1 and r >= 1");
    return GroundSet(std::vector<int>(static_cast<std::size_t>(n), r));
  }

  int rows() const { return static_cast<int>(row_sizes_.size()); }
  int size() const { return offsets_.back(); }
  int row_size(int row) const { return row_sizes_.at(static_cast<std::size_t>(row - 1)); }
  const std::vector<int>& row_sizes() const { return row_sizes_; }

  bool contains(Element e) const {
    return e.row >= 1 && e.row <= rows() && e.col >= 1 && e.col <= row_size(e.row);
  }

  int index_of(Element e) const {
    if (!contains(e)) {
      std::ostringstream os;
      os << "element (" << e.row << "," << e.col << ") is outside the ground set";
      throw DomainError(os.str());
    }
    return offsets_[static_cast<std::size_t>(e.row - 1)] + e.col - 1;
  }

  Element element_at(int index) const {
    int row = row_of_.at(static_cast<std::size_t>(index));
    return {row + 1, index - offsets_[static_cast<std::size_t>(row)] + 1};
  }

  /// 0-based row of a 0-based element index.
  int row_of_index(int index) const { return row_of_[static_cast<std::size_t>(index)]; }

  bool operator==(const GroundSet& other) const { return row_sizes_ == other.row_sizes_; }

 private:
  std::vector<int> row_sizes_;
  std::vector<int> offsets_;
  std::vector<int> row_of_;
};

/// A set partition stored as a restricted-growth string over the ground set's
/// element order: label[0] = 0 and label[k] <= 1 + max(label[0..k-1]). Block
/// labels therefore follow the order of each block's smallest element, which
/// makes the encoding canonical.
class SetPartition {
 public:
  SetPartition(GroundSet ground, std::vector<int> labels)
      : ground_(std::move(ground)), labels_(std::move(labels)) {
    if (static_cast<int>(labels_.size()) != ground_.size())
      throw DomainError("partition encoding length does not match the ground set");
    int next = 0;
    for (int label : labels_) {
      if (label < 0 || label > next) throw DomainError("partition encoding is not a restricted-growth string");
      if (label == next) ++next;
    }
    block_count_ = next;
  }

  static SetPartition from_blocks(GroundSet ground, const std::vector<std::vector<Element>>& blocks) {
    std::vector<int> raw(static_cast<std::size_t>(ground.size()), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw DomainError("partition blocks must be non-empty");
      for (Element e : blocks[b]) {
        auto& slot = raw[static_cast<std::size_t>(ground.index_of(e))];
        if (slot != -1) throw DomainError("partition blocks overlap");
        slot = static_cast<int>(b);
      }
    }
    std::vector<int> relabel(blocks.size(), -1);
    int next = 0;
    for (auto& label : raw) {
      if (label == -1) throw DomainError("partition blocks do not cover the ground set");
      auto& r = relabel[static_cast<std::size_t>(label)];
      if (r == -1) r = next++;
      label = r;
    }
    return SetPartition(std::move(ground), std::move(raw));
  }

  static SetPartition singletons(GroundSet ground) {
    std::vector<int> labels(static_cast<std::size_t>(ground.size()));
    std::iota(labels.begin(), labels.end(), 0);
    return SetPartition(std::move(ground), std::move(labels));
  }

  static SetPartition one_block(GroundSet ground) {
    std::vector<int> labels(static_cast<std::size_t>(ground.size()), 0);
    return SetPartition(std::move(ground), std::move(labels));
  }

  /// The row partition pi = {pi_1, ..., pi_n}.
  static SetPartition rows_of(GroundSet ground) {
    std::vector<int> labels(static_cast<std::size_t>(ground.size()));
    for (int k = 0; k < ground.size(); ++k) labels[static_cast<std::size_t>(k)] = ground.row_of_index(k);
    return SetPartition(std::move(ground), std::move(labels));
  }

  const GroundSet& ground() const { return ground_; }
  int block_count() const { return block_count_; }
  const std::vector<int>& encoding() const { return labels_; }

  /// 1-based index of the block containing e.
  int block_index(Element e) const { return labels_[static_cast<std::size_t>(ground_.index_of(e))] + 1; }

  std::vector<std::vector<Element>> blocks() const {
    std::vector<std::vector<Element>> out(static_cast<std::size_t>(block_count_));
    for (int k = 0; k < ground_.size(); ++k)
      out[static_cast<std::size_t>(labels_[static_cast<std::size_t>(k)])].push_back(ground_.element_at(k));
    return out;
  }

  /// Bitmask of 0-based rows touched by each block.
  std::vector<std::uint64_t> block_row_masks() const {
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(block_count_), 0);
    for (int k = 0; k < ground_.size(); ++k)
      masks[static_cast<std::size_t>(labels_[static_cast<std::size_t>(k)])] |= std::uint64_t{1} << ground_.row_of_index(k);
    return masks;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    bool first_block = true;
    for (const auto& block : blocks()) {
      if (!first_block) os << ',';
      first_block = false;
      os << '{';
      for (std::size_t i = 0; i < block.size(); ++i) {
        if (i) os << ',';
        os << '(' << block[i].row << ',' << block[i].col << ')';
      }
      os << '}';
    }
    os << '}';
    return os.str();
  }

  bool operator==(const SetPartition& other) const {
    return ground_ == other.ground_ && labels_ == other.labels_;
  }

 private:
  GroundSet ground_;
  std::vector<int> labels_;
  int block_count_ = 0;
};

namespace detail {

inline bool masks_non_flat(std::span<const int> labels, const GroundSet& g, int blocks) {
  std::vector<std::uint64_t> seen(static_cast<std::size_t>(blocks), 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    std::uint64_t bit = std::uint64_t{1} << g.row_of_index(static_cast<int>(k));
    auto& m = seen[static_cast<std::size_t>(labels[k])];
    if (m & bit) return false;
    m |= bit;
  }
  return true;
}

// Connected components of the row hypergraph, as row bitmasks in order of
// their smallest row.
inline std::vector<std::uint64_t> row_component_masks(std::span<const std::uint64_t> block_masks, int rows) {
  std::vector<std::uint64_t> comps;
  std::uint64_t assigned = 0;
  for (int i = 0; i < rows; ++i) {
    std::uint64_t bit = std::uint64_t{1} << i;
    if (assigned & bit) continue;
    std::uint64_t comp = bit;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::uint64_t m : block_masks) {
        if ((m & comp) && (m & ~comp)) {
          comp |= m;
          grew = true;
        }
      }
    }
    assigned |= comp;
    comps.push_back(comp);
  }
  return comps;
}

inline bool masks_connected(std::span<const std::uint64_t> block_masks, int rows) {
  if (rows == 1) return true;
  std::uint64_t all = rows == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
  std::uint64_t comp = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::uint64_t m : block_masks) {
      if ((m & comp) && (m & ~comp)) {
        comp |= m;
        grew = true;
      }
    }
  }
  return comp == all;
}

// One ordered pass over the blocks: the first block touching two or more rows
// seeds a row set, later blocks are absorbed only if they intersect the set
// at the time they are visited. Skipped blocks are never revisited.
inline bool masks_single_pass_connected(std::span<const std::uint64_t> block_masks, int rows) {
  if (rows == 1) return true;
  std::uint64_t seed = 0;
  for (std::uint64_t m : block_masks) {
    if (std::popcount(m) < 2) continue;
    if (seed == 0) {
      seed = m;
    } else if (seed & m) {
      seed |= m;
    }
  }
  return std::popcount(seed) == rows;
}

}  // namespace detail

/// True iff no block holds two elements of the same row.
inline bool is_non_flat(const SetPartition& p) {
  return detail::masks_non_flat(p.encoding(), p.ground(), p.block_count());
}

/// True iff the blocks, viewed as hyperedges over rows, link all rows.
inline bool is_connected(const SetPartition& p) {
  auto masks = p.block_row_masks();
  return detail::masks_connected(masks, p.ground().rows());
}

/// Connectivity as decided by the single ordered pass of the original
/// reference scripts; agrees with is_connected for n <= 3 rows and undercounts
/// from n = 4 on.
inline bool is_connected_single_pass(const SetPartition& p) {
  auto masks = p.block_row_masks();
  return detail::masks_single_pass_connected(masks, p.ground().rows());
}

/// sigma_rho: the partition of the row indices {1..n} induced by p v pi.
inline std::vector<std::vector<int>> row_components(const SetPartition& p) {
  auto masks = p.block_row_masks();
  std::vector<std::vector<int>> out;
  for (std::uint64_t comp : detail::row_component_masks(masks, p.ground().rows())) {
    std::vector<int> rows;
    for (int i = 0; i < p.ground().rows(); ++i)
      if (comp & (std::uint64_t{1} << i)) rows.push_back(i + 1);
    out.push_back(std::move(rows));
  }
  return out;
}

enum class PartitionFilter {
  all,
  non_flat,
  connected_non_flat,
  single_pass_connected_non_flat,
};

/// Lightweight view of the partition currently visited by an enumerator.
class PartitionCursor {
 public:
  PartitionCursor(const GroundSet& ground, std::span<const int> labels, int blocks,
                  std::span<const std::uint64_t> row_masks)
      : ground_(&ground), labels_(labels), blocks_(blocks), row_masks_(row_masks) {}

  const GroundSet& ground() const { return *ground_; }
  std::span<const int> encoding() const { return labels_; }
  int block_count() const { return blocks_; }
  std::span<const std::uint64_t> row_masks() const { return row_masks_; }
  SetPartition materialize() const { return SetPartition(*ground_, {labels_.begin(), labels_.end()}); }

 private:
  const GroundSet* ground_;
  std::span<const int> labels_;
  int blocks_;
  std::span<const std::uint64_t> row_masks_;
};

/// A restartable unit of enumeration work: every partition whose encoding
/// starts with `prefix`.
struct PartitionChunk {
  std::vector<int> prefix;
};

/// Generates restricted-growth strings depth first. For the non-flat filters
/// a prefix that places two elements of one row in the same block is pruned
/// immediately, so flat partitions are never materialized.
class PartitionEnumerator {
 public:
  PartitionEnumerator(GroundSet ground, PartitionFilter filter, int max_elements = kDefaultMaxElements)
      : ground_(std::move(ground)), filter_(filter) {
    if (ground_.size() > max_elements) {
      std::ostringstream os;
      os << "ground set has " << ground_.size() << " elements, over the limit of " << max_elements;
      throw ResourceError(os.str(), max_elements);
    }
  }

  const GroundSet& ground() const { return ground_; }
  PartitionFilter filter() const { return filter_; }

  template <class Visitor>
  void for_each(Visitor&& visit) const {
    for_each_in(PartitionChunk{}, visit);
  }

  /// Splits the stream into at least `min_chunks` prefixes (when the ground set
  /// allows it). Visiting the chunks in order reproduces for_each's order.
  std::vector<PartitionChunk> chunks(std::size_t min_chunks) const {
    std::vector<PartitionChunk> level{PartitionChunk{}};
    for (int depth = 0; depth < ground_.size() && level.size() < min_chunks; ++depth) {
      std::vector<PartitionChunk> next;
      for (const auto& chunk : level) {
        State s(*this);
        s.load(chunk.prefix);
        int row_bit_shift = ground_.row_of_index(depth);
        std::uint64_t bit = std::uint64_t{1} << row_bit_shift;
        for (int b = 0; b <= s.blocks; ++b) {
          if (b < s.blocks && prune_flat() && (s.masks[static_cast<std::size_t>(b)] & bit)) continue;
          auto prefix = chunk.prefix;
          prefix.push_back(b);
          next.push_back(PartitionChunk{std::move(prefix)});
        }
      }
      level = std::move(next);
    }
    return level;
  }

  template <class Visitor>
  void for_each_in(const PartitionChunk& chunk, Visitor&& visit) const {
    State s(*this);
    s.load(chunk.prefix);
    descend(s, static_cast<int>(chunk.prefix.size()), visit);
  }

  bool accepts(const PartitionCursor& c) const {
    switch (filter_) {
      case PartitionFilter::all:
      case PartitionFilter::non_flat:
        return true;
      case PartitionFilter::connected_non_flat:
        return detail::masks_connected(c.row_masks(), ground_.rows());
      case PartitionFilter::single_pass_connected_non_flat:
        return detail::masks_single_pass_connected(c.row_masks(), ground_.rows());
    }
    return false;
  }

 private:
  struct State {
    explicit State(const PartitionEnumerator& e)
        : labels(static_cast<std::size_t>(e.ground_.size()), 0),
          masks(static_cast<std::size_t>(e.ground_.size()), 0),
          owner(&e) {}

    void load(const std::vector<int>& prefix) {
      for (std::size_t k = 0; k < prefix.size(); ++k) {
        int b = prefix[k];
        if (b > blocks) throw DomainError("chunk prefix is not a restricted-growth string");
        labels[k] = b;
        if (b == blocks) ++blocks;
        masks[static_cast<std::size_t>(b)] |= std::uint64_t{1} << owner->ground_.row_of_index(static_cast<int>(k));
      }
    }

    std::vector<int> labels;
    std::vector<std::uint64_t> masks;
    int blocks = 0;
    const PartitionEnumerator* owner;
  };

  bool prune_flat() const { return filter_ != PartitionFilter::all; }

  template <class Visitor>
  void descend(State& s, int k, Visitor& visit) const {
    if (k == ground_.size()) {
      PartitionCursor cursor(ground_, s.labels, s.blocks,
                             std::span<const std::uint64_t>(s.masks.data(), static_cast<std::size_t>(s.blocks)));
      if (accepts(cursor)) visit(cursor);
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << ground_.row_of_index(k);
    const bool prune = prune_flat();
    const int open = s.blocks;
    for (int b = 0; b < open; ++b) {
      auto& m = s.masks[static_cast<std::size_t>(b)];
      if (prune && (m & bit)) continue;
      const std::uint64_t saved = m;
      m |= bit;
      s.labels[static_cast<std::size_t>(k)] = b;
      descend(s, k + 1, visit);
      m = saved;
    }
    s.labels[static_cast<std::size_t>(k)] = open;
    s.masks[static_cast<std::size_t>(open)] = bit;
    ++s.blocks;
    descend(s, k + 1, visit);
    --s.blocks;
    s.masks[static_cast<std::size_t>(open)] = 0;
  }

  GroundSet ground_;
  PartitionFilter filter_;
};

/// Histogram of partitions by block count.
struct Census {
  std::map<int, std::uint64_t> by_block_count;
  std::uint64_t total = 0;

  void add(int blocks) {
    ++by_block_count[blocks];
    ++total;
  }

  Census& merge(const Census& other) {
    for (const auto& [blocks, count] : other.by_block_count) by_block_count[blocks] += count;
    total += other.total;
    return *this;
  }

  bool operator==(const Census&) const = default;
};

struct CensusOptions {
  unsigned workers = 1;
  int max_elements = kDefaultMaxElements;
};

inline Census partition_census(const GroundSet& ground, PartitionFilter filter, CensusOptions options = {}) {
  PartitionEnumerator enumerator(ground, filter, options.max_elements);
  unsigned workers = options.workers == 0 ? default_worker_count() : options.workers;
  if (workers <= 1) {
    Census census;
    enumerator.for_each([&](const PartitionCursor& c) { census.add(c.block_count()); });
    return census;
  }
  auto chunks = enumerator.chunks(std::size_t{workers} * 16);
  std::vector<Census> partial(chunks.size());
  parallel_for(chunks.size(), workers, [&](std::size_t i, unsigned) {
    enumerator.for_each_in(chunks[i], [&](const PartitionCursor& c) { partial[i].add(c.block_count()); });
  });
  Census census;
  for (const auto& c : partial) census.merge(c);
  return census;
}

inline const char* to_string(PartitionFilter f) {
  switch (f) {
    case PartitionFilter::all: return "all";
    case PartitionFilter::non_flat: return "non-flat";
    case PartitionFilter::connected_non_flat: return "connected-non-flat";
    case PartitionFilter::single_pass_connected_non_flat: return "single-pass-connected-non-flat";
  }
  return "?";
}

}  // namespace rcm
