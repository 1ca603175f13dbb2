#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rcm/algebra/integer.hpp"
#include "rcm/errors.hpp"

namespace rcm {

/// Dense square matrix of exact integers, row-major.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(int size) : size_(size), data_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows) : IntegerMatrix(static_cast<int>(rows.size())) {
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != size_) throw DomainError("matrix rows must have equal length");
      int j = 0;
      for (long long v : row) at(i, j++) = Integer(std::to_string(v));
      ++i;
    }
  }

  int size() const { return size_; }
  Integer& at(int i, int j) { return data_[index(i, j)]; }
  const Integer& at(int i, int j) const { return data_[index(i, j)]; }
  bool operator==(const IntegerMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(j);
  }
  int size_ = 0;
  std::vector<Integer> data_;
};

/// Determinant by Bareiss fraction-free elimination. Every intermediate
/// quotient is exact, so the result is exact for any input size.
inline Integer det_fraction_free(IntegerMatrix m) {
  const int n = m.size();
  if (n == 0) return Integer(1);
  Integer previous_pivot = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (m.at(i, k) != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return Integer(0);
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Integer v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous_pivot.get_mpz_t());
        m.at(i, j) = std::move(v);
      }
      m.at(i, k) = 0;
    }
    previous_pivot = m.at(k, k);
  }
  Integer det = m.at(n - 1, n - 1);
  return sign < 0 ? Integer(-det) : det;
}

}  // namespace rcm
