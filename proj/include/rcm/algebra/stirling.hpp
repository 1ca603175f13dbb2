#pragma once

#include <vector>

#include "rcm/algebra/integer.hpp"
#include "rcm/errors.hpp"

namespace rcm {

/// Signed Stirling numbers of the first kind:
///   x(x-1)...(x-n+1) = sum_k s(n,k) x^k.
inline Integer stirling_first_signed(int n, int k) {
  if (n < 0 || k < 0) throw DomainError("stirling_first_signed expects non-negative arguments");
  if (k > n) throw DomainError("stirling_first_signed expects k <= n");
  // row[j] holds s(i, j) while i runs from 0 to n.
  std::vector<Integer> row(static_cast<std::size_t>(n) + 1, Integer(0));
  row[0] = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j >= 1; --j) row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] - Integer(i) * row[static_cast<std::size_t>(j)];
    row[0] = Integer(-i) * row[0];
  }
  return row[static_cast<std::size_t>(k)];
}

}  // namespace rcm
