#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "rcm/algebra/integer.hpp"
#include "rcm/errors.hpp"

namespace rcm {

namespace detail {

inline constexpr unsigned long kTrialDivisionBound = 1'000'000;

// Pollard's rho with Brent's cycle detection; returns a non-trivial factor of
// a composite n.
inline Integer pollard_rho(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return Integer(2);
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](const Integer& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Integer diff = abs(x - y);
          q = q * diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Integer diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(const Integer& n, std::map<Integer, unsigned>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
    ++out[n];
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Integer root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    std::map<Integer, unsigned> half;
    factor_into(root, half);
    for (const auto& [p, e] : half) out[p] += 2 * e;
    return;
  }
  Integer d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization of a positive integer: trial division up to 10^6, then
/// Pollard's rho on whatever cofactor remains.
inline std::map<Integer, unsigned> factorize(Integer n) {
  if (n <= 0) throw DomainError("factorize expects a positive integer");
  std::map<Integer, unsigned> out;
  for (unsigned long p = 2; p <= detail::kTrialDivisionBound; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[Integer(p)];
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) {
    if (Integer(detail::kTrialDivisionBound) * detail::kTrialDivisionBound >= n) {
      ++out[n];
    } else {
      detail::factor_into(n, out);
    }
  }
  return out;
}

/// n = outer^2 * core with core squarefree.
struct SquareSplit {
  Integer outer;
  Integer core;
};

inline SquareSplit square_split(const Integer& n) {
  SquareSplit s{1, 1};
  for (const auto& [p, e] : factorize(n)) {
    if (e / 2) s.outer *= pow(p, e / 2);
    if (e % 2) s.core *= p;
  }
  return s;
}

inline bool is_squarefree(const Integer& n) {
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

}  // namespace rcm
