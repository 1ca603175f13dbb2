#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rcm {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long long num, long long den = 1) {
  Rational q(Integer(std::to_string(num)), Integer(std::to_string(den)));
  q.canonicalize();
  return q;
}

inline Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

}  // namespace rcm
