#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "rcm/algebra/integer.hpp"
#include "rcm/algebra/squarefree.hpp"
#include "rcm/errors.hpp"

namespace rcm {

/// Finite sum  sum_s q_s * sqrt(s)  over squarefree s >= 1 with non-zero
/// rational q_s. The representation is canonical, so == is structural.
class AlgebraicScalar {
 public:
  using Terms = std::map<Integer, Rational>;

  AlgebraicScalar() = default;
  AlgebraicScalar(const Rational& q) { add_term(q, Integer(1)); }  // NOLINT(google-explicit-constructor)
  AlgebraicScalar(long long q) : AlgebraicScalar(make_rational(q)) {}  // NOLINT(google-explicit-constructor)

  /// coeff * sqrt(radicand) for any radicand >= 0, reduced to squarefree form.
  static AlgebraicScalar term(const Rational& coeff, const Integer& radicand) {
    if (radicand < 0) throw DomainError("square root of a negative integer");
    AlgebraicScalar out;
    if (radicand == 0 || coeff == 0) return out;
    auto [outer, core] = square_split(radicand);
    out.add_term(coeff * Rational(outer), core);
    return out;
  }

  /// sqrt(q) for a non-negative rational q = a/b, written as sqrt(a*b)/b.
  static AlgebraicScalar sqrt_of(const Rational& q) {
    if (q < 0) throw DomainError("square root of a negative rational");
    Rational inv_den(Integer(1), q.get_den());
    return term(inv_den, q.get_num() * q.get_den());
  }

  /// 1/sqrt(m) = sqrt(m)/m.
  static AlgebraicScalar inv_sqrt(const Integer& m) {
    if (m <= 0) throw DomainError("inv_sqrt expects a positive integer");
    return term(Rational(Integer(1), m), m);
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1); }

  /// Rational part (coefficient of sqrt(1)).
  Rational rational_part() const {
    auto it = terms_.find(Integer(1));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool all_terms_positive() const {
    for (const auto& [s, q] : terms_)
      if (q <= 0) return false;
    return !terms_.empty();
  }

  /// Each sqrt(s) is evaluated once in extended precision, then combined.
  double to_double() const {
    long double acc = 0;
    for (const auto& [s, q] : terms_) {
      long double root = std::sqrt(static_cast<long double>(s.get_d()));
      long double coeff = static_cast<long double>(q.get_num().get_d()) / static_cast<long double>(q.get_den().get_d());
      acc += coeff * root;
    }
    return static_cast<double>(acc);
  }

  AlgebraicScalar& operator+=(const AlgebraicScalar& other) {
    for (const auto& [s, q] : other.terms_) add_term(q, s);
    return *this;
  }

  AlgebraicScalar& operator-=(const AlgebraicScalar& other) {
    for (const auto& [s, q] : other.terms_) add_term(-q, s);
    return *this;
  }

  AlgebraicScalar& operator*=(const AlgebraicScalar& other) {
    *this = *this * other;
    return *this;
  }

  friend AlgebraicScalar operator+(AlgebraicScalar a, const AlgebraicScalar& b) { return a += b; }
  friend AlgebraicScalar operator-(AlgebraicScalar a, const AlgebraicScalar& b) { return a -= b; }

  friend AlgebraicScalar operator-(const AlgebraicScalar& a) {
    AlgebraicScalar out;
    for (const auto& [s, q] : a.terms_) out.terms_.emplace(s, -q);
    return out;
  }

  // sqrt(a)*sqrt(b) = g*sqrt((a/g)(b/g)) with g = gcd(a, b); the cofactors are
  // coprime and squarefree, so no factorization is needed.
  friend AlgebraicScalar operator*(const AlgebraicScalar& a, const AlgebraicScalar& b) {
    AlgebraicScalar out;
    for (const auto& [sa, qa] : a.terms_) {
      for (const auto& [sb, qb] : b.terms_) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), sa.get_mpz_t(), sb.get_mpz_t());
        Integer core = (sa / g) * (sb / g);
        out.add_term(qa * qb * Rational(g), core);
      }
    }
    return out;
  }

  AlgebraicScalar divided_by(const Rational& q) const {
    if (q == 0) throw DomainError("division of an algebraic scalar by zero");
    AlgebraicScalar out;
    for (const auto& [s, c] : terms_) out.terms_.emplace(s, Rational(c / q));
    return out;
  }

  friend AlgebraicScalar operator/(const AlgebraicScalar& a, const Rational& q) { return a.divided_by(q); }

  bool operator==(const AlgebraicScalar& other) const { return terms_ == other.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, q] : terms_) {
      if (!first) os << (q < 0 ? " - " : " + ");
      else if (q < 0) os << "-";
      first = false;
      Rational mag = abs(q);
      if (s == 1) {
        os << mag.get_str();
      } else {
        if (mag != 1) os << mag.get_str() << "*";
        os << "sqrt(" << s.get_str() << ")";
      }
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const AlgebraicScalar& a) { return os << a.to_string(); }

 private:
  void add_term(const Rational& q, const Integer& squarefree) {
    if (q == 0) return;
    auto [it, inserted] = terms_.try_emplace(squarefree, q);
    if (!inserted) {
      it->second += q;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

}  // namespace rcm
