#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "rcm/algebra/scalar.hpp"
#include "rcm/errors.hpp"

namespace rcm {

/// Polynomial in the intensity lambda with AlgebraicScalar coefficients.
/// Zero coefficients are never stored.
class LambdaPoly {
 public:
  using Coeffs = std::map<int, AlgebraicScalar>;

  LambdaPoly() = default;
  LambdaPoly(const AlgebraicScalar& c) { add(0, c); }  // NOLINT(google-explicit-constructor)

  static LambdaPoly monomial(int degree, const AlgebraicScalar& c) {
    if (degree < 0) throw DomainError("negative polynomial degree");
    LambdaPoly p;
    p.add(degree, c);
    return p;
  }

  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  AlgebraicScalar coeff(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? AlgebraicScalar{} : it->second;
  }

  /// Highest degree; throws for the zero polynomial.
  int degree() const {
    if (coeffs_.empty()) throw DomainError("degree of the zero polynomial");
    return coeffs_.rbegin()->first;
  }

  int min_degree() const {
    if (coeffs_.empty()) throw DomainError("degree of the zero polynomial");
    return coeffs_.begin()->first;
  }

  const AlgebraicScalar& leading() const {
    if (coeffs_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return coeffs_.rbegin()->second;
  }

  void add(int degree, const AlgebraicScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(degree, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  LambdaPoly& operator+=(const LambdaPoly& o) {
    for (const auto& [k, c] : o.coeffs_) add(k, c);
    return *this;
  }
  LambdaPoly& operator-=(const LambdaPoly& o) {
    for (const auto& [k, c] : o.coeffs_) add(k, -c);
    return *this;
  }

  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator-(const LambdaPoly& a) { return LambdaPoly{} - a; }

  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
    LambdaPoly out;
    for (const auto& [ka, ca] : a.coeffs_)
      for (const auto& [kb, cb] : b.coeffs_) out.add(ka + kb, ca * cb);
    return out;
  }
  LambdaPoly& operator*=(const LambdaPoly& o) { return *this = *this * o; }

  LambdaPoly scaled(const AlgebraicScalar& s) const {
    LambdaPoly out;
    for (const auto& [k, c] : coeffs_) out.add(k, c * s);
    return out;
  }

  /// Exact coefficients are converted to binary64 once each, then combined by
  /// Horner's rule over the dense degree range.
  double evaluate(double lambda) const {
    if (lambda < 0 || std::isnan(lambda)) throw DomainError("lambda must be non-negative");
    if (coeffs_.empty()) return 0.0;
    long double acc = 0;
    int top = degree();
    for (int k = top; k >= 0; --k) {
      acc = acc * lambda;
      auto it = coeffs_.find(k);
      if (it != coeffs_.end()) acc += it->second.to_double();
    }
    return static_cast<double>(acc);
  }

  bool operator==(const LambdaPoly& o) const { return coeffs_ == o.coeffs_; }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << "(" << it->second.to_string() << ")";
      if (it->first > 0) os << "*lambda^" << it->first;
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const LambdaPoly& p) { return os << p.to_string(); }

 private:
  Coeffs coeffs_;
};

}  // namespace rcm
