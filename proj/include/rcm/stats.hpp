#pragma once

// Downstream statistics built on exact moment and cumulant polynomials.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "rcm/algebra/poly.hpp"
#include "rcm/algebra/stirling.hpp"
#include "rcm/cumulants.hpp"
#include "rcm/errors.hpp"

namespace rcm {

/// Probabilists' Hermite polynomials H_0, H_1, H_3, H_4, H_6.
inline double hermite(int k, double x) {
  const double x2 = x * x;
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 3: return x * (x2 - 3.0);
    case 4: return (x2 - 6.0) * x2 + 3.0;
    case 6: return ((x2 - 15.0) * x2 + 45.0) * x2 - 15.0;
    default: throw DomainError("hermite: only k in {0,1,3,4,6} is supported");
  }
}

struct GramCharlierCoeffs {
  double kappa1 = 0, kappa2 = 1, kappa3 = 0, kappa4 = 0;
  std::optional<double> kappa5;  // accepted, unused by orders 2..4
  std::optional<double> kappa6;
  double c3 = 0, c4 = 0, c6 = 0;

  static GramCharlierCoeffs from_cumulants(double k1, double k2, double k3 = 0, double k4 = 0,
                                           std::optional<double> k5 = std::nullopt,
                                           std::optional<double> k6 = std::nullopt) {
    if (!(k2 > 0)) throw DomainError("Gram-Charlier expansion needs kappa_2 > 0");
    GramCharlierCoeffs c{k1, k2, k3, k4, k5, k6};
    c.c3 = k3 / (6.0 * std::pow(k2, 1.5));
    c.c4 = k4 / (24.0 * k2 * k2);
    c.c6 = k6.value_or(0.0) / (720.0 * k2 * k2 * k2) + k3 * k3 / (72.0 * k2 * k2 * k2);
    return c;
  }
};

/// Gram-Charlier type-A density of order 2 (Gaussian), 3 or 4.
inline double gc_density(int order, const GramCharlierCoeffs& c, double x) {
  if (!(c.kappa2 > 0)) throw DomainError("Gram-Charlier expansion needs kappa_2 > 0");
  if (order < 2 || order > 4) throw DomainError("Gram-Charlier order must be 2, 3 or 4");
  const double sd = std::sqrt(c.kappa2);
  const double z = (x - c.kappa1) / sd;
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  double correction = 1.0;
  if (order >= 3) correction += c.c3 * hermite(3, z);
  if (order >= 4) correction += c.c4 * hermite(4, z) + c.c6 * hermite(6, z);
  return phi * correction / sd;
}

namespace detail {
inline double times_integer(double v, const Integer& c) { return v * c.get_d(); }
inline LambdaPoly times_integer(const LambdaPoly& p, const Integer& c) { return p.scaled(AlgebraicScalar(Rational(c))); }
}  // namespace detail

/// Factorial moments m_n = E[X(X-1)...(X-n+1)] = sum_k s(n,k) E[X^k], n = 1..K,
/// from raw moments E[X^1..X^K].
template <class T>
std::vector<T> factorial_moments(const std::vector<T>& raw_moments, int order) {
  if (order < 1) throw DomainError("factorial moment order must be at least 1");
  if (order > static_cast<int>(raw_moments.size()))
    throw DomainError("factorial moments up to order " + std::to_string(order) + " need as many raw moments");
  std::vector<T> out;
  for (int n = 1; n <= order; ++n) {
    T acc{};
    for (int k = 1; k <= n; ++k) acc = acc + detail::times_integer(raw_moments[static_cast<std::size_t>(k - 1)], stirling_first_signed(n, k));
    out.push_back(std::move(acc));
  }
  return out;
}

template <class T>
std::vector<T> factorial_moments(const std::vector<T>& raw_moments) {
  return factorial_moments(raw_moments, static_cast<int>(raw_moments.size()));
}

struct SeriesEstimate {
  std::vector<double> partial_sums;  // S_0..S_I
  double last_gap = 0.0;             // |S_I - S_{I-1}|, 0 when I = 0
  double value() const { return partial_sums.back(); }
};

/// Partial sums of P(X = n) = (1/n!) sum_i (-1)^i m_{n+i} / i!, with
/// factorial_moments[k-1] = m_k and m_0 = 1.
inline SeriesEstimate prob_count_equals(int n, const std::vector<double>& factorial_moments, int truncation) {
  if (n < 0 || truncation < 0) throw DomainError("prob_count_equals expects n >= 0 and I >= 0");
  if (n + truncation > static_cast<int>(factorial_moments.size()))
    throw DomainError("need factorial moments through order " + std::to_string(n + truncation));
  auto m = [&](int k) { return k == 0 ? 1.0 : factorial_moments[static_cast<std::size_t>(k - 1)]; };
  const double inv_n_fact = 1.0 / std::tgamma(n + 1.0);
  SeriesEstimate out;
  long double acc = 0;
  long double inv_i_fact = 1;
  for (int i = 0; i <= truncation; ++i) {
    if (i > 0) inv_i_fact /= i;
    long double term = inv_i_fact * m(n + i);
    acc += (i % 2 == 0) ? term : -term;
    out.partial_sums.push_back(static_cast<double>(acc * inv_n_fact));
  }
  if (truncation > 0) out.last_gap = std::abs(out.partial_sums[static_cast<std::size_t>(truncation)] - out.partial_sums[static_cast<std::size_t>(truncation - 1)]);
  return out;
}

/// Second-moment bound P(N > 0) >= (E N)^2 / E[N^2].
inline double connectivity_lower_bound(const LambdaPoly& first_moment, const LambdaPoly& second_moment, double lambda) {
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  double second = second_moment.evaluate(lambda);
  if (!(second > 0)) throw DomainError("E[N^2] vanishes at this lambda");
  double first = first_moment.evaluate(lambda);
  return first * first / second;
}

inline double connectivity_lower_bound(const GraphSpec& spec, const ModelConfig& model, double lambda,
                                       const EngineOptions& options = {}) {
  auto m1 = moment(1, spec, model, options);
  auto m2 = moment(2, spec, model, options);
  if (!m1.exact) {
    double second = m2.evaluate(lambda);
    if (!(second > 0)) throw DomainError("E[N^2] vanishes at this lambda");
    double first = m1.evaluate(lambda);
    return first * first / second;
  }
  return connectivity_lower_bound(m1.value, m2.value, lambda);
}

struct Rate {
  double value;     // lambda^{-exponent}
  double exponent;  // 1/(4r-2)
};

/// Kolmogorov-distance rate lambda^{-1/(4r-2)} of the normal approximation;
/// the multiplicative constant is not known, so this is a rate, not a bound.
inline Rate berry_esseen_rate(int r, double lambda) {
  if (r < 2) throw DomainError("berry_esseen_rate expects r >= 2");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  double exponent = 1.0 / (4.0 * r - 2.0);
  return {std::pow(lambda, -exponent), exponent};
}

/// kappa(N1, N2)(lambda) / sqrt(kappa_2(N1)(lambda) kappa_2(N2)(lambda)).
inline double joint_correlation(const LambdaPoly& joint, const LambdaPoly& var1, const LambdaPoly& var2, double lambda) {
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  double v1 = var1.evaluate(lambda);
  double v2 = var2.evaluate(lambda);
  if (!(v1 > 0) || !(v2 > 0)) throw DomainError("zero variance in joint_correlation");
  return joint.evaluate(lambda) / std::sqrt(v1 * v2);
}

/// Limit of joint_correlation as lambda -> infinity from leading coefficients.
inline double limit_correlation(const LambdaPoly& joint, const LambdaPoly& var1, const LambdaPoly& var2) {
  if (var1.is_zero() || var2.is_zero()) throw DomainError("zero variance in limit_correlation");
  if (joint.is_zero()) return 0.0;
  const int excess = 2 * joint.degree() - var1.degree() - var2.degree();
  if (excess < 0) return 0.0;
  if (excess > 0) throw DomainError("joint cumulant grows faster than the geometric mean of the variances");
  return joint.leading().to_double() / std::sqrt(var1.leading().to_double() * var2.leading().to_double());
}

}  // namespace rcm
