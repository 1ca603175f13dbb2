#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "rcm/golden.hpp"
#include "rcm/stats.hpp"

using namespace rcm;

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

TEST(Hermite, Values) {
  EXPECT_DOUBLE_EQ(hermite(4, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(hermite(3, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite(6, 1.0), 16.0);
  EXPECT_DOUBLE_EQ(hermite(1, -2.5), -2.5);
  EXPECT_THROW(hermite(2, 0.0), DomainError);
}

TEST(Hermite, OrthogonalUnderStandardNormal) {
  const std::vector<int> ks{0, 1, 3, 4, 6};
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi); };
  for (int a : ks) {
    for (int b : ks) {
      double v = integrate([&](double z) { return hermite(a, z) * hermite(b, z) * phi(z); }, -14, 14);
      double expected = a == b ? std::tgamma(a + 1.0) : 0.0;
      EXPECT_NEAR(v, expected, 1e-9 * (1 + expected)) << a << " " << b;
    }
  }
}

TEST(GramCharlier, MassMeanAndVariance) {
  const double k1 = 10, k2 = 4, k3 = 1.5, k4 = 0.8;
  auto c = GramCharlierCoeffs::from_cumulants(k1, k2, k3, k4);
  const double lo = k1 - 12 * std::sqrt(k2), hi = k1 + 12 * std::sqrt(k2);
  for (int order = 2; order <= 4; ++order) {
    auto f = [&](double x) { return gc_density(order, c, x); };
    EXPECT_NEAR(integrate(f, lo, hi), 1.0, 1e-9) << order;
    EXPECT_NEAR(integrate([&](double x) { return x * f(x); }, lo, hi), k1, 1e-9) << order;
    EXPECT_NEAR(integrate([&](double x) { return (x - k1) * (x - k1) * f(x); }, lo, hi), k2, 1e-9) << order;
  }
  auto third = [&](int order) {
    return integrate([&](double x) { return std::pow(x - k1, 3) * gc_density(order, c, x); }, lo, hi);
  };
  EXPECT_NEAR(third(2), 0.0, 1e-9);
  EXPECT_NEAR(third(3), k3, 1e-9);
}

TEST(GramCharlier, OrderFourFourthCumulant) {
  // With kappa_3 = 0 the order-4 density reproduces kappa_4 exactly.
  const double k2 = 2.0, k4 = 0.7;
  auto c = GramCharlierCoeffs::from_cumulants(0.0, k2, 0.0, k4);
  double m4 = integrate([&](double x) { return std::pow(x, 4) * gc_density(4, c, x); }, -20, 20);
  EXPECT_NEAR(m4 - 3 * k2 * k2, k4, 1e-9);
}

TEST(GramCharlier, RejectsBadInput) {
  EXPECT_THROW(GramCharlierCoeffs::from_cumulants(0, 0), DomainError);
  auto c = GramCharlierCoeffs::from_cumulants(0, 1);
  EXPECT_THROW(gc_density(5, c, 0), DomainError);
  EXPECT_THROW(gc_density(1, c, 0), DomainError);
}

TEST(FactorialMoments, DegenerateAndPoisson) {
  // X = 1 almost surely.
  auto one = factorial_moments(std::vector<double>{1, 1, 1});
  EXPECT_EQ(one, (std::vector<double>{1, 0, 0}));
  auto s = prob_count_equals(0, one, 2);
  EXPECT_EQ(s.partial_sums, (std::vector<double>{1, 0, 0}));
  EXPECT_DOUBLE_EQ(s.last_gap, 0.0);

  // X in {0, 2} with equal weight: E X^k = 2^{k-1}.
  auto two = factorial_moments(std::vector<double>{1, 2, 4});
  EXPECT_EQ(two, (std::vector<double>{1, 1, 0}));
  auto p0 = prob_count_equals(0, two, 2);
  EXPECT_EQ(p0.partial_sums, (std::vector<double>{1, 0, 0.5}));
  EXPECT_DOUBLE_EQ(p0.value(), 0.5);

  // Poisson(2): m_k = 2^k.
  std::vector<double> poisson;
  for (int k = 1; k <= 22; ++k) poisson.push_back(std::pow(2.0, k));
  EXPECT_NEAR(prob_count_equals(0, poisson, 20).value(), std::exp(-2.0), 1e-6);
  EXPECT_NEAR(prob_count_equals(1, poisson, 20).value(), 2 * std::exp(-2.0), 1e-6);
  EXPECT_NEAR(prob_count_equals(2, poisson, 20).value(), 2 * std::exp(-2.0), 1e-6);
  EXPECT_LT(prob_count_equals(0, poisson, 20).last_gap, 1e-6);
  EXPECT_THROW(prob_count_equals(0, poisson, 30), DomainError);
  EXPECT_THROW(factorial_moments(std::vector<double>{1, 2}, 3), DomainError);
}

TEST(FactorialMoments, ExactPolynomials) {
  auto spec = golden::single_edge();
  std::vector<LambdaPoly> raw;
  for (int n = 1; n <= 3; ++n) raw.push_back(moment(n, spec, golden::line_model()).value);
  auto fm = factorial_moments(raw);
  EXPECT_EQ(fm[0], raw[0]);
  EXPECT_EQ(fm[1], raw[1] - raw[0]);
  EXPECT_EQ(fm[2], raw[2] - raw[1].scaled(AlgebraicScalar(3)) + raw[0].scaled(AlgebraicScalar(2)));
}

TEST(Connectivity, SecondMomentBound) {
  auto spec = golden::single_edge();
  auto model = golden::line_model();
  auto m1 = moment(1, spec, model).value;
  auto m2 = moment(2, spec, model).value;
  auto k2 = cumulant(2, spec, model).value;
  double previous = 0;
  for (double lambda = 0.1; lambda <= 20; lambda *= 1.3) {
    double b = connectivity_lower_bound(m1, m2, lambda);
    double k1 = m1.evaluate(lambda);
    EXPECT_NEAR(b, k1 * k1 / (k2.evaluate(lambda) + k1 * k1), 1e-12);
    EXPECT_GT(b, 0.0);
    EXPECT_LE(b, 1.0);
    EXPECT_GE(b, previous);
    previous = b;
  }
  EXPECT_NEAR(connectivity_lower_bound(spec, model, 2.0), connectivity_lower_bound(m1, m2, 2.0), 1e-15);
  EXPECT_THROW(connectivity_lower_bound(m1, m2, 0.0), DomainError);
}

TEST(BerryEsseen, Rate) {
  auto r = berry_esseen_rate(2, 64.0);
  EXPECT_DOUBLE_EQ(r.exponent, 1.0 / 6.0);
  EXPECT_NEAR(r.value, 0.5, 1e-15);
  EXPECT_NEAR(berry_esseen_rate(3, 1e10).value, 0.1, 1e-12);
  EXPECT_THROW(berry_esseen_rate(1, 2.0), DomainError);
}

TEST(Correlation, TriangleAndFourHop) {
  auto model = golden::gaussian_plane_model();
  std::vector<GraphSpec> pair{golden::triangle(), golden::four_hop()};
  auto joint = joint_cumulant(pair, model).value;
  auto v1 = cumulant(2, golden::triangle(), model).value;
  auto v2 = cumulant(2, golden::four_hop(), model).value;
  EXPECT_NEAR(joint_correlation(v1, v1, v1, 3.0), 1.0, 1e-15);
  for (double lambda : {0.1, 1.0, 10.0, 1e3, 1e6}) {
    double rho = joint_correlation(joint, v1, v2, lambda);
    EXPECT_GT(rho, 0.0);
    EXPECT_LE(rho, 1.0);
  }
  double limit = limit_correlation(joint, v1, v2);
  EXPECT_NEAR(limit, golden::kLimitCorrelation, 5e-7);
  EXPECT_NEAR(joint_correlation(joint, v1, v2, 1e8), limit, 1e-6);
}
