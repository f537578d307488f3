#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "chebmoll/cheb_core.hpp"
#include "chebmoll/numerics.hpp"

using namespace chebmoll;

namespace {

double gaussian(double x) { return std::exp(-x * x * 18.0); }
double gaussian_prime(double x) { return -36.0 * x * gaussian(x); }

template <class Fn>
void expect_error(Fn&& fn, ErrorCode code) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(CollocationGrid, NodesAndWeightsForOrderFour) {
  const CollocationGrid g(4);
  ASSERT_EQ(g.size(), 5u);
  const double r = std::sqrt(0.5);
  const std::vector<double> expected{1.0, r, 0.0, -r, -1.0};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(g.node(i), expected[i], 1e-15);
  EXPECT_DOUBLE_EQ(g.weight(0), std::numbers::pi / 8.0);
  EXPECT_DOUBLE_EQ(g.weight(2), std::numbers::pi / 4.0);
}

TEST(CollocationGrid, SymmetricWithExactEndpoints) {
  for (int n : {2, 3, 7, 32, 129}) {
    const CollocationGrid g(n);
    EXPECT_EQ(g.node(0), 1.0);
    EXPECT_EQ(g.node(g.size() - 1), -1.0);
    double wsum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(g.node(i), -g.node(g.size() - 1 - i));
      if (i > 0) {
        EXPECT_LT(g.node(i), g.node(i - 1));
      }
      wsum += g.weight(i);
    }
    EXPECT_NEAR(wsum, std::numbers::pi, 1e-13);
  }
}

TEST(CollocationGrid, RejectsLowOrder) {
  expect_error([] { CollocationGrid g(1); }, ErrorCode::invalid_order);
  expect_error([] { build_diff_operators(1); }, ErrorCode::invalid_order);
}

TEST(Domain, EndpointsMapExactly) {
  const Domain d(0.0, 3.0);
  EXPECT_EQ(d.to_reference(0.0), -1.0);
  EXPECT_EQ(d.to_reference(3.0), 1.0);
  EXPECT_EQ(d.from_reference(-1.0), 0.0);
  EXPECT_EQ(d.from_reference(1.0), 3.0);
  EXPECT_DOUBLE_EQ(d.from_reference(d.to_reference(1.2)), 1.2);
  expect_error([] { Domain(1.0, 1.0); }, ErrorCode::invalid_argument);
}

TEST(ChebEval, ClosedForms) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng);
    EXPECT_NEAR(cheb_eval(3, x), 4 * x * x * x - 3 * x, 1e-14);
    EXPECT_NEAR(cheb_eval(17, x), std::cos(17 * std::acos(x)), 1e-13);
    EXPECT_NEAR(cheb_second_kind_eval(3, x), 8 * x * x * x - 4 * x, 1e-14);
  }
  expect_error([] { cheb_eval(2, 1.5); }, ErrorCode::out_of_domain);
}

TEST(ChebEval, DerivativeAtEndpoints) {
  for (int n = 1; n <= 40; ++n) {
    EXPECT_DOUBLE_EQ(cheb_deriv_eval(n, 1.0), n * n);
    EXPECT_DOUBLE_EQ(cheb_deriv_eval(n, -1.0), (n % 2 == 1 ? 1.0 : -1.0) * n * n);
  }
}

TEST(Quadrature, ExactUpToDegreeTwoNMinusOne) {
  // int x^k / sqrt(1 - x^2) = pi (k - 1)!! / k!! for even k, 0 for odd k.
  auto moment = [](int k) {
    if (k % 2 == 1) return 0.0;
    double r = std::numbers::pi;
    for (int j = 1; j <= k; j += 2) r *= static_cast<double>(j) / (j + 1);
    return r;
  };
  for (int n : {4, 9, 16}) {
    const CollocationGrid g(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const auto f = sample(g, [k](double x) { return std::pow(x, k); });
      EXPECT_NEAR(quadrature_integrate(f), moment(k), 1e-12) << "N=" << n << " k=" << k;
    }
    // T_2N aliases onto T_0 on the grid: the rule gives pi, the integral is 0.
    const auto t2n = sample(g, [n](double x) { return cheb_eval(2 * n, x); });
    EXPECT_NEAR(quadrature_integrate(t2n), std::numbers::pi, 1e-12);
  }
}

TEST(Transform, AnalyzeRecoversBasisPolynomials) {
  const int n = 12;
  const CollocationGrid g(n);
  for (int k = 0; k <= n; ++k) {
    const auto e = analyze(sample(g, [k](double x) { return cheb_eval(k, x); }));
    for (int i = 0; i <= n; ++i) EXPECT_NEAR(e.coeff(i), i == k ? 1.0 : 0.0, 1e-13) << k << " " << i;
  }
}

TEST(Transform, RoundTripOnRandomData) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int n : {5, 32, 128}) {
    const CollocationGrid g(n);
    std::vector<double> v(g.size());
    for (auto& x : v) x = nd(rng);
    const GridFunction f(g, v);
    const auto back = synthesize(analyze(f), g.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(back[i], v[i], 1e-11);
  }
}

TEST(Transform, GaussianCoefficientsMatchContinuousProjection) {
  // u_n = (2/pi) int_0^pi g(cos t) cos(n t) dt (halved for n = 0).
  const int n = 32;
  const auto e = analyze(sample(CollocationGrid(n), gaussian));
  boost::math::quadrature::tanh_sinh<double> ts;
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double c =
        ts.integrate([k](double t) { return gaussian(std::cos(t)) * std::cos(k * t); }, 0.0, std::numbers::pi) *
        (k == 0 ? 1.0 : 2.0) / std::numbers::pi;
    worst = std::max(worst, std::abs(c - e.coeff(k)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Transform, GaussianCoefficientDecay) {
  const auto e = analyze(sample(CollocationGrid(128), gaussian));
  int first_small = -1;
  for (int k = 0; k <= 128; ++k) {
    bool tail_small = true;
    for (int j = k; j <= 128; ++j) tail_small = tail_small && std::abs(e.coeff(j)) < 1e-12;
    if (tail_small) {
      first_small = k;
      break;
    }
  }
  ASSERT_GT(first_small, 0);
  // The tail drops below 1e-12 at n = 49, not before n = 40.
  EXPECT_EQ(first_small, 49);
  EXPECT_GT(std::abs(e.coeff(40)), 1e-10);
}

TEST(Transform, ClenshawMatchesDirectSum) {
  const SpectralExpansion e({0.5, -1.0, 0.25, 0.125, -2.0}, Domain(2.0, 4.0));
  for (double x : {2.0, 2.3, 3.0, 3.9, 4.0}) {
    const double xi = e.domain().to_reference(x);
    double direct = 0.0;
    for (int k = 0; k <= 4; ++k) direct += e.coeff(k) * cheb_eval(k, xi);
    EXPECT_NEAR(e(x), direct, 1e-14);
  }
  expect_error([&] { e(4.5); }, ErrorCode::out_of_domain);
}

TEST(Differentiation, ModalMatrixIsStrictlyUpperTriangular) {
  const auto m = modal_diff_matrix(10);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= i; ++j) EXPECT_EQ(m(i, j), 0.0);
}

TEST(Differentiation, ModalDerivativeOfT3) {
  const auto ops = build_diff_operators(4);
  const auto d = differentiate(SpectralExpansion({0, 0, 0, 1, 0}), ops);
  const std::vector<double> expected{3, 0, 6, 0, 0};
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(d.coeff(k), expected[k], 1e-14);
}

TEST(Differentiation, NodalExactForPolynomials) {
  const int n = 9;
  const CollocationGrid g(n);
  const auto ops = build_diff_operators(n);
  const auto f = sample(g, [](double x) { return 3 * std::pow(x, 7) - x * x + 2; });
  const auto d = apply_nodal(ops, f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    EXPECT_NEAR(d[i], 21 * std::pow(x, 6) - 2 * x, 1e-10);
  }
}

TEST(Differentiation, ChainRuleOnMappedDomain) {
  const Domain dom(0.0, 4.0);
  const CollocationGrid g(24);
  const auto ops = build_diff_operators(24);
  const auto f = sample(g, [](double x) { return std::sin(x); }, dom);
  const auto d = apply_nodal(ops, f);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(d[i], std::cos(f.node(i)), 1e-9);
  const auto de = differentiate(analyze(f), ops);
  EXPECT_NEAR(de(1.3), std::cos(1.3), 1e-9);
}

TEST(Differentiation, GaussianDerivativeAccuracyAtN32) {
  const int n = 32;
  const CollocationGrid g(n);
  const auto ops = build_diff_operators(n);
  const auto f = sample(g, gaussian);
  const auto de = analyze(GridFunction(g, apply_nodal(ops, f)));
  const auto xs = linspace(-1.0, 1.0, 2000);
  std::vector<double> sq;
  for (double x : xs) sq.push_back(std::pow(de(x) - gaussian_prime(x), 2));
  const double l2 = std::sqrt(trapezoid(xs, sq));
  EXPECT_GE(l2, 1e-6);
  EXPECT_LE(l2, 1e-4);
}

TEST(Differentiation, OperatorOrderMismatch) {
  const auto ops = build_diff_operators(8);
  expect_error([&] { differentiate(SpectralExpansion(std::vector<double>(5, 1.0)), ops); },
               ErrorCode::mismatched_grid);
  expect_error([&] { GridFunction(CollocationGrid(4), {1.0, 2.0}); }, ErrorCode::mismatched_grid);
}

TEST(Numerics, LineFitRecoversSlope) {
  const std::vector<double> n{8, 16, 32, 64};
  std::vector<double> e;
  for (double v : n) e.push_back(3.0 * std::pow(v, -2.5));
  const auto f = fit_loglog(n, e);
  EXPECT_NEAR(f.slope, -2.5, 1e-12);
  EXPECT_NEAR(f.correlation, -1.0, 1e-12);
}

TEST(Numerics, AdaptiveSimpsonAgainstBoost) {
  auto f = [](double t) { return std::exp(1.0 / (6.0 * t * (t - 1.0))); };
  boost::math::quadrature::tanh_sinh<double> ts;
  EXPECT_NEAR(adaptive_simpson(f, 0.1, 0.9, 1e-12), ts.integrate(f, 0.1, 0.9), 1e-10);
}
