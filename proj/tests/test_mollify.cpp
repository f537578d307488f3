#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "chebmoll/mollify.hpp"

using namespace chebmoll;

namespace {

template <class Fn>
void expect_error(Fn&& fn, ErrorCode code) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

SmoothnessMap edges_at(std::vector<double> cs) { return SmoothnessMap(EdgeSet::from_locations(cs)); }

SpectralExpansion tophat_expansion(int n) {
  return analyze(sample(CollocationGrid(n), [](double x) { return (x >= -0.5 && x <= 0.5) ? 1.0 : 0.0; }));
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST(Hermite, Examples) {
  EXPECT_EQ(hermite_eval(0, 1.7), 1.0);
  EXPECT_EQ(hermite_eval(2, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite_eval(4, 0.5), 1.0);
}

TEST(Hermite, ClosedFormsOnRandomPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double z = u(rng);
    EXPECT_NEAR(hermite_eval(4, z), 16 * std::pow(z, 4) - 48 * z * z + 12, 1e-10);
    EXPECT_NEAR(hermite_eval(5, z), 32 * std::pow(z, 5) - 160 * std::pow(z, 3) + 120 * z, 1e-9);
  }
}

TEST(Hermite, DegreeGuard) {
  EXPECT_NO_THROW(hermite_eval(400, 0.1));
  expect_error([] { hermite_eval(401, 0.1); }, ErrorCode::degree_overflow);
}

TEST(Profile, PeakValues) {
  EXPECT_DOUBLE_EQ(mollifier_profile(0.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(mollifier_profile(0.0, 1), 1.5);
}

TEST(Profile, MatchesDirectHermiteSum) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int p = 0; p <= 10; ++p) {
    for (int k = 0; k < 20; ++k) {
      const double z = u(rng);
      double direct = 0.0;
      for (int j = 0; j <= p; ++j) {
        direct += (j % 2 == 0 ? 1.0 : -1.0) / (std::pow(4.0, j) * factorial(j)) *
                  hermite_eval(2 * j, z / std::numbers::sqrt2);
      }
      direct *= std::exp(-0.5 * z * z);
      EXPECT_NEAR(mollifier_profile(z, p), direct, 1e-11 * (1.0 + std::abs(direct))) << p << " " << z;
    }
  }
  EXPECT_TRUE(std::isfinite(mollifier_profile(3.0, 300)));
}

TEST(SmoothnessMap, Radius) {
  EXPECT_DOUBLE_EQ(edges_at({-0.6, 0.4}).radius(0.0), 0.4);
  EXPECT_DOUBLE_EQ(edges_at({}).radius(0.3), 1.0);
  EXPECT_NEAR(edges_at({0.5}).radius(0.5 + 1e-9), 1e-9, 1e-15);
  EXPECT_EQ(edges_at({0.5}).radius(0.5), 0.0);
  EXPECT_DOUBLE_EQ(SmoothnessMap(EdgeSet{}, Domain{}, 0.25).radius(0.0), 0.25);
  expect_error([] { edges_at({0.5}).radius(1.5); }, ErrorCode::out_of_domain);
  expect_error([] { edges_at({1.0}); }, ErrorCode::out_of_domain);
}

TEST(SmoothnessMap, CellsTakeLeftAtEdges) {
  const auto sm = edges_at({-0.6, 0.4});
  EXPECT_EQ(sm.cell(0.0), std::make_pair(-0.6, 0.4));
  EXPECT_EQ(sm.cell(-0.6), std::make_pair(-1.0, -0.6));
  EXPECT_EQ(sm.cell(1.0), std::make_pair(0.4, 1.0));
}

TEST(Kernel, DegreeSchedule) {
  EXPECT_EQ(build_kernel(0.0, edges_at({}), 32).p, 2);
  const auto k = build_kernel(0.49, edges_at({0.5}), 32);
  EXPECT_EQ(k.p, 0);
  EXPECT_NEAR(k.delta, std::sqrt(0.25 * 0.01 / 32), 1e-15);
}

TEST(Kernel, DilationForms) {
  MollifierOptions literal;
  literal.dilation = Dilation::literal;
  const auto sm = edges_at({});
  EXPECT_LT(build_kernel(0.0, sm, 64).delta, build_kernel(0.0, sm, 16).delta);
  EXPECT_GT(build_kernel(0.0, sm, 64, literal).delta, build_kernel(0.0, sm, 16, literal).delta);
}

TEST(Kernel, Preconditions) {
  const auto sm = edges_at({0.5});
  expect_error([&] { build_kernel(0.5, sm, 32); }, ErrorCode::degenerate_kernel);
  expect_error([&] { build_kernel(0.0, sm, 3); }, ErrorCode::invalid_order);
  MollifierOptions bad;
  bad.theta = 1.5;
  expect_error([&] { build_kernel(0.0, sm, 32, bad); }, ErrorCode::invalid_argument);
}

TEST(Kernel, ZeroOutsideSupportAndUnitMass) {
  const auto sm = edges_at({-0.5, 0.5});
  for (double x : {-0.97, -0.52, -0.3, 0.0, 0.48, 0.9, 1.0}) {
    const auto k = build_kernel(x, sm, 32);
    EXPECT_LE(k.s_lo, x);
    EXPECT_GE(k.s_hi, x);
    EXPECT_EQ(kernel_eval(k, k.s_lo - 1e-12), 0.0);
    EXPECT_EQ(kernel_eval(k, k.s_hi + 1e-12), 0.0);
    // Independent dense trapezoid over the whole support.
    const auto ys = linspace(k.s_lo, k.s_hi, 200001);
    std::vector<double> kv;
    for (double y : ys) kv.push_back(kernel_eval(k, y));
    EXPECT_NEAR(trapezoid(ys, kv), 1.0, 1e-8) << "x=" << x;
  }
}

TEST(Mollify, ConstantsReproduced) {
  const auto grid = FineGrid::uniform();
  const auto one = [](double) { return 1.0; };
  for (const auto& sm : {edges_at({}), edges_at({-0.3, 0.55})}) {
    const auto a = mollify_function(one, grid, sm, 32);
    const auto b = mollify_function(sample_fine(grid, one), sm, 32);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(a.values[i], 1.0, 1e-10);
      EXPECT_NEAR(b.values[i], 1.0, 1e-10);
    }
  }
}

TEST(Mollify, OneSidedLocality) {
  const auto grid = FineGrid::uniform();
  const auto sm = edges_at({0.1});
  const auto e = tophat_expansion(32);
  auto samples = sample_fine(grid, e);
  const auto before = mollify_function(samples, sm, 32);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.xs[i] > 0.1) samples.values[i] += 10.0 * std::sin(37.0 * grid.xs[i]);
  }
  const auto after = mollify_function(samples, sm, 32);
  const auto perturbed = [&](double x) { return x > 0.1 ? e(x) + 5.0 : e(x); };
  const auto c_before = mollify_function(e, grid, sm, 32);
  const auto c_after = mollify_function(perturbed, grid, sm, 32);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.xs[i] < 0.1) {
      EXPECT_EQ(before.values[i], after.values[i]) << grid.xs[i];
      EXPECT_EQ(c_before.values[i], c_after.values[i]) << grid.xs[i];
    } else if (before.values[i] != after.values[i]) {
      ++changed;
    }
  }
  EXPECT_GT(changed, 100u);
}

TEST(Mollify, DegenerateGridPointIsSubstituted) {
  const auto grid = FineGrid::uniform(Domain{}, 5);  // points -1, -0.5, 0, 0.5, 1
  const auto sm = edges_at({0.0});
  const auto out = mollify_function([](double x) { return x < 0 ? 2.0 : 3.0; }, grid, sm, 16);
  ASSERT_EQ(out.substituted, (std::vector<std::size_t>{2}));
  EXPECT_EQ(out.values[2], out.values[1]);
  // The edge node itself carries the right-hand value; its weight is O(e^-16).
  EXPECT_NEAR(out.values[1], 2.0, 1e-9);
  EXPECT_NEAR(out.values[3], 3.0, 1e-9);
}

TEST(Mollify, LocalityOfEdgeErrors) {
  const int n = 32;
  const auto grid = FineGrid::uniform();
  const auto e = tophat_expansion(n);
  const auto good = mollify_function(e, grid, edges_at({-0.5, 0.5}), n);
  const double max_delta = std::sqrt(0.25 * 1.0 / n);
  for (double shift : {-0.05, 0.05}) {
    const auto bad = mollify_function(e, grid, edges_at({-0.5, 0.5 + shift}), n);
    double lo = 2.0, hi = -2.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(bad.values[i] - good.values[i]) > 1e-2) {
        lo = std::min(lo, grid.xs[i]);
        hi = std::max(hi, grid.xs[i]);
      }
    }
    ASSERT_LE(lo, hi);
    EXPECT_LE(hi - lo, 4.0 * max_delta);
    EXPECT_LE(std::abs(0.5 + 0.5 * shift - 0.5 * (lo + hi)), 2.0 * max_delta);
  }
}

TEST(Mollify, BoundaryStrategiesAtN32) {
  const auto e = tophat_expansion(32);
  const auto sm = edges_at({-0.5, 0.5});
  MollifierOptions mirror;
  mirror.boundary = BoundaryMode::mirror;
  const double truncate_err = std::abs(mollify_at(-1.0, e, sm, 32));
  const double mirror_err = std::abs(mollify_at(-1.0, e, sm, 32, mirror));
  EXPECT_LE(truncate_err, 1e-4);
  EXPECT_GE(mirror_err, 10.0 * truncate_err);
}

TEST(Mollify, MirrorSamplesMatchCallable) {
  const auto grid = FineGrid::uniform(Domain{}, 2001);
  const auto e = tophat_expansion(24);
  const auto sm = edges_at({-0.5, 0.5});
  MollifierOptions mirror;
  mirror.boundary = BoundaryMode::mirror;
  const auto a = mollify_function(e, grid, sm, 24, mirror);
  const auto b = mollify_function(sample_fine(grid, e), sm, 24, mirror);
  for (std::size_t i = 0; i < grid.size(); i += 50) EXPECT_NEAR(a.values[i], b.values[i], 2e-3) << grid.xs[i];
}

TEST(Mollify, DomainMismatch) {
  const auto grid = FineGrid::uniform(Domain(0.0, 1.0), 10);
  expect_error([&] { mollify_function([](double) { return 1.0; }, grid, edges_at({}), 16); },
               ErrorCode::mismatched_grid);
  EXPECT_EQ(boundary_mode_from_string("mirror"), BoundaryMode::mirror);
  expect_error([] { boundary_mode_from_string("wrap"); }, ErrorCode::config);
}
