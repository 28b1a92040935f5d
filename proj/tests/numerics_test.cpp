#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gibbs_tree/numerics.hpp"
#include "oracles.hpp"

namespace gibbs_tree {
namespace {

TEST(LogSumExp, HandlesLargeArguments) {
  const std::vector<double> v{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> w{-1000.0, 0.0};
  EXPECT_NEAR(log_sum_exp(w), 0.0, 1e-15);
}

TEST(Quadratic, SimpleRoots) {
  const auto r = real_quadratic_roots(1.0, -3.0, 2.0);
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->first, 1.0);
  EXPECT_DOUBLE_EQ(r->second, 2.0);
  EXPECT_FALSE(real_quadratic_roots(1.0, 0.0, 1.0));
}

TEST(Quadratic, NoCancellationInSmallRoot) {
  const auto r = real_quadratic_roots(1.0, -1e8, 1.0);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->first, 1e-8, 1e-22);
}

TEST(Cubic, MatchesDurandKerner) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng) + (u(rng) > 0 ? 6.0 : -6.0);
    const double b = u(rng), c = u(rng), d = u(rng);
    const auto got = cubic_roots(a, b, c, d);
    const auto want = oracle::cubic_roots(a, b, c, d);
    for (const auto& g : got) {
      double nearest = 1e300;
      for (const auto& w : want) nearest = std::min(nearest, std::abs(g - w));
      EXPECT_LT(nearest, 1e-9) << i;
    }
  }
}

TEST(Cubic, ThreeRealRoots) {
  const auto r = cubic_roots(1.0, -6.0, 11.0, -6.0);
  std::vector<double> re;
  for (auto z : r) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], 1.0, 1e-12);
  EXPECT_NEAR(re[1], 2.0, 1e-12);
  EXPECT_NEAR(re[2], 3.0, 1e-12);
}

TEST(BracketedNewton, SquareRootOfTwo) {
  const double r = bracketed_newton([](double x) { return ValueAndSlope{x * x - 2.0, 2.0 * x}; }, 0.0, 2.0);
  EXPECT_NEAR(r, std::sqrt(2.0), 1e-15);
}

TEST(BracketedNewton, SurvivesBadSlope) {
  // Newton from the flat end leaves the bracket; bisection has to take over.
  const double r = bracketed_newton([](double x) { return ValueAndSlope{std::atan(x - 0.3), 1e-9}; }, -5.0, 50.0);
  EXPECT_NEAR(r, 0.3, 1e-12);
}

TEST(BracketedNewton, RequiresSignChange) {
  EXPECT_THROW(bracketed_newton([](double x) { return ValueAndSlope{x * x + 1.0, 2.0 * x}; }, -1.0, 1.0),
               std::exception);
}

TEST(MatrixOps, MultiplyAndDifference) {
  const Matrix<2, 3> a{{{1, 2, 3}, {4, 5, 6}}};
  const Matrix<3, 1> b{{{1}, {0}, {-1}}};
  const Matrix<2, 1> c = multiply(a, b);
  EXPECT_EQ(c[0][0], -2.0);
  EXPECT_EQ(c[1][0], -2.0);
  EXPECT_EQ(max_abs_difference(c, Matrix<2, 1>{{{-2}, {-1}}}), 1.0);
}

}  // namespace
}  // namespace gibbs_tree
