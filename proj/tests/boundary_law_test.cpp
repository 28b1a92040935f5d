#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gibbs_tree/boundary_law.hpp"
#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/fixed_points.hpp"
#include "gibbs_tree/ti_dynamics.hpp"
#include "oracles.hpp"

namespace gibbs_tree {
namespace {

const ModelParams kTheta2 = ModelParams::from_theta(2.0);

TEST(PropagateEven, ZeroChildFields) {
  const std::vector<OddField> kids{{0.0, 0.0}, {0.0, 0.0}};
  const EvenRatios r = propagate_even(kids, kTheta2);
  EXPECT_NEAR(r.minus, 2.0 * std::log(1.25), 1e-15);
  EXPECT_NEAR(r.plus, 2.0 * std::log(1.25), 1e-15);
}

TEST(PropagateEven, NoInteraction) {
  const std::vector<OddField> kids{{0.3, -1.2}, {2.0, 0.1}};
  const EvenRatios r = propagate_even(kids, ModelParams(0.0, 1.0));
  EXPECT_NEAR(r.minus, 0.0, 1e-15);
  EXPECT_NEAR(r.plus, 0.0, 1e-15);
}

TEST(PropagateEven, BalancedChildrenGiveDisorderedValue) {
  for (double theta : {0.3, 0.9, 1.7, 4.0}) {
    const std::vector<OddField> kids{{0.4, 0.4}, {-2.0, -2.0}};
    const EvenRatios r = propagate_even(kids, ModelParams::from_theta(theta));
    const double x = std::pow((theta * theta + 1) / (2 * theta), 2);
    EXPECT_NEAR(std::exp(r.minus), x, 1e-13 * x);
    EXPECT_NEAR(std::exp(r.plus), x, 1e-13 * x);
  }
}

TEST(PropagateOdd, SymmetricChildrenGiveZero) {
  const std::vector<EvenField> kids{{0.7, -3.0, 0.7}, {-1.0, 2.0, -1.0}};
  EXPECT_NEAR(propagate_odd(kids, ModelParams::from_theta(3.3)), 0.0, 1e-15);
  const std::vector<EvenField> any{{0.7, -3.0, 0.2}, {-1.0, 2.0, 4.0}};
  EXPECT_NEAR(propagate_odd(any, ModelParams(0.0, 2.0)), 0.0, 1e-15);
}

TEST(PropagateOdd, DisorderedChildren) {
  const double l = std::log(25.0 / 16.0);
  const std::vector<EvenField> kids{{l, 0.0, l}, {l, 0.0, l}};
  EXPECT_NEAR(propagate_odd(kids, kTheta2), 0.0, 1e-15);
}

TEST(Propagate, RejectsBadInput) {
  const std::vector<OddField> one{{0.0, 0.0}};
  EXPECT_THROW(propagate_even(one, kTheta2), InputError);
  const std::vector<OddField> bad{{0.0, NAN}, {0.0, 0.0}};
  EXPECT_THROW(propagate_even(bad, kTheta2), InputError);
  const std::vector<EvenField> inf{{0.0, INFINITY, 0.0}, {0.0, 0.0, 0.0}};
  EXPECT_THROW(propagate_odd(inf, kTheta2), InputError);
}

TEST(Propagate, ProductStructureOverChildren) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.5);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = ModelParams::from_theta(std::exp(g(rng)), 3);
    const OddField a{g(rng), g(rng)}, b{g(rng), g(rng)}, c{g(rng), g(rng)};
    const std::vector<OddField> all{a, b, c}, aa{a, a, a}, bb{b, b, b}, cc{c, c, c};
    const EvenRatios r = propagate_even(all, p);
    const EvenRatios ra = propagate_even(aa, p), rb = propagate_even(bb, p), rc = propagate_even(cc, p);
    EXPECT_NEAR(r.plus, (ra.plus + rb.plus + rc.plus) / 3.0, 1e-12);
    EXPECT_NEAR(r.minus, (ra.minus + rb.minus + rc.minus) / 3.0, 1e-12);
  }
}

TEST(Propagate, GaugeInvariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = ModelParams::from_theta(std::exp(g(rng) / 2));
    std::vector<OddField> odd{{g(rng), g(rng)}, {g(rng), g(rng)}};
    std::vector<EvenField> even{{g(rng), g(rng), g(rng)}, {g(rng), g(rng), g(rng)}};
    const EvenRatios r0 = propagate_even(odd, p);
    const double v0 = propagate_odd(even, p);
    const double c = g(rng);
    for (double& x : odd[1]) x += c;
    for (double& x : even[0]) x += c;
    const EvenRatios r1 = propagate_even(odd, p);
    EXPECT_NEAR(r1.minus, r0.minus, 1e-14 * std::max(1.0, std::abs(r0.minus)));
    EXPECT_NEAR(r1.plus, r0.plus, 1e-14 * std::max(1.0, std::abs(r0.plus)));
    EXPECT_NEAR(propagate_odd(even, p), v0, 1e-14 * std::max(1.0, std::abs(v0)));
  }
}

TEST(Propagate, MonotoneInChildRatio) {
  for (double theta : {0.5, 2.0}) {
    const ModelParams p = ModelParams::from_theta(theta);
    double prev = -INFINITY;
    double prev_dec = INFINITY;
    for (double v = -3.0; v <= 3.0; v += 0.25) {
      const std::vector<OddField> kids{{0.0, v}, {0.0, 0.4}};
      const double u2 = propagate_even(kids, p).plus;
      if (theta > 1) {
        EXPECT_GT(u2, prev);
        prev = u2;
      } else {
        EXPECT_LT(u2, prev_dec);
        prev_dec = u2;
      }
    }
  }
}

TEST(Propagate, ReproducesTranslationInvariantMap) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double theta = u(rng), x = u(rng), y = u(rng), z = u(rng);
    const ModelParams p = ModelParams::from_theta(theta);
    const auto want = oracle::recursion(theta, x, y, z);
    const std::vector<OddField> odd{{0.0, std::log(z)}, {0.0, std::log(z)}};
    const EvenRatios r = propagate_even(odd, p);
    EXPECT_NEAR(std::exp(r.minus), want[0], 1e-12 * want[0]);
    EXPECT_NEAR(std::exp(r.plus), want[1], 1e-12 * want[1]);
    const std::vector<EvenField> even{{std::log(x), 0.0, std::log(y)}, {std::log(x), 0.0, std::log(y)}};
    EXPECT_NEAR(std::exp(propagate_odd(even, p)), want[2], 1e-12 * want[2]);
  }
}

TEST(Compatibility, DisorderedFieldsPass) {
  const FiniteTree t(2, 4);
  const auto fields = translation_invariant_fields(t, disordered_state(kTheta2));
  const CompatibilityReport r = check_compatibility(t, fields, kTheta2, 1e-12);
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_residual, 1e-12);
  EXPECT_EQ(r.residuals.size(), t.size());
}

TEST(Compatibility, NontrivialFixedPointPasses) {
  const ModelParams p = ModelParams::from_theta(2.46);
  const FixedPointSet set = enumerate_fixed_points(p);
  const FiniteTree t(2, 5);
  for (const FixedPoint& fp : set.points) {
    const auto r = check_compatibility(t, translation_invariant_fields(t, fp.state), p, 1e-8);
    EXPECT_TRUE(r.passed) << to_string(fp.label);
  }
}

TEST(Compatibility, PerturbedFieldFails) {
  const FiniteTree t(2, 3);
  auto fields = translation_invariant_fields(t, disordered_state(kTheta2));
  const std::size_t leaf = t.level_begin(3);
  OddField h = fields.odd(leaf);
  h[1] += 0.1;
  fields.set_odd(leaf, h);
  const auto r = check_compatibility(t, fields, kTheta2, 1e-12);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_residual, 1e-3);
  EXPECT_EQ(r.worst_vertex, *t.parent(leaf));
}

TEST(Compatibility, RandomFieldsFail) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  const FiniteTree t(2, 3);
  BoundaryFields f(t);
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.is_even(v)) f.set_even(v, {g(rng), g(rng), g(rng)});
    else f.set_odd(v, {g(rng), g(rng)});
  }
  EXPECT_GT(check_compatibility(t, f, kTheta2, 1e-12).max_residual, 1e-3);
}

TEST(Compatibility, UpwardPropagationIsCompatible) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  const FiniteTree t(2, 4);
  for (int trial = 0; trial < 20; ++trial) {
    BoundaryFields f(t);
    for (std::size_t v = t.level_begin(4); v < t.level_end(4); ++v) f.set_even(v, {g(rng), g(rng), g(rng)});
    propagate_upward(t, f, kTheta2, 4);
    EXPECT_LT(check_compatibility(t, f, kTheta2, 1e-12).max_residual, 1e-12);
  }
}

TEST(BoundaryFields, ArityIsChecked) {
  const FiniteTree t(2, 1);
  BoundaryFields f(t);
  const std::vector<double> two{0.0, 1.0};
  EXPECT_THROW(f.set(0, two), InputError);
  EXPECT_NO_THROW(f.set(1, two));
  EXPECT_FALSE(f.covers_level(1));
  f.set(2, two);
  EXPECT_TRUE(f.covers_level(1));
}

TEST(BoundaryFields, JsonRoundTrip) {
  const FiniteTree t(2, 2);
  const auto fields = translation_invariant_fields(t, TIState{0.3, 4.5, 1.7});
  const std::string json = fields_to_json(fields);
  const BoundaryFields back = fields_from_json(t, json);
  for (std::size_t v = 0; v < t.size(); ++v) {
    const auto a = fields.at(v), b = back.at(v);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  }
  EXPECT_THROW(fields_from_json(t, "{\"0\": [1, 2]}"), InputError);
  EXPECT_THROW(fields_from_json(t, "not json"), InputError);
}

}  // namespace
}  // namespace gibbs_tree
