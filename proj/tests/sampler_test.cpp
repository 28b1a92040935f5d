#include <gtest/gtest.h>

#include <cmath>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/parallel.hpp"
#include "gibbs_tree/philox.hpp"
#include "gibbs_tree/sampler.hpp"
#include "oracles.hpp"

namespace gibbs_tree {
namespace {

TransitionMatrices disordered_chain(double theta) {
  const ModelParams p = ModelParams::from_theta(theta);
  return build_matrices(disordered_state(p), p);
}

TEST(Philox, KnownAnswers) {
  const auto zero = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(zero, (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  const auto ones = Philox4x32::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u});
  EXPECT_EQ(ones, (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  const auto pi = Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  EXPECT_EQ(pi, (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, MatchesReferenceRounds) {
  std::uint32_t s = 1;
  for (int i = 0; i < 100; ++i) {
    Philox4x32::Counter c{};
    Philox4x32::Key k{};
    for (auto& x : c) x = s = s * 2654435761u + 1;
    for (auto& x : k) x = s = s * 2654435761u + 1;
    const auto want = oracle::philox({c[0], c[1], c[2], c[3]}, {k[0], k[1]});
    EXPECT_EQ(Philox4x32::block(c, k), (Philox4x32::Counter{want[0], want[1], want[2], want[3]}));
  }
}

TEST(Philox, UniformRange) {
  CounterRng rng(42, 0);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u;
  }
  EXPECT_NEAR(mean / 100000, 0.5, 0.005);
}

TEST(Sampler, NoInteractionLevelsUniform) {
  const TransitionMatrices m = disordered_chain(1.0);
  const SampleRun run = sample_chain(m, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 4, 20000, 7);
  for (int level = 0; level <= 4; ++level) {
    const auto dist = run.level_distribution(level);
    std::uint64_t n = 0;
    for (auto c : run.level_counts[static_cast<std::size_t>(level)]) n += c;
    const double p = 1.0 / static_cast<double>(dist.size());
    // vertices on a level are independent here, so the band is binomial
    const double sd = std::sqrt(p * (1 - p) / static_cast<double>(n));
    for (double x : dist) EXPECT_LT(std::abs(x - p), 4 * sd) << level;
  }
}

TEST(Sampler, GrandchildWithinBandsAtThetaTwo) {
  const TransitionMatrices m = disordered_chain(2.0);
  const SampleRun run = sample_chain(m, stationary_law(m.two_step), 2, 100000, 42);
  const BandCheck band = grandchild_band_check(run, m.two_step);
  EXPECT_TRUE(band.within) << band.max_abs_z;
  const ChiSquare chi = grandchild_chi_square(run, m.two_step);
  EXPECT_EQ(chi.dof, 6);
  EXPECT_GT(chi.p_value, 0.001);  // statistical, not a hard guarantee
}

TEST(Sampler, DeterministicForFixedSeed) {
  const TransitionMatrices m = disordered_chain(2.0);
  const auto law = stationary_law(m.two_step);
  const SampleRun a = sample_chain(m, law, 3, 5000, 42);
  const SampleRun b = sample_chain(m, law, 3, 5000, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(sample_run_to_json(a), sample_run_to_json(b));
  EXPECT_NE(sample_chain(m, law, 3, 5000, 43).grandchild_counts, a.grandchild_counts);
}

TEST(Sampler, IndependentOfWorkerCount) {
  const TransitionMatrices m = disordered_chain(2.46);
  const auto law = stationary_law(m.two_step);
  ::setenv("GIBBS_TREE_THREADS", "1", 1);
  const SampleRun one = sample_chain(m, law, 3, 10000, 9);
  ::setenv("GIBBS_TREE_THREADS", "4", 1);
  const SampleRun four = sample_chain(m, law, 3, 10000, 9);
  ::unsetenv("GIBBS_TREE_THREADS");
  EXPECT_EQ(one, four);
}

TEST(Sampler, DeepLevelApproachesStationaryLaw) {
  const TransitionMatrices m = disordered_chain(2.0);
  const auto pi = stationary_law(m.two_step);
  const SampleRun run = sample_chain(m, {1.0, 0.0, 0.0}, 10, 10000, 5);
  const auto deep = run.level_distribution(10);
  double tv = 0.0;
  for (std::size_t i = 0; i < 3; ++i) tv += 0.5 * std::abs(deep[i] - pi[i]);
  EXPECT_LT(tv, 0.01);
}

TEST(Sampler, CountsAreConsistent) {
  const TransitionMatrices m = disordered_chain(3.0);
  const SampleRun run = sample_chain(m, stationary_law(m.two_step), 3, 3000, 1);
  for (int level = 0; level <= 3; ++level) {
    std::uint64_t n = 0;
    for (auto c : run.level_counts[static_cast<std::size_t>(level)]) n += c;
    EXPECT_EQ(n, 3000u << level);
  }
  std::uint64_t g = 0;
  for (const auto& row : run.grandchild_counts)
    for (auto c : row) g += c;
  EXPECT_EQ(g, 3000u);
  const Matrix<3, 3> e = run.empirical_grandchild();
  for (const auto& row : e) EXPECT_NEAR(row[0] + row[1] + row[2], 1.0, 1e-12);
}

TEST(Sampler, RejectsBadInput) {
  const TransitionMatrices m = disordered_chain(2.0);
  EXPECT_THROW(sample_chain(m, {1.0, 0.0, 0.0}, 0, 10, 1), InputError);
  EXPECT_THROW(sample_chain(m, {1.0, 0.0, 0.0}, 2, 0, 1), InputError);
  EXPECT_THROW(sample_chain(m, {0.5, 0.0, 0.0}, 2, 10, 1), InputError);
  TransitionMatrices bad = m;
  bad.even_to_odd[0] = {0.7, 0.7};
  EXPECT_THROW(sample_chain(bad, {1.0, 0.0, 0.0}, 2, 10, 1), InputError);
}

TEST(StationaryLaw, RankOneAtNoInteraction) {
  const TransitionMatrices m = disordered_chain(1.0);
  const auto pi = stationary_law(m.two_step);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(pi[i], m.two_step[0][i], 1e-12);
}

TEST(StationaryLaw, SymmetricAndInvariant) {
  for (double t : {0.3, 2.0, 2.46, 6.0}) {
    const TransitionMatrices m = disordered_chain(t);
    const auto pi = stationary_law(m.two_step);
    EXPECT_NEAR(pi[0], pi[2], 1e-12);
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < 3; ++i) s += pi[i] * m.two_step[i][j];
      EXPECT_NEAR(s, pi[j], 1e-12);
    }
  }
}

TEST(StationaryLaw, RejectsReducible) {
  const Matrix<3, 3> h{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  EXPECT_THROW(stationary_law(h), InputError);
}

TEST(Parallel, RunsEveryIndexAndRethrows) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

}  // namespace
}  // namespace gibbs_tree
