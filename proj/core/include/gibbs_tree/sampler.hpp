#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gibbs_tree/chain.hpp"
#include "gibbs_tree/numerics.hpp"

namespace gibbs_tree {

/// Samples are split into fixed chunks of this many; chunk c draws from
/// Philox stream c, so results do not depend on the worker count.
inline constexpr std::size_t kSamplesPerStream = 1024;

struct SampleRun {
  std::uint64_t seed = 0;
  int depth = 0;
  int order = 2;
  std::size_t samples = 0;
  std::array<double, 3> root_law{};
  /// level_counts[m][state]: visits of each spin state over all vertices of W_m.
  std::vector<std::vector<std::uint64_t>> level_counts;
  /// Root state vs state of the first child (one pair per sample).
  std::array<std::array<std::uint64_t, 2>, 3> child_counts{};
  /// Root state vs state of the first grandchild (one pair per sample, so
  /// each row is an exact multinomial draw). Empty when depth < 2.
  std::array<std::array<std::uint64_t, 3>, 3> grandchild_counts{};

  std::vector<double> level_distribution(int m) const;
  Matrix<3, 3> empirical_grandchild() const;

  friend bool operator==(const SampleRun&, const SampleRun&) = default;
};

/// Draws the root from root_law and every child independently from the row
/// of its parent's state (P from even to odd levels, Q from odd to even).
SampleRun sample_chain(const TransitionMatrices& matrices, const std::array<double, 3>& root_law,
                       int depth, std::size_t samples, std::uint64_t seed, int order = 2);

/// Left eigenvector pi H = pi with sum 1, by power iteration on (I + H)/2.
/// Throws InputError when H is not irreducible.
std::array<double, 3> stationary_law(const Matrix<3, 3>& h);

struct BandCheck {
  /// Largest |observed - expected| / sigma over all cells.
  double max_abs_z = 0.0;
  double sigmas = 3.0;
  bool within = false;
};

/// Per-cell binomial bands for the grandchild table against H.
BandCheck grandchild_band_check(const SampleRun& run, const Matrix<3, 3>& h, double sigmas = 3.0);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson statistic of the grandchild table against H, rows pooled.
ChiSquare grandchild_chi_square(const SampleRun& run, const Matrix<3, 3>& h);

std::string sample_run_to_json(const SampleRun& run);

}  // namespace gibbs_tree
