#include "gibbs_tree/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/parallel.hpp"
#include "gibbs_tree/philox.hpp"

namespace gibbs_tree {
namespace {

void validate_law(const std::array<double, 3>& law) {
  double s = 0.0;
  for (double p : law) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("root law entries must be non-negative");
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InputError("root law must sum to 1");
}

template <std::size_t N>
std::size_t draw(const std::array<double, N>& row, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    acc += row[i];
    if (u < acc) return i;
  }
  return N - 1;
}

struct ChunkCounts {
  std::vector<std::vector<std::uint64_t>> level;
  std::array<std::array<std::uint64_t, 2>, 3> child{};
  std::array<std::array<std::uint64_t, 3>, 3> grandchild{};
};

}  // namespace

std::vector<double> SampleRun::level_distribution(int m) const {
  const auto& counts = level_counts.at(static_cast<std::size_t>(m));
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

Matrix<3, 3> SampleRun::empirical_grandchild() const {
  Matrix<3, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    std::uint64_t n = 0;
    for (auto c : grandchild_counts[i]) n += c;
    if (n == 0) continue;
    for (std::size_t l = 0; l < 3; ++l) out[i][l] = static_cast<double>(grandchild_counts[i][l]) / static_cast<double>(n);
  }
  return out;
}

SampleRun sample_chain(const TransitionMatrices& matrices, const std::array<double, 3>& root_law,
                       int depth, std::size_t samples, std::uint64_t seed, int order) {
  if (depth < 1) throw InputError("sampling depth must be at least 1");
  if (samples == 0) throw InputError("sample count must be positive");
  if (stochastic_defect(matrices.even_to_odd) > kStochasticTolerance ||
      stochastic_defect(matrices.odd_to_even) > kStochasticTolerance) {
    throw InputError("transition matrices must be row-stochastic");
  }
  validate_law(root_law);

  const FiniteTree tree(order, depth);
  const std::size_t nv = tree.size();
  const std::size_t k = static_cast<std::size_t>(order);
  const std::size_t child = tree.first_child(0);
  const std::size_t grandchild = depth >= 2 ? tree.first_child(child) : 0;
  std::vector<int> level_of(nv);
  for (int m = 0; m <= depth; ++m)
    for (std::size_t v = tree.level_begin(m); v < tree.level_end(m); ++v) level_of[v] = m;

  const std::size_t chunks = (samples + kSamplesPerStream - 1) / kSamplesPerStream;
  std::vector<ChunkCounts> partial(chunks);

  parallel_for(chunks, [&](std::size_t c) {
    ChunkCounts& out = partial[c];
    out.level.resize(static_cast<std::size_t>(depth) + 1);
    for (int m = 0; m <= depth; ++m) out.level[static_cast<std::size_t>(m)].assign(m % 2 == 0 ? 3 : 2, 0);
    CounterRng rng(seed, c);
    std::vector<std::uint8_t> state(nv);
    const std::size_t begin = c * kSamplesPerStream;
    const std::size_t end = std::min(samples, begin + kSamplesPerStream);
    for (std::size_t s = begin; s < end; ++s) {
      state[0] = static_cast<std::uint8_t>(draw(root_law, rng.uniform()));
      ++out.level[0][state[0]];
      for (std::size_t v = 1; v < nv; ++v) {
        const std::size_t parent = state[(v - 1) / k];
        const int m = level_of[v];
        const std::size_t x = (m % 2 == 1) ? draw(matrices.even_to_odd[parent], rng.uniform())
                                           : draw(matrices.odd_to_even[parent], rng.uniform());
        state[v] = static_cast<std::uint8_t>(x);
        ++out.level[static_cast<std::size_t>(m)][x];
      }
      ++out.child[state[0]][state[child]];
      if (depth >= 2) ++out.grandchild[state[0]][state[grandchild]];
    }
  });

  SampleRun run;
  run.seed = seed;
  run.depth = depth;
  run.order = order;
  run.samples = samples;
  run.root_law = root_law;
  run.level_counts.resize(static_cast<std::size_t>(depth) + 1);
  for (int m = 0; m <= depth; ++m) run.level_counts[static_cast<std::size_t>(m)].assign(m % 2 == 0 ? 3 : 2, 0);
  for (const ChunkCounts& part : partial) {
    for (std::size_t m = 0; m < part.level.size(); ++m)
      for (std::size_t i = 0; i < part.level[m].size(); ++i) run.level_counts[m][i] += part.level[m][i];
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 2; ++j) run.child_counts[i][j] += part.child[i][j];
      for (std::size_t j = 0; j < 3; ++j) run.grandchild_counts[i][j] += part.grandchild[i][j];
    }
  }
  return run;
}

std::array<double, 3> stationary_law(const Matrix<3, 3>& h) {
  if (stochastic_defect(h) > kStochasticTolerance) throw InputError("H must be row-stochastic");
  std::array<std::array<bool, 3>, 3> reach{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) reach[i][j] = (i == j) || h[i][j] > 0.0;
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) reach[i][j] = reach[i][j] || (reach[i][m] && reach[m][j]);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (!reach[i][j]) throw InputError("H is reducible; the stationary law is not unique");

  std::array<double, 3> pi{1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (int it = 0; it < 1'000'000; ++it) {
    std::array<double, 3> next{};
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < 3; ++i) s += pi[i] * h[i][j];
      next[j] = 0.5 * (pi[j] + s);
    }
    const double total = next[0] + next[1] + next[2];
    double change = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      next[j] /= total;
      change = std::max(change, std::abs(next[j] - pi[j]));
    }
    pi = next;
    if (change < 1e-16) break;
  }
  return pi;
}

BandCheck grandchild_band_check(const SampleRun& run, const Matrix<3, 3>& h, double sigmas) {
  if (run.depth < 2) throw InputError("grandchild table needs depth >= 2");
  BandCheck out;
  out.sigmas = sigmas;
  out.within = true;
  for (std::size_t i = 0; i < 3; ++i) {
    std::uint64_t n = 0;
    for (auto c : run.grandchild_counts[i]) n += c;
    if (n == 0) continue;
    for (std::size_t l = 0; l < 3; ++l) {
      const double p = h[i][l];
      const double expected = static_cast<double>(n) * p;
      const double observed = static_cast<double>(run.grandchild_counts[i][l]);
      const double sd = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
      if (sd == 0.0) {
        if (observed != expected) out.within = false;
        continue;
      }
      const double z = std::abs(observed - expected) / sd;
      out.max_abs_z = std::max(out.max_abs_z, z);
    }
  }
  out.within = out.within && out.max_abs_z <= sigmas;
  return out;
}

ChiSquare grandchild_chi_square(const SampleRun& run, const Matrix<3, 3>& h) {
  if (run.depth < 2) throw InputError("grandchild table needs depth >= 2");
  ChiSquare out;
  for (std::size_t i = 0; i < 3; ++i) {
    std::uint64_t n = 0;
    for (auto c : run.grandchild_counts[i]) n += c;
    if (n == 0) continue;
    int cells = 0;
    for (std::size_t l = 0; l < 3; ++l) {
      const double expected = static_cast<double>(n) * h[i][l];
      if (expected <= 0.0) continue;
      const double d = static_cast<double>(run.grandchild_counts[i][l]) - expected;
      out.statistic += d * d / expected;
      ++cells;
    }
    out.dof += std::max(cells - 1, 0);
  }
  out.p_value = out.dof > 0 ? boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic) : 1.0;
  return out;
}

std::string sample_run_to_json(const SampleRun& run) {
  nlohmann::ordered_json doc;
  doc["generator"] = "philox4x32-10";
  doc["samples_per_stream"] = kSamplesPerStream;
  doc["seed"] = run.seed;
  doc["order"] = run.order;
  doc["depth"] = run.depth;
  doc["samples"] = run.samples;
  doc["root_law"] = run.root_law;
  doc["level_counts"] = run.level_counts;
  doc["child_counts"] = run.child_counts;
  doc["grandchild_counts"] = run.grandchild_counts;
  return doc.dump();
}

}  // namespace gibbs_tree
