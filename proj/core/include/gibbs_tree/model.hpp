#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gibbs_tree {

/// Coupling J, inverse temperature beta and tree order k of the mixed
/// spin-(1,1/2) Ising model. The activity theta = exp(J*beta/2) is derived
/// and kept in sync; instances are immutable.
class ModelParams {
 public:
  ModelParams(double coupling, double beta, int order = 2);

  /// Builds parameters from the activity directly (beta = 1, J = 2 ln theta).
  /// theta() then returns the argument bit-for-bit.
  static ModelParams from_theta(double theta, int order = 2);

  double coupling() const noexcept { return coupling_; }
  double beta() const noexcept { return beta_; }
  int order() const noexcept { return order_; }
  double theta() const noexcept { return theta_; }
  /// J*beta/2 == ln(theta).
  double half_coupling_beta() const noexcept { return half_jb_; }
  /// J*beta == 0: every Boltzmann factor equals one.
  bool degenerate() const noexcept { return half_jb_ == 0.0; }

  ModelParams with_coupling(double coupling) const { return {coupling, beta_, order_}; }
  ModelParams with_beta(double beta) const { return {coupling_, beta, order_}; }

 private:
  ModelParams(double coupling, double beta, int order, double theta, double half_jb);

  double coupling_;
  double beta_;
  int order_;
  double theta_;
  double half_jb_;
};

/// Throws InputError unless params.order() == 2; the closed-form analysis is
/// specific to the binary tree.
void require_binary_tree(const ModelParams& params);

/// Spins are stored doubled so both alphabets are exact integers:
/// even sites carry -2, 0, +2 (spin -1, 0, +1), odd sites -1, +1 (spin -1/2, +1/2).
struct SpinAlphabets {
  static constexpr std::array<int, 3> even_twice{-2, 0, 2};
  static constexpr std::array<int, 2> odd_twice{-1, 1};

  /// Index of a doubled spin within its alphabet, or nullopt if illegal.
  static std::optional<std::size_t> even_index(int twice) noexcept;
  static std::optional<std::size_t> odd_index(int twice) noexcept;
};

/// Rooted tree of order k truncated at depth n. Vertices are indexed
/// breadth-first; vertex v has children k*v+1 .. k*v+k. The root has exactly
/// k children and the volume V_n includes the root.
class FiniteTree {
 public:
  FiniteTree(int order, int depth);

  int order() const noexcept { return order_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return level_begin_.back(); }

  std::size_t level_begin(int m) const { return level_begin_.at(static_cast<std::size_t>(m)); }
  std::size_t level_end(int m) const { return level_begin_.at(static_cast<std::size_t>(m) + 1); }
  std::size_t level_size(int m) const { return level_end(m) - level_begin(m); }

  int level(std::size_t v) const;
  bool is_even(std::size_t v) const { return level(v) % 2 == 0; }
  std::size_t alphabet_size(std::size_t v) const { return is_even(v) ? 3 : 2; }
  bool is_leaf(std::size_t v) const { return level(v) == depth_; }

  std::optional<std::size_t> parent(std::size_t v) const;
  /// First child index; children are contiguous [first_child, first_child + order).
  std::size_t first_child(std::size_t v) const;
  std::vector<std::size_t> children(std::size_t v) const;

 private:
  int order_;
  int depth_;
  std::vector<std::size_t> level_begin_;
};

/// Same as the FiniteTree constructor; rejects order < 1 or depth < 0.
FiniteTree build_tree(int order, int depth);

/// Doubled spin per vertex, in breadth-first vertex order.
using SpinConfig = std::vector<int>;

/// Throws InputError if the configuration has the wrong length or a spin of
/// the wrong parity for its level.
void validate_config(const FiniteTree& tree, std::span<const int> config);

/// Sum over parent-child edges of the doubled-spin products. The physical
/// interaction sum is this value divided by 4.
std::int64_t interaction_sum_quarters(const FiniteTree& tree, std::span<const int> config);

/// H = -J * sum_{<x,y>} xi(x) xi(y).
double hamiltonian(const FiniteTree& tree, std::span<const int> config, const ModelParams& params);

}  // namespace gibbs_tree
