#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gibbs_tree/boundary_law.hpp"
#include "gibbs_tree/model.hpp"
#include "gibbs_tree/numerics.hpp"

namespace gibbs_tree {

/// Largest configuration space enumerated exhaustively: depth 3 on the
/// binary tree, 3 * 2^2 * 3^4 * 2^8 states.
inline constexpr std::size_t kMaxConfigurations = 248'832;

/// 3^{#even vertices} * 2^{#odd vertices}, saturating at SIZE_MAX.
std::size_t configuration_count(const FiniteTree& tree);

/// Finite-volume Gibbs measure on V_n with boundary fields on W_n only:
/// mu(xi) ∝ exp(-beta H(xi) + sum_{x in W_n} h_{xi(x)}(x)).
/// Configurations are indexed in mixed radix with vertex 0 most significant,
/// so the index of the restriction to V_m is a prefix of the full index.
class FiniteGibbsMeasure {
 public:
  const FiniteTree& tree() const noexcept { return tree_; }
  const ModelParams& params() const noexcept { return params_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double log_partition() const noexcept { return log_partition_; }
  std::size_t size() const noexcept { return probabilities_.size(); }

  /// Alphabet index (0..2 or 0..1) of vertex v in configuration id.
  std::size_t digit(std::size_t id, std::size_t v) const;
  /// Doubled spins of configuration id.
  SpinConfig decode(std::size_t id) const;

 private:
  friend FiniteGibbsMeasure build_measure(const FiniteTree&, const BoundaryFields&, const ModelParams&);
  FiniteGibbsMeasure(FiniteTree tree, ModelParams params);

  FiniteTree tree_;
  ModelParams params_;
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> stride_;
  std::vector<double> probabilities_;
  double log_partition_ = 0.0;
};

/// Exhaustive enumeration. Throws EnumerationCapError above kMaxConfigurations
/// and InputError if W_n is not fully assigned.
FiniteGibbsMeasure build_measure(const FiniteTree& tree, const BoundaryFields& fields,
                                 const ModelParams& params);

struct PartitionFunction {
  double log_value;
  double value() const;
  /// log A_m for m = 0..n-1, where A_m = prod_{x in W_m} A(x) and
  /// exp(h_s(x)) A(x) = prod_{y in S(x)} sum_u exp(J beta s u + h_u(y)).
  /// Filled only when every level carries fields; A(x) is evaluated at the
  /// first spin state of x.
  std::vector<double> log_level_normalizers;
  /// Largest spread of log A(x) across the spin states of x. Zero (up to
  /// rounding) exactly when the fields are compatible.
  double normalizer_spread = 0.0;
};

PartitionFunction partition_function(const FiniteTree& tree, const BoundaryFields& fields,
                                     const ModelParams& params);

/// Exact marginal on V_m (m < n), indexed like a depth-m measure.
std::vector<double> marginalize(const FiniteGibbsMeasure& measure, int sub_depth);

struct ConditionalTables {
  /// law of the first child given the root spin
  Matrix<3, 2> child_given_root;
  /// law of the first grandchild given the root spin
  Matrix<3, 3> grandchild_given_root;
};

/// Requires depth >= 2 and order >= 1.
ConditionalTables root_child_conditional(const FiniteGibbsMeasure& measure);

/// CSV with header configuration_id,spins,probability; spins are the
/// physical values joined by ';' in vertex order.
std::string probability_table_csv(const FiniteGibbsMeasure& measure);

}  // namespace gibbs_tree
