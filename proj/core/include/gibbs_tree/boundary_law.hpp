#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gibbs_tree/model.hpp"

namespace gibbs_tree {

/// Field vector (h_-1, h_0, h_+1) at an even-level vertex.
using EvenField = std::array<double, 3>;
/// Field vector (h~_-1/2, h~_+1/2) at an odd-level vertex.
using OddField = std::array<double, 2>;

/// Log-ratios at an even vertex: minus = h_-1 - h_0, plus = h_+1 - h_0.
struct EvenRatios {
  double minus;
  double plus;
};

/// Log-ratios (U1, U2) at an even parent, computed from its k odd children.
/// Each child contributes log((e^{±a+h~_-} + e^{∓a+h~_+}) / (e^{h~_-} + e^{h~_+}))
/// with a = J*beta/2; the sum runs over the children.
EvenRatios propagate_even(std::span<const OddField> children, const ModelParams& params);

/// Log-ratio V = h~_+1/2 - h~_-1/2 at an odd parent from its k even children.
double propagate_odd(std::span<const EvenField> children, const ModelParams& params);

/// Per-vertex field vectors on a FiniteTree. Each vertex holds either
/// nothing or a vector whose arity matches its level parity (3 on even
/// levels, 2 on odd levels).
class BoundaryFields {
 public:
  explicit BoundaryFields(const FiniteTree& tree);

  std::size_t size() const noexcept { return values_.size(); }
  bool has(std::size_t v) const { return !values_.at(v).empty(); }
  std::span<const double> at(std::size_t v) const;

  void set(std::size_t v, std::span<const double> values);
  void set_even(std::size_t v, const EvenField& values) { set(v, values); }
  void set_odd(std::size_t v, const OddField& values) { set(v, values); }

  EvenField even(std::size_t v) const;
  OddField odd(std::size_t v) const;

  /// True when every vertex of level m carries a field.
  bool covers_level(int m) const;

 private:
  FiniteTree tree_;
  std::vector<std::vector<double>> values_;
};

struct CompatibilityReport {
  /// |computed - assigned| log-ratio per vertex; zero for leaves.
  std::vector<double> residuals;
  double max_residual = 0.0;
  std::size_t worst_vertex = 0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Checks that every interior vertex's assigned ratios equal those propagated
/// from its children, in log space. Requires a field on every vertex.
CompatibilityReport check_compatibility(const FiniteTree& tree, const BoundaryFields& fields,
                                        const ModelParams& params, double tolerance);

/// Fills every vertex at levels < from_level by propagating upward from the
/// fields on from_level (gauge h_0 = 0 on even vertices, h~_-1/2 = 0 on odd).
void propagate_upward(const FiniteTree& tree, BoundaryFields& fields, const ModelParams& params,
                      int from_level);

/// {"<vertex>": [values...], ...} for every assigned vertex.
std::string fields_to_json(const BoundaryFields& fields);
BoundaryFields fields_from_json(const FiniteTree& tree, std::string_view json);

}  // namespace gibbs_tree
