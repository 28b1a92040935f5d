#include "gibbs_tree/boundary_law.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/numerics.hpp"

namespace gibbs_tree {
namespace {

template <std::size_t N>
void require_finite(const std::array<double, N>& values) {
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("field values must be finite");
}

void require_child_count(std::size_t got, const ModelParams& params) {
  if (got != static_cast<std::size_t>(params.order())) {
    throw InputError("expected " + std::to_string(params.order()) + " children, got " +
                     std::to_string(got));
  }
}

}  // namespace

EvenRatios propagate_even(std::span<const OddField> children, const ModelParams& params) {
  require_child_count(children.size(), params);
  const double a = params.half_coupling_beta();
  EvenRatios out{0.0, 0.0};
  for (const OddField& h : children) {
    require_finite(h);
    const double base = log_sum_exp(std::array{h[0], h[1]});
    // parent spin -1 gives s = -1/2 the factor e^{+a}; parent spin +1 the reverse
    out.minus += log_sum_exp(std::array{a + h[0], -a + h[1]}) - base;
    out.plus += log_sum_exp(std::array{-a + h[0], a + h[1]}) - base;
  }
  return out;
}

double propagate_odd(std::span<const EvenField> children, const ModelParams& params) {
  require_child_count(children.size(), params);
  const double a = params.half_coupling_beta();
  double v = 0.0;
  for (const EvenField& h : children) {
    require_finite(h);
    const double up = log_sum_exp(std::array{-a + h[0], h[1], a + h[2]});
    const double down = log_sum_exp(std::array{a + h[0], h[1], -a + h[2]});
    v += up - down;
  }
  return v;
}

BoundaryFields::BoundaryFields(const FiniteTree& tree) : tree_(tree), values_(tree.size()) {}

std::span<const double> BoundaryFields::at(std::size_t v) const {
  if (!has(v)) throw InputError("no field assigned at vertex " + std::to_string(v));
  return values_[v];
}

void BoundaryFields::set(std::size_t v, std::span<const double> values) {
  if (v >= values_.size()) throw InputError("vertex index out of range");
  if (values.size() != tree_.alphabet_size(v)) {
    throw InputError("vertex " + std::to_string(v) + " expects a field of arity " +
                     std::to_string(tree_.alphabet_size(v)));
  }
  for (double x : values)
    if (!std::isfinite(x)) throw InputError("field values must be finite");
  values_[v].assign(values.begin(), values.end());
}

EvenField BoundaryFields::even(std::size_t v) const {
  const auto h = at(v);
  if (h.size() != 3) throw InputError("vertex " + std::to_string(v) + " is not an even vertex");
  return {h[0], h[1], h[2]};
}

OddField BoundaryFields::odd(std::size_t v) const {
  const auto h = at(v);
  if (h.size() != 2) throw InputError("vertex " + std::to_string(v) + " is not an odd vertex");
  return {h[0], h[1]};
}

bool BoundaryFields::covers_level(int m) const {
  for (std::size_t v = tree_.level_begin(m); v < tree_.level_end(m); ++v)
    if (!has(v)) return false;
  return true;
}

CompatibilityReport check_compatibility(const FiniteTree& tree, const BoundaryFields& fields,
                                        const ModelParams& params, double tolerance) {
  if (fields.size() != tree.size()) throw InputError("field assignment does not match the tree");
  if (tree.order() != params.order()) throw InputError("tree order differs from model order");
  CompatibilityReport report;
  report.tolerance = tolerance;
  report.residuals.assign(tree.size(), 0.0);
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (!fields.has(v)) {
      throw InputError("check_compatibility needs a field on every vertex; missing at " +
                       std::to_string(v));
    }
  }
  for (int m = 0; m < tree.depth(); ++m) {
    for (std::size_t v = tree.level_begin(m); v < tree.level_end(m); ++v) {
      const auto kids = tree.children(v);
      double residual;
      if (m % 2 == 0) {
        std::vector<OddField> child_fields;
        for (std::size_t c : kids) child_fields.push_back(fields.odd(c));
        const EvenRatios got = propagate_even(child_fields, params);
        const EvenField h = fields.even(v);
        residual = std::max(std::abs(got.minus - (h[0] - h[1])), std::abs(got.plus - (h[2] - h[1])));
      } else {
        std::vector<EvenField> child_fields;
        for (std::size_t c : kids) child_fields.push_back(fields.even(c));
        const double got = propagate_odd(child_fields, params);
        const OddField h = fields.odd(v);
        residual = std::abs(got - (h[1] - h[0]));
      }
      report.residuals[v] = residual;
      if (residual > report.max_residual) {
        report.max_residual = residual;
        report.worst_vertex = v;
      }
    }
  }
  report.passed = report.max_residual <= tolerance;
  return report;
}

void propagate_upward(const FiniteTree& tree, BoundaryFields& fields, const ModelParams& params,
                      int from_level) {
  if (from_level < 0 || from_level > tree.depth()) throw InputError("level out of range");
  if (!fields.covers_level(from_level)) throw InputError("source level is not fully assigned");
  for (int m = from_level - 1; m >= 0; --m) {
    for (std::size_t v = tree.level_begin(m); v < tree.level_end(m); ++v) {
      const auto kids = tree.children(v);
      if (m % 2 == 0) {
        std::vector<OddField> child_fields;
        for (std::size_t c : kids) child_fields.push_back(fields.odd(c));
        const EvenRatios r = propagate_even(child_fields, params);
        fields.set_even(v, {r.minus, 0.0, r.plus});
      } else {
        std::vector<EvenField> child_fields;
        for (std::size_t c : kids) child_fields.push_back(fields.even(c));
        fields.set_odd(v, {0.0, propagate_odd(child_fields, params)});
      }
    }
  }
}

std::string fields_to_json(const BoundaryFields& fields) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t v = 0; v < fields.size(); ++v) {
    if (!fields.has(v)) continue;
    const auto h = fields.at(v);
    doc[std::to_string(v)] = std::vector<double>(h.begin(), h.end());
  }
  return doc.dump();
}

BoundaryFields fields_from_json(const FiniteTree& tree, std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed field JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("field JSON must be an object keyed by vertex index");
  BoundaryFields fields(tree);
  for (const auto& [key, value] : doc.items()) {
    std::size_t v;
    try {
      std::size_t used = 0;
      v = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError("field JSON key is not a vertex index: " + key);
    }
    if (!value.is_array()) throw InputError("field JSON values must be arrays");
    const auto values = value.get<std::vector<double>>();
    fields.set(v, values);
  }
  return fields;
}

}  // namespace gibbs_tree
