#include "gibbs_tree/model.hpp"

#include <cmath>
#include <string>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

ModelParams::ModelParams(double coupling, double beta, int order)
    : ModelParams(coupling, beta, order, std::exp(0.5 * coupling * beta), 0.5 * coupling * beta) {}

ModelParams::ModelParams(double coupling, double beta, int order, double theta, double half_jb)
    : coupling_(coupling), beta_(beta), order_(order), theta_(theta), half_jb_(half_jb) {
  if (!std::isfinite(coupling_)) throw InputError("coupling J must be finite");
  if (!std::isfinite(beta_) || beta_ <= 0.0) throw InputError("beta must be positive and finite");
  if (order_ < 1) throw InputError("tree order k must be at least 1");
  if (!std::isfinite(theta_) || theta_ <= 0.0) throw InputError("theta must be positive");
}

ModelParams ModelParams::from_theta(double theta, int order) {
  if (!std::isfinite(theta) || theta <= 0.0) throw InputError("theta must be positive");
  const double half_jb = std::log(theta);
  return ModelParams(2.0 * half_jb, 1.0, order, theta, half_jb);
}

void require_binary_tree(const ModelParams& params) {
  if (params.order() != 2) {
    throw InputError("closed-form analysis requires tree order k = 2, got k = " +
                     std::to_string(params.order()));
  }
}

std::optional<std::size_t> SpinAlphabets::even_index(int twice) noexcept {
  switch (twice) {
    case -2: return 0;
    case 0: return 1;
    case 2: return 2;
    default: return std::nullopt;
  }
}

std::optional<std::size_t> SpinAlphabets::odd_index(int twice) noexcept {
  switch (twice) {
    case -1: return 0;
    case 1: return 1;
    default: return std::nullopt;
  }
}

FiniteTree::FiniteTree(int order, int depth) : order_(order), depth_(depth) {
  if (order < 1) throw InputError("tree order k must be at least 1");
  if (depth < 0) throw InputError("tree depth must be non-negative");
  level_begin_.reserve(static_cast<std::size_t>(depth) + 2);
  std::size_t begin = 0;
  std::size_t width = 1;
  for (int m = 0; m <= depth; ++m) {
    level_begin_.push_back(begin);
    begin += width;
    width *= static_cast<std::size_t>(order);
  }
  level_begin_.push_back(begin);
}

int FiniteTree::level(std::size_t v) const {
  if (v >= size()) throw InputError("vertex index out of range");
  int m = 0;
  while (v >= level_begin_[static_cast<std::size_t>(m) + 1]) ++m;
  return m;
}

std::optional<std::size_t> FiniteTree::parent(std::size_t v) const {
  if (v >= size()) throw InputError("vertex index out of range");
  if (v == 0) return std::nullopt;
  return (v - 1) / static_cast<std::size_t>(order_);
}

std::size_t FiniteTree::first_child(std::size_t v) const {
  if (is_leaf(v)) throw InputError("leaf vertex has no children");
  return static_cast<std::size_t>(order_) * v + 1;
}

std::vector<std::size_t> FiniteTree::children(std::size_t v) const {
  std::vector<std::size_t> out;
  if (is_leaf(v)) return out;
  const std::size_t first = first_child(v);
  for (int i = 0; i < order_; ++i) out.push_back(first + static_cast<std::size_t>(i));
  return out;
}

FiniteTree build_tree(int order, int depth) { return FiniteTree(order, depth); }

void validate_config(const FiniteTree& tree, std::span<const int> config) {
  if (config.size() != tree.size()) {
    throw InputError("configuration length " + std::to_string(config.size()) +
                     " does not match tree size " + std::to_string(tree.size()));
  }
  for (int m = 0; m <= tree.depth(); ++m) {
    for (std::size_t v = tree.level_begin(m); v < tree.level_end(m); ++v) {
      const bool legal = (m % 2 == 0) ? SpinAlphabets::even_index(config[v]).has_value()
                                      : SpinAlphabets::odd_index(config[v]).has_value();
      if (!legal) {
        throw InputError("illegal spin at vertex " + std::to_string(v) + " (level " +
                         std::to_string(m) + ")");
      }
    }
  }
}

std::int64_t interaction_sum_quarters(const FiniteTree& tree, std::span<const int> config) {
  validate_config(tree, config);
  std::int64_t sum = 0;
  for (std::size_t v = 1; v < tree.size(); ++v) {
    const std::size_t p = (v - 1) / static_cast<std::size_t>(tree.order());
    sum += static_cast<std::int64_t>(config[p]) * config[v];
  }
  return sum;
}

double hamiltonian(const FiniteTree& tree, std::span<const int> config, const ModelParams& params) {
  return -params.coupling() * static_cast<double>(interaction_sum_quarters(tree, config)) / 4.0;
}

}  // namespace gibbs_tree
