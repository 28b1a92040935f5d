#include "gibbs_tree/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/parallel.hpp"

namespace gibbs_tree {
namespace {

constexpr std::size_t kChunks = 64;

// Per-vertex field, or zeros when the vertex is not on the boundary level.
std::vector<std::vector<double>> leaf_fields(const FiniteTree& tree, const BoundaryFields& fields) {
  std::vector<std::vector<double>> out(tree.size());
  const int n = tree.depth();
  for (std::size_t v = tree.level_begin(n); v < tree.level_end(n); ++v) {
    const auto h = fields.at(v);
    out[v].assign(h.begin(), h.end());
  }
  return out;
}

int twice_spin(const FiniteTree& tree, std::size_t v, std::size_t digit) {
  return tree.is_even(v) ? SpinAlphabets::even_twice[digit] : SpinAlphabets::odd_twice[digit];
}

std::string format_spin(int twice) {
  switch (twice) {
    case -2: return "-1";
    case -1: return "-0.5";
    case 0: return "0";
    case 1: return "0.5";
    case 2: return "1";
    default: return "?";
  }
}

}  // namespace

std::size_t configuration_count(const FiniteTree& tree) {
  std::size_t total = 1;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const std::size_t r = tree.alphabet_size(v);
    if (total > std::numeric_limits<std::size_t>::max() / r) return std::numeric_limits<std::size_t>::max();
    total *= r;
  }
  return total;
}

FiniteGibbsMeasure::FiniteGibbsMeasure(FiniteTree tree, ModelParams params)
    : tree_(std::move(tree)), params_(params) {
  radix_.resize(tree_.size());
  stride_.resize(tree_.size());
  std::size_t stride = 1;
  for (std::size_t v = tree_.size(); v-- > 0;) {
    radix_[v] = tree_.alphabet_size(v);
    stride_[v] = stride;
    stride *= radix_[v];
  }
}

std::size_t FiniteGibbsMeasure::digit(std::size_t id, std::size_t v) const {
  return (id / stride_.at(v)) % radix_[v];
}

SpinConfig FiniteGibbsMeasure::decode(std::size_t id) const {
  if (id >= size()) throw InputError("configuration id out of range");
  SpinConfig config(tree_.size());
  for (std::size_t v = 0; v < tree_.size(); ++v) config[v] = twice_spin(tree_, v, digit(id, v));
  return config;
}

FiniteGibbsMeasure build_measure(const FiniteTree& tree, const BoundaryFields& fields,
                                 const ModelParams& params) {
  if (tree.order() != params.order()) throw InputError("tree order differs from model order");
  const std::size_t total = configuration_count(tree);
  if (total > kMaxConfigurations) {
    throw EnumerationCapError("exact enumeration capped at " + std::to_string(kMaxConfigurations) +
                              " configurations; depth " + std::to_string(tree.depth()) +
                              " needs " + (total == std::numeric_limits<std::size_t>::max()
                                               ? std::string("more")
                                               : std::to_string(total)));
  }
  if (fields.size() != tree.size()) throw InputError("field assignment does not match the tree");
  if (!fields.covers_level(tree.depth())) throw InputError("boundary level W_n needs fields on every vertex");

  FiniteGibbsMeasure measure(tree, params);
  const auto boundary = leaf_fields(tree, fields);
  const double a = params.half_coupling_beta();
  const std::size_t nv = tree.size();
  const std::size_t k = static_cast<std::size_t>(tree.order());
  const std::size_t leaves_begin = tree.level_begin(tree.depth());

  std::vector<double> log_weight(total);
  const std::size_t chunks = std::min(kChunks, total);
  std::vector<double> chunk_peak(chunks, -std::numeric_limits<double>::infinity());

  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = total * c / chunks;
    const std::size_t end = total * (c + 1) / chunks;
    std::vector<std::size_t> digits(nv);
    std::vector<int> spin(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      digits[v] = measure.digit(begin, v);
      spin[v] = twice_spin(tree, v, digits[v]);
    }
    for (std::size_t id = begin; id < end; ++id) {
      long long quarters = 0;
      for (std::size_t v = 1; v < nv; ++v) quarters += static_cast<long long>(spin[(v - 1) / k]) * spin[v];
      double lw = a * static_cast<double>(quarters) / 2.0;
      for (std::size_t v = leaves_begin; v < nv; ++v) lw += boundary[v][digits[v]];
      log_weight[id] = lw;
      chunk_peak[c] = std::max(chunk_peak[c], lw);
      // odometer increment, last vertex least significant
      for (std::size_t v = nv; v-- > 0;) {
        if (++digits[v] < measure.radix_[v]) {
          spin[v] = twice_spin(tree, v, digits[v]);
          break;
        }
        digits[v] = 0;
        spin[v] = twice_spin(tree, v, 0);
      }
    }
  });

  const double peak = *std::max_element(chunk_peak.begin(), chunk_peak.end());
  std::vector<double> chunk_sum(chunks, 0.0);
  measure.probabilities_.resize(total);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = total * c / chunks;
    const std::size_t end = total * (c + 1) / chunks;
    double s = 0.0;
    for (std::size_t id = begin; id < end; ++id) {
      const double w = std::exp(log_weight[id] - peak);
      measure.probabilities_[id] = w;
      s += w;
    }
    chunk_sum[c] = s;
  });
  double sum = 0.0;
  for (double s : chunk_sum) sum += s;
  for (double& p : measure.probabilities_) p /= sum;
  measure.log_partition_ = peak + std::log(sum);
  return measure;
}

double PartitionFunction::value() const { return std::exp(log_value); }

PartitionFunction partition_function(const FiniteTree& tree, const BoundaryFields& fields,
                                     const ModelParams& params) {
  PartitionFunction out;
  out.log_value = build_measure(tree, fields, params).log_partition();

  for (int m = 0; m <= tree.depth(); ++m)
    if (!fields.covers_level(m)) return out;

  const double a = params.half_coupling_beta();
  for (int m = 0; m < tree.depth(); ++m) {
    double level_log = 0.0;
    for (std::size_t x = tree.level_begin(m); x < tree.level_end(m); ++x) {
      const auto hx = fields.at(x);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      double first = 0.0;
      for (std::size_t s = 0; s < hx.size(); ++s) {
        const int sx = twice_spin(tree, x, s);
        double log_a = -hx[s];
        for (std::size_t y : tree.children(x)) {
          const auto hy = fields.at(y);
          std::vector<double> terms(hy.size());
          for (std::size_t u = 0; u < hy.size(); ++u) {
            terms[u] = a * sx * twice_spin(tree, y, u) / 2.0 + hy[u];
          }
          log_a += log_sum_exp(terms);
        }
        if (s == 0) first = log_a;
        lo = std::min(lo, log_a);
        hi = std::max(hi, log_a);
      }
      out.normalizer_spread = std::max(out.normalizer_spread, hi - lo);
      level_log += first;
    }
    out.log_level_normalizers.push_back(level_log);
  }
  return out;
}

std::vector<double> marginalize(const FiniteGibbsMeasure& measure, int sub_depth) {
  const FiniteTree& tree = measure.tree();
  if (sub_depth < 0 || sub_depth >= tree.depth()) throw InputError("marginal depth must satisfy 0 <= m < n");
  const std::size_t inner = tree.level_end(sub_depth);
  std::size_t block = 1;
  for (std::size_t v = inner; v < tree.size(); ++v) block *= tree.alphabet_size(v);
  const auto p = measure.probabilities();
  std::vector<double> out(p.size() / block, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < block; ++j) s += p[i * block + j];
    out[i] = s;
  }
  return out;
}

ConditionalTables root_child_conditional(const FiniteGibbsMeasure& measure) {
  const FiniteTree& tree = measure.tree();
  if (tree.depth() < 2) throw InputError("root-child conditionals need depth >= 2");
  const std::size_t child = tree.first_child(0);
  const std::size_t grandchild = tree.first_child(child);
  Matrix<3, 2> joint_child{};
  Matrix<3, 3> joint_grandchild{};
  const auto p = measure.probabilities();
  for (std::size_t id = 0; id < p.size(); ++id) {
    const std::size_t r = measure.digit(id, 0);
    joint_child[r][measure.digit(id, child)] += p[id];
    joint_grandchild[r][measure.digit(id, grandchild)] += p[id];
  }
  ConditionalTables out{};
  for (std::size_t r = 0; r < 3; ++r) {
    const double mass = joint_child[r][0] + joint_child[r][1];
    if (!(mass > 0.0)) throw InputError("root state has zero probability");
    for (std::size_t j = 0; j < 2; ++j) out.child_given_root[r][j] = joint_child[r][j] / mass;
    for (std::size_t l = 0; l < 3; ++l) out.grandchild_given_root[r][l] = joint_grandchild[r][l] / mass;
  }
  return out;
}

std::string probability_table_csv(const FiniteGibbsMeasure& measure) {
  std::string out = "configuration_id,spins,probability\n";
  char buf[64];
  for (std::size_t id = 0; id < measure.size(); ++id) {
    out += std::to_string(id);
    out += ',';
    const SpinConfig spins = measure.decode(id);
    for (std::size_t v = 0; v < spins.size(); ++v) {
      if (v) out += ';';
      out += format_spin(spins[v]);
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", measure.probabilities()[id]);
    out += buf;
  }
  return out;
}

}  // namespace gibbs_tree
