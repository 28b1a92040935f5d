#include "gibbs_tree/ti_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

void validate_state(const TIState& s) {
  for (double v : {s.even_minus, s.even_plus, s.odd_plus}) {
    if (!std::isfinite(v) || v <= 0.0) throw InputError("state components must be positive and finite");
  }
}

TIState recursion_map(const TIState& s, const ModelParams& params) {
  require_binary_tree(params);
  validate_state(s);
  const double t = params.theta();
  const double t2 = t * t;
  const double z = s.odd_plus;
  const double minus = (t2 + z) / (t * (1.0 + z));
  const double plus = (1.0 + t2 * z) / (t * (1.0 + z));
  const double odd = (s.even_minus + t2 * s.even_plus + t) / (t2 * s.even_minus + s.even_plus + t);
  return {minus * minus, plus * plus, odd * odd};
}

TIState disordered_state(const ModelParams& params) {
  const double t = params.theta();
  const double r = (t * t + 1.0) / (2.0 * t);
  return {r * r, r * r, 1.0};
}

double relative_distance(const TIState& a, const TIState& b) {
  return std::max({std::abs(a.even_minus - b.even_minus) / std::abs(b.even_minus),
                   std::abs(a.even_plus - b.even_plus) / std::abs(b.even_plus),
                   std::abs(a.odd_plus - b.odd_plus) / std::abs(b.odd_plus)});
}

double fixed_point_residual(const TIState& state, const ModelParams& params) {
  return relative_distance(recursion_map(state, params), state);
}

TIState invert_odd(const TIState& s) { return {s.even_minus, s.even_plus, 1.0 / s.odd_plus}; }

TIState spin_flip(const TIState& s) { return {s.even_plus, s.even_minus, 1.0 / s.odd_plus}; }

BoundaryFields translation_invariant_fields(const FiniteTree& tree, const TIState& state) {
  validate_state(state);
  BoundaryFields fields(tree);
  const EvenField even{std::log(state.even_minus), 0.0, std::log(state.even_plus)};
  const OddField odd{0.0, std::log(state.odd_plus)};
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_even(v)) {
      fields.set_even(v, even);
    } else {
      fields.set_odd(v, odd);
    }
  }
  return fields;
}

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::disordered: return "disordered";
    case PhaseLabel::plus_phase: return "plus_phase";
    case PhaseLabel::minus_phase: return "minus_phase";
  }
  return "unknown";
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    case Stability::neutral: return "neutral";
  }
  return "unknown";
}

std::string_view to_string(IterationStatus s) {
  switch (s) {
    case IterationStatus::converged: return "converged";
    case IterationStatus::period_two: return "period_two";
    case IterationStatus::not_converged: return "not_converged";
  }
  return "unknown";
}

double disorder_denominator(double theta) {
  const double t2 = theta * theta;
  const double s = 1.0 + t2;
  return s * s * s + 4.0 * t2 * theta;
}

Matrix<3, 3> disordered_jacobian(const ModelParams& params) {
  require_binary_tree(params);
  const double t = params.theta();
  const double t2 = t * t;
  const double even_slope = (t2 - 1.0 / t2) / 4.0;
  const double odd_slope = 8.0 * t2 * (t2 - 1.0) / disorder_denominator(t);
  return {{{0.0, 0.0, -even_slope}, {0.0, 0.0, even_slope}, {-odd_slope, odd_slope, 0.0}}};
}

Matrix<3, 3> numeric_jacobian(const TIState& at, const ModelParams& params, double rel_step) {
  Matrix<3, 3> jac{};
  const std::array<double, 3> base{at.even_minus, at.even_plus, at.odd_plus};
  for (std::size_t col = 0; col < 3; ++col) {
    const double h = rel_step * std::max(std::abs(base[col]), 1e-300);
    auto shifted = [&](double delta) {
      std::array<double, 3> x = base;
      x[col] += delta;
      const TIState out = recursion_map({x[0], x[1], x[2]}, params);
      return std::array<double, 3>{out.even_minus, out.even_plus, out.odd_plus};
    };
    const auto up = shifted(h);
    const auto down = shifted(-h);
    for (std::size_t row = 0; row < 3; ++row) jac[row][col] = (up[row] - down[row]) / (2.0 * h);
  }
  return jac;
}

namespace {

std::array<double, 3> sorted_moduli(const Matrix<3, 3>& m) {
  const double trace = m[0][0] + m[1][1] + m[2][2];
  const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                        m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  const auto roots = cubic_roots(1.0, -trace, minors, -det);
  std::array<double, 3> mod{std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2])};
  std::sort(mod.begin(), mod.end());
  return mod;
}

}  // namespace

StabilityReport jacobian_eigenvalues(const ModelParams& params) {
  require_binary_tree(params);
  const double t = params.theta();
  const double t2 = t * t;
  const double radius =
      2.0 * std::abs(t2 - 1.0) * std::sqrt(1.0 + t2) / std::sqrt(disorder_denominator(t));

  StabilityReport report;
  report.eigenvalues = {0.0, -radius, radius};
  report.spectral_radius = radius;
  if (radius < 1.0 - kStabilityTolerance) {
    report.classification = Stability::attracting;
  } else if (radius > 1.0 + kStabilityTolerance) {
    report.classification = Stability::repelling;
  } else {
    report.classification = Stability::neutral;
  }
  report.closed_form_jacobian = disordered_jacobian(params);
  report.numeric_jacobian = numeric_jacobian(disordered_state(params), params);

  const auto numeric = sorted_moduli(report.numeric_jacobian);
  const std::array<double, 3> expected{0.0, radius, radius};
  report.eigenvalue_mismatch = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    report.eigenvalue_mismatch =
        std::max(report.eigenvalue_mismatch,
                 std::abs(numeric[i] - expected[i]) / std::max(1.0, expected[i]));
  }
  if (report.eigenvalue_mismatch > kJacobianAgreement) {
    throw std::logic_error("finite-difference Jacobian disagrees with closed form at theta = " +
                           std::to_string(t));
  }
  return report;
}

IterationResult iterate(const TIState& start, const ModelParams& params, int max_steps, double tol,
                        std::span<const FixedPoint> known) {
  validate_state(start);
  if (max_steps < 0) throw InputError("max_steps must be non-negative");
  IterationResult result;
  result.trajectory.push_back(start);
  auto& traj = result.trajectory;
  for (int step = 0; step < max_steps; ++step) {
    traj.push_back(recursion_map(traj.back(), params));
    const std::size_t n = traj.size() - 1;
    const double one_step = relative_distance(traj[n], traj[n - 1]);
    if (one_step < tol) {
      result.status = IterationStatus::converged;
      result.limit = traj[n];
      break;
    }
    // Two interleaved sublattice chains that settle on different fixed
    // points give an exact 2-cycle with an O(1) gap between the states.
    if (n >= 3 && relative_distance(traj[n], traj[n - 2]) < tol &&
        relative_distance(traj[n - 1], traj[n - 3]) < tol && one_step > 1e-6) {
      result.status = IterationStatus::period_two;
      result.cycle = std::pair{traj[n - 1], traj[n]};
      break;
    }
  }
  if (result.limit) {
    for (const FixedPoint& fp : known) {
      if (relative_distance(*result.limit, fp.state) < kFixedPointMatchTolerance) {
        result.matched = fp.label;
        break;
      }
    }
  }
  return result;
}

}  // namespace gibbs_tree
