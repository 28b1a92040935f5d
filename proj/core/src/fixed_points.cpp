#include "gibbs_tree/fixed_points.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/numerics.hpp"

namespace gibbs_tree {

QuarticCoefficients quartic_coefficients(const ModelParams& params) {
  const double t = params.theta();
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t2 * t2;
  const double t5 = t4 * t;
  const double t6 = t3 * t3;
  const double t7 = t6 * t;
  const double t8 = t4 * t4;
  const double t9 = t8 * t;
  const double t10 = t5 * t5;
  const double t12 = t6 * t6;
  const double q = 1.0 + t + t2;
  return {
      t4 * q * q,
      -1.0 - 2.0 * t3 + 5.0 * t4 + 10.0 * t5 + 12.0 * t6 + 10.0 * t7 + 5.0 * t8 - 2.0 * t9 - t12,
      -1.0 - 2.0 * t2 - 4.0 * t3 + 7.0 * t4 + 16.0 * t5 + 22.0 * t6 + 16.0 * t7 + 7.0 * t8 -
          4.0 * t9 - 2.0 * t10 - t12,
  };
}

double t_discriminant(const QuarticCoefficients& k) { return 8.0 * k.a * k.a + k.b * k.b - 4.0 * k.a * k.c; }

std::optional<TRoots> solve_t_quadratic(const QuarticCoefficients& coeffs) {
  if (!(coeffs.a > 0.0)) throw InputError("leading coefficient A must be positive");
  if (t_discriminant(coeffs) < 0.0) return std::nullopt;
  const auto roots = real_quadratic_roots(coeffs.a, coeffs.b, coeffs.c - 2.0 * coeffs.a);
  if (!roots) {
    // rounding put b^2 - 4a(c-2a) marginally below zero: a double root
    const double t = -coeffs.b / (2.0 * coeffs.a);
    return TRoots{t, t};
  }
  return TRoots{roots->first, roots->second};
}

const FixedPoint* FixedPointSet::find(PhaseLabel label) const {
  for (const FixedPoint& fp : points)
    if (fp.label == label) return &fp;
  return nullptr;
}

TIState complete_from_odd(double odd_plus, const ModelParams& params) {
  if (!std::isfinite(odd_plus) || odd_plus <= 0.0) throw InputError("odd ratio must be positive");
  const double t = params.theta();
  const double t2 = t * t;
  const double minus = (t2 + odd_plus) / (t * (1.0 + odd_plus));
  const double plus = (1.0 + t2 * odd_plus) / (t * (1.0 + odd_plus));
  return {minus * minus, plus * plus, odd_plus};
}

FixedPointSet enumerate_fixed_points(const ModelParams& params) {
  require_binary_tree(params);
  FixedPointSet set;
  set.t_roots = solve_t_quadratic(quartic_coefficients(params));

  std::optional<double> large_root;
  if (set.t_roots) {
    // Only one root can exceed 2: both would need h(theta) > 0 together with
    // 2(A+B)+C > 0, which never holds. Take the largest admissible one.
    const double t = set.t_roots->upper;
    if (t > 2.0 + kTieWidth) large_root = 0.5 * (t + std::sqrt((t - 2.0) * (t + 2.0)));
    if (set.t_roots->lower > 2.0 + kTieWidth) {
      throw std::logic_error("both t-roots exceed 2 at theta = " + std::to_string(params.theta()));
    }
  }

  auto add = [&](PhaseLabel label, double odd_plus) {
    const TIState state = complete_from_odd(odd_plus, params);
    const double residual = fixed_point_residual(state, params);
    if (!(residual < kFixedPointResidualLimit)) {
      throw std::logic_error("fixed point failed verification at theta = " +
                             std::to_string(params.theta()) + ", residual " + std::to_string(residual));
    }
    set.points.push_back({label, state, residual});
  };
  if (large_root) add(PhaseLabel::minus_phase, 1.0 / *large_root);
  add(PhaseLabel::disordered, 1.0);
  if (large_root) add(PhaseLabel::plus_phase, *large_root);
  return set;
}

double transition_cubic(double rho) { return 3.0 * rho * rho * rho - 16.0 * rho - 4.0; }

PhaseTransitionDiagnostics phase_transition_predicate(const ModelParams& params) {
  require_binary_tree(params);
  const double t = params.theta();
  const QuarticCoefficients k = quartic_coefficients(params);
  PhaseTransitionDiagnostics d;
  d.rho = t + 1.0 / t;
  d.g_rho = transition_cubic(d.rho);
  d.boundary_value = 2.0 * (k.a + k.b) + k.c;
  d.transition = d.g_rho > 0.0;
  return d;
}

CriticalThetas critical_thetas() {
  // g(2) = -12 < 0 < g(3) = 29, and g is increasing on (2, inf)
  const double rho = bracketed_newton(
      [](double r) { return ValueAndSlope{transition_cubic(r), 9.0 * r * r - 16.0}; }, 2.0, 3.0);
  const double high = 0.5 * (rho + std::sqrt(rho * rho - 4.0));
  return {rho, 1.0 / high, high};
}

double vertex_polynomial(double t) {
  const double t2 = t * t;
  return 1.0 - 3.0 * t2 - 2.0 * t2 * t - 3.0 * t2 * t2 + t2 * t2 * t2;
}

bool case2_predicate(const ModelParams& params) { return vertex_polynomial(params.theta()) > 0.0; }

}  // namespace gibbs_tree
