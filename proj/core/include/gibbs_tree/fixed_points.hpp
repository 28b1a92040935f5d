#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gibbs_tree/model.hpp"
#include "gibbs_tree/ti_dynamics.hpp"

namespace gibbs_tree {

/// Coefficients of the palindromic quartic A Z^4 + B Z^3 + C Z^2 + B Z + A
/// whose positive roots (together with Z = 1) are the odd_plus components of
/// all translation-invariant fixed points.
struct QuarticCoefficients {
  double a;
  double b;
  double c;
};

QuarticCoefficients quartic_coefficients(const ModelParams& params);

/// Roots of A t^2 + B t + (C - 2A) = 0, where t = Z + 1/Z.
struct TRoots {
  double lower;
  double upper;
};

/// Discriminant 8A^2 + B^2 - 4AC of the t-quadratic.
double t_discriminant(const QuarticCoefficients& coeffs);

/// Both real roots sorted ascending, or nullopt if the discriminant is negative.
std::optional<TRoots> solve_t_quadratic(const QuarticCoefficients& coeffs);

/// t in [2, 2 + kTieWidth] is treated as the double root Z = 1 and merged
/// into the disordered point.
inline constexpr double kTieWidth = 1e-12;
inline constexpr double kFixedPointResidualLimit = 1e-10;

struct FixedPointSet {
  /// Ordered minus_phase (Z < 1), disordered, plus_phase (Z > 1) when present.
  std::vector<FixedPoint> points;
  std::optional<TRoots> t_roots;

  std::size_t count() const noexcept { return points.size(); }
  const FixedPoint* find(PhaseLabel label) const;
};

/// Every translation-invariant fixed point at this theta, each verified
/// against recursion_map (throws std::logic_error if a residual exceeds
/// kFixedPointResidualLimit).
FixedPointSet enumerate_fixed_points(const ModelParams& params);

/// Even ratios (X, Y) determined by the odd ratio Z through the recursion.
TIState complete_from_odd(double odd_plus, const ModelParams& params);

/// g(rho) = 3 rho^3 - 16 rho - 4.
double transition_cubic(double rho);

struct PhaseTransitionDiagnostics {
  bool transition;
  double rho;
  double g_rho;
  /// 2(A + B) + C; negative exactly when a root t > 2 exists.
  double boundary_value;
};

/// True iff a second translation-invariant fixed point family exists, i.e.
/// 2(A+B)+C < 0, equivalently g(theta + 1/theta) > 0.
PhaseTransitionDiagnostics phase_transition_predicate(const ModelParams& params);

struct CriticalThetas {
  double rho;
  double theta_low;
  double theta_high;
};

/// rho_crt = unique root of g in (2, inf); theta_high = (rho + sqrt(rho^2-4))/2,
/// theta_low = 1/theta_high.
CriticalThetas critical_thetas();

/// h(theta) = 1 - 3θ² - 2θ³ - 3θ⁴ + θ⁶.
double vertex_polynomial(double theta);

/// h(theta) > 0, the necessary condition for both t-roots to exceed 2.
bool case2_predicate(const ModelParams& params);

}  // namespace gibbs_tree
