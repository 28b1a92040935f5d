#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gibbs_tree/boundary_law.hpp"
#include "gibbs_tree/model.hpp"
#include "gibbs_tree/numerics.hpp"

namespace gibbs_tree {

/// Translation-invariant boundary law in exponentiated form:
/// even_minus = e^{h_-1 - h_0}, even_plus = e^{h_+1 - h_0},
/// odd_plus = e^{h~_+1/2 - h~_-1/2}. All components are strictly positive.
struct TIState {
  double even_minus;
  double even_plus;
  double odd_plus;

  friend bool operator==(const TIState&, const TIState&) = default;
};

/// Throws InputError unless every component is finite and positive.
void validate_state(const TIState& state);

/// One step of the translation-invariant recursion on the binary tree:
/// the even ratios are recomputed from odd_plus and odd_plus from the even
/// ratios.
TIState recursion_map(const TIState& state, const ModelParams& params);

/// Free-boundary fixed point: odd_plus = 1, even ratios ((theta^2+1)/(2 theta))^2.
TIState disordered_state(const ModelParams& params);

/// Relative sup-norm distance max_i |a_i - b_i| / |b_i|.
double relative_distance(const TIState& a, const TIState& b);

/// relative_distance(recursion_map(state), state).
double fixed_point_residual(const TIState& state, const ModelParams& params);

/// (X, Y, Z) -> (X, Y, 1/Z): conjugates the map at theta with the map at 1/theta.
TIState invert_odd(const TIState& state);
/// (X, Y, Z) -> (Y, X, 1/Z): global spin flip, maps fixed points to fixed points.
TIState spin_flip(const TIState& state);

/// Fields h = (ln X, 0, ln Y) on every even vertex and h~ = (0, ln Z) on
/// every odd vertex of the tree.
BoundaryFields translation_invariant_fields(const FiniteTree& tree, const TIState& state);

enum class PhaseLabel { disordered, plus_phase, minus_phase };
std::string_view to_string(PhaseLabel label);

struct FixedPoint {
  PhaseLabel label;
  TIState state;
  double residual;
};

enum class Stability { attracting, repelling, neutral };
std::string_view to_string(Stability s);

inline constexpr double kStabilityTolerance = 1e-9;
inline constexpr double kJacobianAgreement = 1e-6;

struct StabilityReport {
  /// {0, -r, +r} with r = 2|theta^2-1| sqrt(theta^2+1) / sqrt(D).
  std::array<double, 3> eigenvalues;
  double spectral_radius;
  Stability classification;
  Matrix<3, 3> closed_form_jacobian;
  Matrix<3, 3> numeric_jacobian;
  /// Largest gap between closed-form and finite-difference eigenvalue moduli.
  double eigenvalue_mismatch;
};

/// D = 1 + 3θ² + 4θ³ + 3θ⁴ + θ⁶ = (1+θ²)³ + 4θ³.
double disorder_denominator(double theta);

/// Closed-form Jacobian of recursion_map at the disordered state.
Matrix<3, 3> disordered_jacobian(const ModelParams& params);

/// Central-difference Jacobian of recursion_map, step rel_step * |component|.
Matrix<3, 3> numeric_jacobian(const TIState& at, const ModelParams& params,
                              double rel_step = 1e-6);

/// Linear stability at the disordered fixed point. Computes the closed form
/// and a finite-difference Jacobian, and throws std::logic_error if their
/// spectra disagree by more than kJacobianAgreement.
StabilityReport jacobian_eigenvalues(const ModelParams& params);

enum class IterationStatus { converged, period_two, not_converged };
std::string_view to_string(IterationStatus s);

struct IterationResult {
  std::vector<TIState> trajectory;
  IterationStatus status = IterationStatus::not_converged;
  std::optional<TIState> limit;
  /// Known fixed point the limit matched (relative distance 1e-10).
  std::optional<PhaseLabel> matched;
  /// The two alternating states when status == period_two.
  std::optional<std::pair<TIState, TIState>> cycle;
};

inline constexpr double kFixedPointMatchTolerance = 1e-10;

/// Iterates recursion_map until successive states differ by less than tol
/// (relative sup-norm) or max_steps is reached. The map updates the even and
/// odd sublattices from each other, so a trajectory can settle on a 2-cycle;
/// that case is reported as period_two.
IterationResult iterate(const TIState& start, const ModelParams& params, int max_steps,
                        double tol, std::span<const FixedPoint> known = {});

}  // namespace gibbs_tree
