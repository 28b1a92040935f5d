#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>

#include "gibbs_tree/model.hpp"
#include "gibbs_tree/numerics.hpp"
#include "gibbs_tree/ti_dynamics.hpp"

namespace gibbs_tree {

/// Tree-indexed Markov chain of a translation-invariant boundary law.
/// Rows and columns follow the ascending spin order everywhere:
/// even states (-1, 0, +1), odd states (-1/2, +1/2).
struct TransitionMatrices {
  Matrix<3, 2> even_to_odd;  // P
  Matrix<2, 3> odd_to_even;  // Q
  Matrix<3, 3> two_step;     // H = P Q
};

inline constexpr double kStochasticTolerance = 1e-12;

/// P_ij ∝ exp(J beta i j + h~_j), Q_ij ∝ exp(J beta i j + h_j), H = P Q.
/// Throws std::logic_error if any row fails stochasticity.
TransitionMatrices build_matrices(const TIState& state, const ModelParams& params);

/// Largest |row sum - 1|; infinity if an entry leaves [0, 1] by more than
/// kStochasticTolerance.
template <std::size_t R, std::size_t C>
double stochastic_defect(const Matrix<R, C>& m) {
  double worst = 0.0;
  for (const auto& row : m) {
    double s = 0.0;
    for (double x : row) {
      if (!(x >= -kStochasticTolerance && x <= 1.0 + kStochasticTolerance))
        return std::numeric_limits<double>::infinity();
      s += x;
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

/// Display convention with even states descending (+1, 0, -1) in rows and
/// odd states descending (+1/2, -1/2) in columns.
Matrix<3, 2> to_descending_order(const Matrix<3, 2>& p);

struct KappaGamma {
  double kappa;
  double gamma;
};

/// kappa = (1/2) max_{i,j} sum_l |H_il - H_jl|; gamma is taken equal to kappa.
KappaGamma kappa_gamma(const Matrix<3, 3>& two_step);

/// (θ²-1)²(1+θ²) / ((1+θ²)³ + 4θ³): kappa and the subdominant eigenvalue of H
/// at the disordered point.
double disordered_kappa(double theta);

struct Spectrum {
  std::array<std::complex<double>, 3> eigenvalues;
  /// Moduli sorted ascending.
  std::array<double, 3> magnitudes;
  /// Real part of the eigenvalue with the second-largest modulus.
  double subdominant;
};

/// Eigenvalues of a 3x3 matrix from its characteristic cubic (closed form).
Spectrum h_spectrum(const Matrix<3, 3>& h);

enum class Extremality { extreme, not_extreme, boundary };
std::string_view to_string(Extremality e);

inline constexpr double kExtremalityBoundaryTolerance = 1e-10;
inline constexpr double kSpectrumTolerance = 1e-10;

struct ExtremalityReport {
  double kappa;
  double gamma;
  /// k * kappa * gamma.
  double kkg;
  double lambda2;
  /// k * lambda2^2 (Kesten-Stigum value).
  double ks_value;
  Extremality verdict;
};

/// Extremality of the disordered phase on the binary tree: extreme when
/// k kappa gamma < 1, not extreme when k lambda2^2 > 1. Throws
/// std::logic_error if the spectrum of H differs from {0, kappa, 1} or the
/// two criteria fail to be complementary.
ExtremalityReport extremality(const ModelParams& params);

/// (√2-1)ϑ³ - 4√2 ϑ - 4, the boundary 2κ² = 1 written in ϑ = θ + 1/θ.
double extremality_cubic(double vartheta);

struct ExtremalityThresholds {
  /// ϑ at the boundary, from the direct condition sqrt(2) kappa(theta) = 1.
  double vartheta;
  double theta_low;
  double theta_high;
  /// Root of extremality_cubic in (2, inf); agrees with vartheta.
  double cubic_vartheta;
};

/// theta_high from bisection-Newton on 2 kappa(theta)^2 - 1 over theta > 1,
/// theta_low = 1/theta_high.
ExtremalityThresholds critical_extremality_thetas();

/// Previously published values of the extremality window and of ϑ. They come
/// from a reduced cubic with linear coefficient 4√2+√3-3, which does not
/// follow from 2κ² = 1; kept for side-by-side reporting only.
struct PublishedExtremalityConstants {
  static constexpr double vartheta = 3.634;
  static constexpr double theta_low = 0.299934;
  static constexpr double theta_high = 3.33407;
};

/// {"order": {"even": [...], "odd": [...]}, "P": [[...]], "Q": [[...]], "H": [[...]]}
std::string matrices_to_json(const TransitionMatrices& m);
/// Accepts the format above; H is recomputed as P Q when absent.
TransitionMatrices matrices_from_json(std::string_view json);

}  // namespace gibbs_tree
