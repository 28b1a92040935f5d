#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>

namespace gibbs_tree {

template <std::size_t Rows, std::size_t Cols>
using Matrix = std::array<std::array<double, Cols>, Rows>;

template <std::size_t R, std::size_t K, std::size_t C>
Matrix<R, C> multiply(const Matrix<R, K>& a, const Matrix<K, C>& b) {
  Matrix<R, C> out{};
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < K; ++l) s += a[i][l] * b[l][j];
      out[i][j] = s;
    }
  return out;
}

template <std::size_t R, std::size_t C>
double max_abs_difference(const Matrix<R, C>& a, const Matrix<R, C>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      const double d = a[i][j] - b[i][j];
      worst = d < 0 ? (worst < -d ? -d : worst) : (worst < d ? d : worst);
    }
  return worst;
}

/// log(sum exp(v)), stable for large arguments.
double log_sum_exp(std::span<const double> values);

/// Real roots of a*x^2 + b*x + c (a != 0), ascending, using the
/// cancellation-free form. nullopt when the discriminant is negative.
std::optional<std::pair<double, double>> real_quadratic_roots(double a, double b, double c);

/// All three roots of a*x^3 + b*x^2 + c*x + d (a != 0) via Cardano's
/// formula, trigonometric branch when all roots are real.
std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c, double d);

/// Value and derivative at a point.
using ValueAndSlope = std::pair<double, double>;

/// Root of f in [lo, hi] where f(lo) and f(hi) have opposite signs: Newton
/// steps that leave the bracket (or fail to shrink it) fall back to bisection.
/// Stops when the bracket width is below abs_tol.
double bracketed_newton(const std::function<ValueAndSlope(double)>& f, double lo, double hi,
                        double abs_tol = 1e-14, int max_iter = 200);

}  // namespace gibbs_tree
