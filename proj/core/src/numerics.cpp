#include "gibbs_tree/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

std::optional<std::pair<double, double>> real_quadratic_roots(double a, double b, double c) {
  if (a == 0.0) throw InputError("quadratic leading coefficient must be non-zero");
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(root, b));
  double r1;
  double r2;
  if (q == 0.0) {
    r1 = r2 = 0.0;
  } else {
    r1 = q / a;
    r2 = c / q;
  }
  if (r1 > r2) std::swap(r1, r2);
  return std::pair{r1, r2};
}

std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c, double d) {
  if (a == 0.0) throw InputError("cubic leading coefficient must be non-zero");
  // depressed cubic t^3 + p t + q with x = t - b/(3a)
  const double bn = b / a;
  const double cn = c / a;
  const double dn = d / a;
  const double shift = bn / 3.0;
  const double p = cn - bn * bn / 3.0;
  const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  std::array<std::complex<double>, 3> out;
  if (disc <= 0.0 && p < 0.0) {
    const double radius = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * radius), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int i = 0; i < 3; ++i) {
      out[static_cast<std::size_t>(i)] =
          radius * std::cos(phi - 2.0 * std::numbers::pi * i / 3.0) - shift;
    }
    return out;
  }
  const double s = std::sqrt(std::max(disc, 0.0));
  const double u = std::cbrt(-q / 2.0 + s);
  const double v = std::cbrt(-q / 2.0 - s);
  const double real = u + v;
  const std::complex<double> omega(-0.5, std::sqrt(3.0) / 2.0);
  out[0] = real - shift;
  out[1] = u * omega + v * std::conj(omega) - shift;
  out[2] = u * std::conj(omega) + v * omega - shift;
  return out;
}

double bracketed_newton(const std::function<ValueAndSlope(double)>& f, double lo, double hi,
                        double abs_tol, int max_iter) {
  if (!(lo < hi)) throw InputError("bracket must satisfy lo < hi");
  double f_lo = f(lo).first;
  const double f_hi = f(hi).first;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw InputError("bracket does not contain a sign change");

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter && (hi - lo) > abs_tol; ++it) {
    const auto [fx, slope] = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (f_lo > 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    double next = (slope != 0.0) ? x - fx / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= abs_tol) return next;
    x = next;
  }
  return x;
}

}  // namespace gibbs_tree
