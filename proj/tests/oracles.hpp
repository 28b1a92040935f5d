#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library, so agreement is a genuine cross-check.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Map written out component by component.
inline std::array<double, 3> recursion(double t, double x, double y, double z) {
  const double a = (t * t + z) / (t * (1 + z));
  const double b = (1 + t * t * z) / (t * (1 + z));
  const double c = (x + t * t * y + t) / (t * t * x + y + t);
  return {a * a, b * b, c * c};
}

// Composite one-variable map whose fixed points are the odd ratios Z.
inline double composite(double t, double z) {
  const double a = (t * t + z) / (t * (1 + z));
  const double b = (1 + t * t * z) / (t * (1 + z));
  const double x = a * a, y = b * b;
  const double c = (x + t * t * y + t) / (t * t * x + y + t);
  return c * c;
}

// Number of sign changes of composite(Z) - Z on an even-count log grid over
// (1e-4, 1e4); Z = 1 is never a node.
inline int sign_change_count(double t, int nodes = 20000) {
  int changes = 0;
  double prev = 0.0;
  const double ratio = std::pow(10.0, 8.0 / nodes);
  double z = std::pow(10.0, -4.0 + 4.0 / nodes);
  for (int i = 0; i < nodes; ++i, z *= ratio) {
    const double g = composite(t, z) - z;
    if (i > 0 && ((prev < 0) != (g < 0))) ++changes;
    prev = g;
  }
  return changes;
}

// Polynomial form of Z d(Z)^2 - n(Z)^2 after clearing the theta^2 (1+Z)^2
// denominators of the composite map.
inline double cleared_residual(double t, double z) {
  const double t2 = t * t;
  const double n = (t2 + z) * (t2 + z) + t2 * (1 + t2 * z) * (1 + t2 * z) + t2 * t * (1 + z) * (1 + z);
  const double d = t2 * (t2 + z) * (t2 + z) + (1 + t2 * z) * (1 + t2 * z) + t2 * t * (1 + z) * (1 + z);
  return z * d * d - n * n;
}

inline double denominator(double t) { return 1 + 3 * t * t + 4 * std::pow(t, 3) + 3 * std::pow(t, 4) + std::pow(t, 6); }

// Closed form of H at the disordered point (rows and columns -1, 0, +1).
inline Mat3 h_disordered(double t) {
  const double d = denominator(t);
  const double t2 = t * t;
  const double outer = (1 + t2) * (1 + t2 * t2) / d;
  const double mid = 4 * t2 * t / d;
  const double cross = 2 * t2 * (1 + t2) / d;
  const double centre = std::pow(1 + t2, 3) / 2 / d;
  return {{{outer, mid, cross}, {centre, mid, centre}, {cross, mid, outer}}};
}

// General two-step matrix as typeset: the product of the displayed P (rows
// even +1, 0, -1; columns odd +1/2, -1/2) and the displayed Q (rows odd
// -1/2, +1/2; columns even -1, 0, +1), simplified with the fixed-point
// relation sqrt(Z) = (X + t^2 Y + t) / (t^2 X + Y + t).
inline Mat3 h_display(double t, double x, double y, double z) {
  const double t2 = t * t;
  const double r = std::sqrt(z * z * z);
  const double s = x + t + y * t2;
  const double u = 1 + z * t2;
  const double v = 1 + z;
  const double w = z + t2;
  return {{{x * (1 + t2 * t2 * r) / u / s, t * (1 + t2 * r) / u / s, y * t2 * (1 + r) / u / s},
           {x * (1 + t2 * r) / v / s, t * (1 + r) / v / s, y * (t2 + r) / v / s},
           {x * t2 * (1 + r) / w / s, t * (t2 + r) / w / s, y * (t2 * t2 + r) / w / s}}};
}

inline double kappa_closed(double t) {
  return std::pow(t * t - 1, 2) * (1 + t * t) / denominator(t);
}

// Plain bisection for the positive root of 3 rho^3 - 16 rho - 4 above 2.
inline double rho_critical() {
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (3 * mid * mid * mid - 16 * mid - 4 < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Durand-Kerner roots of a monic-normalised cubic.
inline std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c, double d) {
  using C = std::complex<double>;
  auto p = [&](C x) { return ((x + b / a) * x + c / a) * x + d / a; };
  std::array<C, 3> r{C(0.4, 0.9), C(0.4, 0.9) * C(0.4, 0.9), C(0.4, 0.9) * C(0.4, 0.9) * C(0.4, 0.9)};
  for (int it = 0; it < 500; ++it) {
    for (int i = 0; i < 3; ++i) {
      C den = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) den *= r[i] - r[j];
      r[i] -= p(r[i]) / den;
    }
  }
  return r;
}

// Reference Philox4x32-10 block function.
inline std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57} * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += 0x9E3779B9;
    k[1] += 0xBB67AE85;
  }
  return c;
}

}  // namespace oracle
