#include "gibbs_tree/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

TransitionMatrices build_matrices(const TIState& state, const ModelParams& params) {
  validate_state(state);
  const double a = params.half_coupling_beta();
  const std::array<double, 2> odd_field{0.0, std::log(state.odd_plus)};
  const std::array<double, 3> even_field{std::log(state.even_minus), 0.0, std::log(state.even_plus)};

  TransitionMatrices m{};
  // exponent J beta i j = 2a * (2i)(2j)/4 with doubled spins
  for (std::size_t i = 0; i < 3; ++i) {
    const int si = SpinAlphabets::even_twice[i];
    std::array<double, 2> logw{};
    for (std::size_t j = 0; j < 2; ++j) logw[j] = a * si * SpinAlphabets::odd_twice[j] / 2.0 + odd_field[j];
    const double norm = log_sum_exp(logw);
    for (std::size_t j = 0; j < 2; ++j) m.even_to_odd[i][j] = std::exp(logw[j] - norm);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const int si = SpinAlphabets::odd_twice[i];
    std::array<double, 3> logw{};
    for (std::size_t j = 0; j < 3; ++j) logw[j] = a * si * SpinAlphabets::even_twice[j] / 2.0 + even_field[j];
    const double norm = log_sum_exp(logw);
    for (std::size_t j = 0; j < 3; ++j) m.odd_to_even[i][j] = std::exp(logw[j] - norm);
  }
  m.two_step = multiply(m.even_to_odd, m.odd_to_even);

  if (stochastic_defect(m.even_to_odd) > kStochasticTolerance ||
      stochastic_defect(m.odd_to_even) > kStochasticTolerance ||
      stochastic_defect(m.two_step) > kStochasticTolerance) {
    throw std::logic_error("transition matrix lost stochasticity");
  }
  return m;
}

Matrix<3, 2> to_descending_order(const Matrix<3, 2>& p) {
  Matrix<3, 2> out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) out[i][j] = p[2 - i][1 - j];
  return out;
}

KappaGamma kappa_gamma(const Matrix<3, 3>& h) {
  if (stochastic_defect(h) > kStochasticTolerance) throw InputError("H must be row-stochastic");
  double widest = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      double l1 = 0.0;
      for (std::size_t l = 0; l < 3; ++l) l1 += std::abs(h[i][l] - h[j][l]);
      widest = std::max(widest, l1);
    }
  const double kappa = 0.5 * widest;
  return {kappa, kappa};
}

double disordered_kappa(double theta) {
  const double t2 = theta * theta;
  const double gap = t2 - 1.0;
  return gap * gap * (1.0 + t2) / disorder_denominator(theta);
}

Spectrum h_spectrum(const Matrix<3, 3>& m) {
  const double trace = m[0][0] + m[1][1] + m[2][2];
  const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                        m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  Spectrum s;
  s.eigenvalues = cubic_roots(1.0, -trace, minors, -det);
  std::array<std::complex<double>, 3> by_modulus = s.eigenvalues;
  std::sort(by_modulus.begin(), by_modulus.end(),
            [](auto x, auto y) { return std::abs(x) < std::abs(y); });
  for (std::size_t i = 0; i < 3; ++i) s.magnitudes[i] = std::abs(by_modulus[i]);
  s.subdominant = by_modulus[1].real();
  return s;
}

std::string_view to_string(Extremality e) {
  switch (e) {
    case Extremality::extreme: return "extreme";
    case Extremality::not_extreme: return "not_extreme";
    case Extremality::boundary: return "boundary";
  }
  return "unknown";
}

ExtremalityReport extremality(const ModelParams& params) {
  require_binary_tree(params);
  const TransitionMatrices m = build_matrices(disordered_state(params), params);
  const auto [kappa, gamma] = kappa_gamma(m.two_step);
  const Spectrum spectrum = h_spectrum(m.two_step);

  const std::array<double, 3> expected{0.0, kappa, 1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    if (std::abs(spectrum.magnitudes[i] - expected[i]) > kSpectrumTolerance) {
      throw std::logic_error("spectrum of H differs from {0, kappa, 1} at theta = " +
                             std::to_string(params.theta()));
    }
  }

  const double k = params.order();
  ExtremalityReport r;
  r.kappa = kappa;
  r.gamma = gamma;
  r.kkg = k * kappa * gamma;
  r.lambda2 = spectrum.subdominant;
  r.ks_value = k * r.lambda2 * r.lambda2;

  const bool extreme = r.kkg < 1.0;
  const bool not_extreme = r.ks_value > 1.0;
  if (std::abs(r.kkg - 1.0) < kExtremalityBoundaryTolerance) {
    r.verdict = Extremality::boundary;
  } else if (extreme == not_extreme) {
    throw std::logic_error("extremality and Kesten-Stigum criteria overlap at theta = " +
                           std::to_string(params.theta()));
  } else {
    r.verdict = extreme ? Extremality::extreme : Extremality::not_extreme;
  }
  return r;
}

double extremality_cubic(double v) {
  const double s = std::numbers::sqrt2;
  return (s - 1.0) * v * v * v - 4.0 * s * v - 4.0;
}

ExtremalityThresholds critical_extremality_thetas() {
  // 2 kappa^2 - 1 runs from -1 at theta = 1 to +1 as theta -> inf
  auto direct = [](double theta) {
    const double kappa = disordered_kappa(theta);
    const double h = 1e-7 * theta;
    const double slope =
        2.0 * (std::pow(disordered_kappa(theta + h), 2) - std::pow(disordered_kappa(theta - h), 2)) /
        (2.0 * h);
    return ValueAndSlope{2.0 * kappa * kappa - 1.0, slope};
  };
  ExtremalityThresholds out;
  out.theta_high = bracketed_newton(direct, 1.0, 1e3, 1e-15);
  out.theta_low = 1.0 / out.theta_high;
  out.vartheta = out.theta_high + out.theta_low;

  const double s = std::numbers::sqrt2;
  // extremality_cubic(2) = -4 < 0 and it is increasing for v > 2
  out.cubic_vartheta = bracketed_newton(
      [s](double v) { return ValueAndSlope{extremality_cubic(v), 3.0 * (s - 1.0) * v * v - 4.0 * s}; },
      2.0, 10.0);
  return out;
}

std::string matrices_to_json(const TransitionMatrices& m) {
  nlohmann::ordered_json doc;
  doc["order"] = {{"even", {-1, 0, 1}}, {"odd", {-0.5, 0.5}}};
  doc["P"] = m.even_to_odd;
  doc["Q"] = m.odd_to_even;
  doc["H"] = m.two_step;
  return doc.dump();
}

TransitionMatrices matrices_from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed matrix JSON: ") + e.what());
  }
  TransitionMatrices m{};
  try {
    m.even_to_odd = doc.at("P").get<Matrix<3, 2>>();
    m.odd_to_even = doc.at("Q").get<Matrix<2, 3>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix JSON needs 3x2 \"P\" and 2x3 \"Q\": ") + e.what());
  }
  if (stochastic_defect(m.even_to_odd) > kStochasticTolerance ||
      stochastic_defect(m.odd_to_even) > kStochasticTolerance) {
    throw InputError("P and Q must be row-stochastic");
  }
  m.two_step = multiply(m.even_to_odd, m.odd_to_even);
  return m;
}

}  // namespace gibbs_tree
