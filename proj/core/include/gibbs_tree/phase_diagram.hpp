#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gibbs_tree/chain.hpp"

namespace gibbs_tree {

enum class PhaseRegion { unique, coexistence };
std::string_view to_string(PhaseRegion r);

/// Per-theta summary: fixed-point census, stability of the disordered point
/// and its extremality verdict.
struct PhaseRecord {
  double theta = 0.0;
  double rho = 0.0;
  int n_fixed_points = 0;
  std::vector<double> z_roots;
  double jacobian_radius = 0.0;
  double kappa = 0.0;
  double two_kappa_sq = 0.0;
  double ks_value = 0.0;
  PhaseRegion phase_region = PhaseRegion::unique;
  Extremality extremality = Extremality::extreme;

  friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

PhaseRecord phase_record(double theta);

/// steps records on the uniform grid theta_i = min + i (max - min)/(steps - 1),
/// evaluated concurrently and returned in grid order.
std::vector<PhaseRecord> sweep(double theta_min, double theta_max, int steps);

inline constexpr int kPhaseSchemaVersion = 1;
inline constexpr std::string_view kPhaseCsvHeader =
    "theta,rho,n_fixed_points,z_roots,jacobian_radius,kappa,two_kappa_sq,ks_value,phase_region,"
    "extremality";

/// Doubles are written with 17 significant digits, so CSV and JSON both
/// round-trip exactly.
std::string records_to_csv(std::span<const PhaseRecord> records);
std::vector<PhaseRecord> records_from_csv(std::string_view csv);
std::string records_to_json(std::span<const PhaseRecord> records);
std::vector<PhaseRecord> records_from_json(std::string_view json);

/// Static self-contained SVG: stability/extremality curves over theta and
/// region bands for uniqueness vs coexistence and extreme vs not extreme.
std::string records_to_svg(std::span<const PhaseRecord> records);

}  // namespace gibbs_tree
