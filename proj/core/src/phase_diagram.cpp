#include "gibbs_tree/phase_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/fixed_points.hpp"
#include "gibbs_tree/parallel.hpp"
#include "gibbs_tree/ti_dynamics.hpp"

namespace gibbs_tree {
namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw InputError("not a number: '" + s + "'");
  }
}

PhaseRegion region_from(std::string_view s) {
  if (s == "unique") return PhaseRegion::unique;
  if (s == "coexistence") return PhaseRegion::coexistence;
  throw InputError("unknown phase_region '" + std::string(s) + "'");
}

Extremality extremality_from(std::string_view s) {
  if (s == "extreme") return Extremality::extreme;
  if (s == "not_extreme") return Extremality::not_extreme;
  if (s == "boundary") return Extremality::boundary;
  throw InputError("unknown extremality '" + std::string(s) + "'");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(PhaseRegion r) {
  return r == PhaseRegion::unique ? "unique" : "coexistence";
}

PhaseRecord phase_record(double theta) {
  const ModelParams params = ModelParams::from_theta(theta);
  const FixedPointSet set = enumerate_fixed_points(params);
  const StabilityReport stability = jacobian_eigenvalues(params);
  const ExtremalityReport ext = extremality(params);

  PhaseRecord r;
  r.theta = theta;
  r.rho = theta + 1.0 / theta;
  r.n_fixed_points = static_cast<int>(set.count());
  for (const FixedPoint& fp : set.points) r.z_roots.push_back(fp.state.odd_plus);
  r.jacobian_radius = stability.spectral_radius;
  r.kappa = ext.kappa;
  r.two_kappa_sq = ext.kkg;
  r.ks_value = ext.ks_value;
  r.phase_region = set.count() == 3 ? PhaseRegion::coexistence : PhaseRegion::unique;
  r.extremality = ext.verdict;
  return r;
}

std::vector<PhaseRecord> sweep(double theta_min, double theta_max, int steps) {
  if (!(theta_min > 0.0) || !std::isfinite(theta_max)) throw InputError("theta must be positive");
  if (!(theta_min < theta_max)) throw InputError("theta-min must be less than theta-max");
  if (steps < 2) throw InputError("steps must be at least 2");
  std::vector<PhaseRecord> out(static_cast<std::size_t>(steps));
  const double width = theta_max - theta_min;
  parallel_for(out.size(), [&](std::size_t i) {
    const double theta = (i + 1 == out.size()) ? theta_max
                                               : theta_min + width * static_cast<double>(i) / (steps - 1);
    out[i] = phase_record(theta);
  });
  return out;
}

std::string records_to_csv(std::span<const PhaseRecord> records) {
  std::string out(kPhaseCsvHeader);
  out += '\n';
  for (const PhaseRecord& r : records) {
    std::string roots;
    for (std::size_t i = 0; i < r.z_roots.size(); ++i) {
      if (i) roots += ';';
      roots += format_double(r.z_roots[i]);
    }
    out += format_double(r.theta) + ',' + format_double(r.rho) + ',' + std::to_string(r.n_fixed_points) +
           ',' + roots + ',' + format_double(r.jacobian_radius) + ',' + format_double(r.kappa) + ',' +
           format_double(r.two_kappa_sq) + ',' + format_double(r.ks_value) + ',' +
           std::string(to_string(r.phase_region)) + ',' + std::string(to_string(r.extremality)) + '\n';
  }
  return out;
}

std::vector<PhaseRecord> records_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kPhaseCsvHeader) throw InputError("unexpected phase-diagram CSV header");
  std::vector<PhaseRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 10) throw InputError("phase-diagram CSV row needs 10 cells: " + line);
    PhaseRecord r;
    r.theta = parse_double(cells[0]);
    r.rho = parse_double(cells[1]);
    r.n_fixed_points = static_cast<int>(parse_double(cells[2]));
    if (!cells[3].empty())
      for (const auto& z : split(cells[3], ';')) r.z_roots.push_back(parse_double(z));
    r.jacobian_radius = parse_double(cells[4]);
    r.kappa = parse_double(cells[5]);
    r.two_kappa_sq = parse_double(cells[6]);
    r.ks_value = parse_double(cells[7]);
    r.phase_region = region_from(cells[8]);
    r.extremality = extremality_from(cells[9]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_to_json(std::span<const PhaseRecord> records) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kPhaseSchemaVersion;
  auto& rows = doc["records"] = nlohmann::ordered_json::array();
  for (const PhaseRecord& r : records) {
    rows.push_back({{"theta", r.theta},
                    {"rho", r.rho},
                    {"n_fixed_points", r.n_fixed_points},
                    {"z_roots", r.z_roots},
                    {"jacobian_radius", r.jacobian_radius},
                    {"kappa", r.kappa},
                    {"two_kappa_sq", r.two_kappa_sq},
                    {"ks_value", r.ks_value},
                    {"phase_region", to_string(r.phase_region)},
                    {"extremality", to_string(r.extremality)}});
  }
  return doc.dump(2);
}

std::vector<PhaseRecord> records_from_json(std::string_view json) {
  std::vector<PhaseRecord> out;
  try {
    const auto doc = nlohmann::json::parse(json);
    if (doc.at("schema_version").get<int>() != kPhaseSchemaVersion) {
      throw InputError("unsupported phase-diagram schema version");
    }
    for (const auto& row : doc.at("records")) {
      PhaseRecord r;
      r.theta = row.at("theta").get<double>();
      r.rho = row.at("rho").get<double>();
      r.n_fixed_points = row.at("n_fixed_points").get<int>();
      r.z_roots = row.at("z_roots").get<std::vector<double>>();
      r.jacobian_radius = row.at("jacobian_radius").get<double>();
      r.kappa = row.at("kappa").get<double>();
      r.two_kappa_sq = row.at("two_kappa_sq").get<double>();
      r.ks_value = row.at("ks_value").get<double>();
      r.phase_region = region_from(row.at("phase_region").get<std::string>());
      r.extremality = extremality_from(row.at("extremality").get<std::string>());
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed phase-diagram JSON: ") + e.what());
  }
  return out;
}

std::string records_to_svg(std::span<const PhaseRecord> records) {
  if (records.empty()) throw InputError("no records to plot");
  constexpr double width = 900.0;
  constexpr double height = 560.0;
  constexpr double left = 70.0;
  constexpr double right = 30.0;
  constexpr double top = 40.0;
  constexpr double plot_h = 320.0;
  constexpr double band_h = 36.0;
  constexpr double y_max = 2.0;
  const double plot_w = width - left - right;
  const double lo = records.front().theta;
  const double hi = std::max(records.back().theta, lo * (1.0 + 1e-12) + 1e-12);

  auto sx = [&](double theta) { return left + (theta - lo) / (hi - lo) * plot_w; };
  auto sy = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, y_max) / y_max); };
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return std::string(buf);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"560\" viewBox=\"0 0 900 560\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"450\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">Mixed spin model on the binary "
         "tree</text>\n";

  // axes and grid
  svg += "<g stroke=\"#999\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(left + plot_w) +
         "\" y2=\"" + num(top + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(top + plot_h) + "\"/>\n";
  svg += "</g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = y_max * i / 4.0;
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(sy(v) + 4) + "\" text-anchor=\"end\">" + num(v) +
           "</text>\n";
  }
  for (int i = 0; i <= 8; ++i) {
    const double t = lo + (hi - lo) * i / 8.0;
    svg += "<text x=\"" + num(sx(t)) + "\" y=\"" + num(top + plot_h + 16) + "\" text-anchor=\"middle\">" +
           num(t) + "</text>\n";
  }
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(sy(1.0)) + "\" x2=\"" + num(left + plot_w) + "\" y2=\"" +
         num(sy(1.0)) + "\" stroke=\"#444\" stroke-dasharray=\"5,4\"/>\n";

  auto polyline = [&](auto value, const char* colour) {
    std::string pts;
    for (const PhaseRecord& r : records) pts += num(sx(r.theta)) + "," + num(sy(value(r))) + " ";
    svg += std::string("<polyline fill=\"none\" stroke=\"") + colour + "\" stroke-width=\"2\" points=\"" + pts +
           "\"/>\n";
  };
  polyline([](const PhaseRecord& r) { return r.jacobian_radius; }, "#1f77b4");
  polyline([](const PhaseRecord& r) { return std::numbers::sqrt2 * r.kappa; }, "#d62728");

  svg += "<text x=\"" + num(left + 10) + "\" y=\"" + num(top + 14) +
         "\" fill=\"#1f77b4\">|lambda| of the recursion Jacobian at the disordered point</text>\n";
  svg += "<text x=\"" + num(left + 10) + "\" y=\"" + num(top + 30) +
         "\" fill=\"#d62728\">sqrt(2) kappa (extreme below 1)</text>\n";

  // region bands
  const double band1 = top + plot_h + 40.0;
  const double band2 = band1 + band_h + 28.0;
  auto band = [&](double y, auto colour_of) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double a = i == 0 ? sx(records[0].theta) : 0.5 * (sx(records[i - 1].theta) + sx(records[i].theta));
      const double b = i + 1 == records.size() ? sx(records[i].theta)
                                               : 0.5 * (sx(records[i].theta) + sx(records[i + 1].theta));
      svg += "<rect x=\"" + num(a) + "\" y=\"" + num(y) + "\" width=\"" + num(std::max(b - a, 0.5)) +
             "\" height=\"" + num(band_h) + "\" fill=\"" + colour_of(records[i]) + "\"/>\n";
    }
  };
  band(band1, [](const PhaseRecord& r) {
    return std::string(r.phase_region == PhaseRegion::coexistence ? "#f4a261" : "#e9f5db");
  });
  band(band2, [](const PhaseRecord& r) {
    switch (r.extremality) {
      case Extremality::extreme: return std::string("#cfe8ff");
      case Extremality::not_extreme: return std::string("#9b5de5");
      case Extremality::boundary: return std::string("#333333");
    }
    return std::string("#ffffff");
  });
  svg += "<text x=\"" + num(left) + "\" y=\"" + num(band1 - 6) +
         "\">Translation-invariant measures: light = unique, orange = three coexist</text>\n";
  svg += "<text x=\"" + num(left) + "\" y=\"" + num(band2 - 6) +
         "\">Disordered phase: light = extreme, purple = not extreme</text>\n";
  svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 8) +
         "\" text-anchor=\"middle\">theta = exp(J beta / 2)</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace gibbs_tree
