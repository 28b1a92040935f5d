#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbs_tree/boundary_law.hpp"
#include "gibbs_tree/chain.hpp"
#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/exact_oracle.hpp"
#include "gibbs_tree/fixed_points.hpp"
#include "gibbs_tree/model.hpp"
#include "gibbs_tree/phase_diagram.hpp"
#include "gibbs_tree/sampler.hpp"
#include "gibbs_tree/ti_dynamics.hpp"

namespace gibbs_tree::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string num(double x, const char* format = "%.12g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

template <std::size_t R, std::size_t C>
Json matrix_json(const Matrix<R, C>& m) {
  Json rows = Json::array();
  for (const auto& row : m) rows.push_back(row);
  return rows;
}

template <std::size_t R, std::size_t C>
void print_matrix(std::ostream& out, const std::string& name, const Matrix<R, C>& m) {
  out << name << '\n';
  for (const auto& row : m) {
    out << ' ';
    for (double x : row) out << ' ' << pad(num(x, "%.15f"), 18);
    out << '\n';
  }
}

struct ThetaArgs {
  std::optional<double> theta;
  std::optional<double> coupling;
  std::optional<double> beta;

  void attach(CLI::App* sub) {
    sub->add_option("--theta", theta, "theta = exp(J beta / 2)");
    sub->add_option("--J", coupling, "coupling J (use with --beta)");
    sub->add_option("--beta", beta, "inverse temperature (use with --J)");
  }

  bool given() const { return theta || coupling || beta; }

  ModelParams resolve() const {
    if (theta && (coupling || beta)) throw InputError("give either --theta or --J/--beta, not both");
    if (theta) return ModelParams::from_theta(*theta);
    if (coupling && beta) return ModelParams(*coupling, *beta);
    if (coupling || beta) throw InputError("--J and --beta must be given together");
    throw InputError("one of --theta or --J/--beta is required");
  }
};

PhaseLabel parse_label(const std::string& s) {
  if (s == "disordered") return PhaseLabel::disordered;
  if (s == "plus") return PhaseLabel::plus_phase;
  if (s == "minus") return PhaseLabel::minus_phase;
  throw InputError("--fields must be disordered, plus or minus");
}

const FixedPoint& require_fixed_point(const FixedPointSet& set, PhaseLabel label, double theta) {
  const FixedPoint* fp = set.find(label);
  if (fp == nullptr) {
    throw InputError("no " + std::string(to_string(label)) + " fixed point at theta = " + num(theta) +
                     " (the translation-invariant measure is unique there)");
  }
  return *fp;
}

Json params_json(const ModelParams& p) {
  return Json{{"theta", p.theta()}, {"coupling", p.coupling()}, {"beta", p.beta()}};
}

// fixed-points ---------------------------------------------------------------

int cmd_fixed_points(const ThetaArgs& args, bool json, std::ostream& out) {
  const ModelParams params = args.resolve();
  const FixedPointSet set = enumerate_fixed_points(params);
  const PhaseTransitionDiagnostics diag = phase_transition_predicate(params);
  const StabilityReport stab = jacobian_eigenvalues(params);

  if (json) {
    Json doc = params_json(params);
    doc["count"] = set.count();
    doc["phase_transition"] = diag.transition;
    doc["t_roots"] = set.t_roots ? Json::array({set.t_roots->lower, set.t_roots->upper}) : Json(nullptr);
    Json points = Json::array();
    for (const FixedPoint& fp : set.points) {
      points.push_back({{"label", to_string(fp.label)},
                        {"X", fp.state.even_minus},
                        {"Y", fp.state.even_plus},
                        {"Z", fp.state.odd_plus},
                        {"residual", fp.residual}});
    }
    doc["fixed_points"] = points;
    doc["disordered_stability"] = {{"spectral_radius", stab.spectral_radius},
                                   {"classification", to_string(stab.classification)}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  out << "theta = " << num(params.theta()) << "  (J beta = " << num(params.coupling() * params.beta()) << ")\n";
  out << set.count() << (set.count() == 1 ? " fixed point" : " fixed points")
      << (diag.transition ? "  (phase transition)" : "  (unique translation-invariant measure)") << '\n';
  out << "  " << pad("label", 12) << pad("X", 22) << pad("Y", 22) << pad("Z", 22) << "residual\n";
  for (const FixedPoint& fp : set.points) {
    out << "  " << pad(std::string(to_string(fp.label)), 12) << pad(num(fp.state.even_minus, "%.16g"), 22)
        << pad(num(fp.state.even_plus, "%.16g"), 22) << pad(num(fp.state.odd_plus, "%.16g"), 22)
        << num(fp.residual, "%.2e") << '\n';
  }
  out << "disordered point: spectral radius " << num(stab.spectral_radius) << " ("
      << to_string(stab.classification) << ")\n";
  return kExitOk;
}

// critical -------------------------------------------------------------------

int cmd_critical(bool json, std::ostream& out) {
  const CriticalThetas c = critical_thetas();
  const ExtremalityThresholds e = critical_extremality_thetas();
  using Pub = PublishedExtremalityConstants;
  auto boundary_gap = [](double theta) {
    const double k = disordered_kappa(theta);
    return 2.0 * k * k - 1.0;
  };

  if (json) {
    Json doc;
    doc["phase_transition"] = {{"rho_crt", c.rho},
                               {"theta_1", c.theta_low},
                               {"theta_2", c.theta_high},
                               {"theta_product", c.theta_low * c.theta_high}};
    doc["extremality"] = {
        {"published", {{"vartheta", Pub::vartheta}, {"theta_1", Pub::theta_low}, {"theta_2", Pub::theta_high}}},
        {"derived", {{"vartheta", e.vartheta}, {"theta_1", e.theta_low}, {"theta_2", e.theta_high}}},
        {"cubic_vartheta", e.cubic_vartheta},
        {"two_kappa_sq_minus_one", {{"published", boundary_gap(Pub::theta_high)},
                                    {"derived", boundary_gap(e.theta_high)}}}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  out << "phase transition boundary (3 rho^3 - 16 rho - 4 = 0, rho = theta + 1/theta)\n";
  out << "  rho_crt    " << num(c.rho, "%.15g") << '\n';
  out << "  theta_1    " << num(c.theta_low, "%.15g") << '\n';
  out << "  theta_2    " << num(c.theta_high, "%.15g") << '\n';
  out << "  theta_1 * theta_2 = " << num(c.theta_low * c.theta_high, "%.17g") << '\n';
  out << "extremality boundary of the disordered phase (2 kappa^2 = 1)\n";
  out << "  " << pad("", 11) << pad("published", 14) << "derived\n";
  out << "  " << pad("vartheta", 11) << pad(num(Pub::vartheta), 14) << num(e.vartheta, "%.15g") << '\n';
  out << "  " << pad("theta~_1", 11) << pad(num(Pub::theta_low), 14) << num(e.theta_low, "%.15g") << '\n';
  out << "  " << pad("theta~_2", 11) << pad(num(Pub::theta_high), 14) << num(e.theta_high, "%.15g") << '\n';
  out << "  " << pad("2k^2 - 1", 11) << pad(num(boundary_gap(Pub::theta_high), "%.3g"), 14)
      << num(boundary_gap(e.theta_high), "%.3g") << '\n';
  out << "note: the published extremality constants do not satisfy 2 kappa^2 = 1; the derived\n"
         "      column solves that condition directly (the matching cubic in vartheta has root "
      << num(e.cubic_vartheta, "%.15g") << ").\n";
  return kExitOk;
}

// phase-diagram --------------------------------------------------------------

struct Boundary {
  std::string kind;
  double below;
  double above;
  std::string from;
  std::string to;
};

std::vector<Boundary> detect_boundaries(const std::vector<PhaseRecord>& records) {
  std::vector<Boundary> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const PhaseRecord& a = records[i - 1];
    const PhaseRecord& b = records[i];
    if (a.phase_region != b.phase_region) {
      out.push_back({"phase_region", a.theta, b.theta, std::string(to_string(a.phase_region)),
                     std::string(to_string(b.phase_region))});
    }
    if (a.extremality != b.extremality) {
      out.push_back({"extremality", a.theta, b.theta, std::string(to_string(a.extremality)),
                     std::string(to_string(b.extremality))});
    }
  }
  return out;
}

std::string infer_format(const std::string& requested, const std::string& path) {
  if (!requested.empty()) return requested;
  auto ends_with = [&](const char* ext) {
    const std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
  };
  if (ends_with(".json")) return "json";
  if (ends_with(".svg")) return "svg";
  return "csv";
}

int cmd_phase_diagram(double lo, double hi, int steps, const std::string& out_path,
                      const std::string& format_flag, bool json, std::ostream& out) {
  const std::string format = infer_format(format_flag, out_path);
  const std::vector<PhaseRecord> records = sweep(lo, hi, steps);
  std::string content;
  if (format == "csv") content = records_to_csv(records);
  else if (format == "json") content = records_to_json(records) + '\n';
  else content = records_to_svg(records);

  if (out_path.empty()) {
    out << content;
    return kExitOk;
  }
  write_file(out_path, content);

  const auto boundaries = detect_boundaries(records);
  if (json) {
    Json doc;
    doc["out"] = out_path;
    doc["format"] = format;
    doc["records"] = records.size();
    Json list = Json::array();
    for (const Boundary& b : boundaries) {
      list.push_back({{"kind", b.kind}, {"between", {b.below, b.above}}, {"from", b.from}, {"to", b.to}});
    }
    doc["boundaries"] = list;
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "wrote " << records.size() << " records (" << format << ") to " << out_path << '\n';
  for (const Boundary& b : boundaries) {
    out << "  " << pad(b.kind, 13) << " " << b.from << " -> " << b.to << " between theta " << num(b.below, "%.6f")
        << " and " << num(b.above, "%.6f") << '\n';
  }
  return kExitOk;
}

// oracle-verify --------------------------------------------------------------

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool passed() const { return value < tolerance; }
};

int cmd_oracle_verify(const ThetaArgs& args, int depth, const std::string& fields_flag,
                      const std::string& table_path, bool json, std::ostream& out) {
  const ModelParams params = args.resolve();
  if (depth < 1) throw InputError("--depth must be at least 1");
  const PhaseLabel label = parse_label(fields_flag);
  const FiniteTree tree(params.order(), depth);
  if (configuration_count(tree) > kMaxConfigurations) {
    throw EnumerationCapError("depth " + std::to_string(depth) + " needs " +
                              std::to_string(configuration_count(tree)) +
                              " configurations; exact enumeration is capped at " +
                              std::to_string(kMaxConfigurations) + " (depth <= 3)");
  }
  const FixedPointSet set = enumerate_fixed_points(params);
  const FixedPoint& fp = require_fixed_point(set, label, params.theta());
  const BoundaryFields fields = translation_invariant_fields(tree, fp.state);
  const FiniteGibbsMeasure measure = build_measure(tree, fields, params);

  std::vector<Check> checks;
  checks.push_back({"recursion compatibility", check_compatibility(tree, fields, params, 1e-12).max_residual,
                    1e-12});

  double marginal_gap = 0.0;
  for (int m = depth - 1; m >= 0; --m) {
    const FiniteTree sub(params.order(), m);
    const FiniteGibbsMeasure direct = build_measure(sub, translation_invariant_fields(sub, fp.state), params);
    const std::vector<double> reduced = marginalize(measure, m);
    for (std::size_t i = 0; i < reduced.size(); ++i)
      marginal_gap = std::max(marginal_gap, std::abs(reduced[i] - direct.probabilities()[i]));
  }
  checks.push_back({"marginal consistency", marginal_gap, 1e-12});

  const FiniteTree parent_tree(params.order(), depth - 1);
  const PartitionFunction z_n = partition_function(tree, fields, params);
  const PartitionFunction z_prev =
      partition_function(parent_tree, translation_invariant_fields(parent_tree, fp.state), params);
  const double log_ratio = z_n.log_value - z_prev.log_value - z_n.log_level_normalizers.at(depth - 1);
  checks.push_back({"partition recursion", std::abs(std::expm1(log_ratio)), 1e-12});

  if (depth >= 2) {
    const TransitionMatrices chain = build_matrices(fp.state, params);
    const ConditionalTables tables = root_child_conditional(measure);
    checks.push_back({"child given root vs P", max_abs_difference(tables.child_given_root, chain.even_to_odd),
                      1e-10});
    checks.push_back({"grandchild given root vs H",
                      max_abs_difference(tables.grandchild_given_root, chain.two_step), 1e-10});
  }

  if (!table_path.empty()) write_file(table_path, probability_table_csv(measure));

  bool all = true;
  for (const Check& c : checks) all = all && c.passed();

  if (json) {
    Json doc = params_json(params);
    doc["depth"] = depth;
    doc["fields"] = to_string(label);
    doc["configurations"] = measure.size();
    Json list = Json::array();
    for (const Check& c : checks) {
      list.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
    }
    doc["checks"] = list;
    doc["passed"] = all;
    out << doc.dump(2) << '\n';
  } else {
    out << "theta = " << num(params.theta()) << ", depth " << depth << ", " << to_string(label) << " fields, "
        << measure.size() << " configurations\n";
    for (const Check& c : checks) {
      out << "  " << (c.passed() ? "PASS  " : "FAIL  ") << pad(c.name, 28) << num(c.value, "%.3e")
          << "  (tol " << num(c.tolerance, "%.0e") << ")\n";
    }
    out << (all ? "PASS" : "FAIL") << '\n';
  }
  return all ? kExitOk : kExitVerificationFailed;
}

// sample ---------------------------------------------------------------------

struct SampleOptions {
  int depth = 2;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::string fields = "disordered";
  std::string matrices_path;
  std::string out_path;
  double sigmas = 3.0;
};

int cmd_sample(const ThetaArgs& args, const SampleOptions& opt, bool json, std::ostream& out) {
  TransitionMatrices chain{};
  Json source;
  if (!opt.matrices_path.empty()) {
    if (args.given()) throw InputError("--matrices replaces --theta/--J/--beta; give only one");
    chain = matrices_from_json(read_file(opt.matrices_path));
    source = {{"matrices", opt.matrices_path}};
  } else {
    const ModelParams params = args.resolve();
    const FixedPointSet set = enumerate_fixed_points(params);
    const PhaseLabel label = parse_label(opt.fields);
    chain = build_matrices(require_fixed_point(set, label, params.theta()).state, params);
    source = params_json(params);
    source["fields"] = to_string(label);
  }
  const std::array<double, 3> root_law = stationary_law(chain.two_step);
  const SampleRun run = sample_chain(chain, root_law, opt.depth, opt.samples, opt.seed);
  if (!opt.out_path.empty()) write_file(opt.out_path, sample_run_to_json(run) + '\n');

  std::optional<BandCheck> band;
  std::optional<ChiSquare> chi;
  if (run.depth >= 2) {
    band = grandchild_band_check(run, chain.two_step, opt.sigmas);
    chi = grandchild_chi_square(run, chain.two_step);
  }

  if (json) {
    Json doc;
    doc["source"] = source;
    doc["run"] = Json::parse(sample_run_to_json(run));
    if (band) {
      doc["expected_grandchild"] = matrix_json(chain.two_step);
      doc["empirical_grandchild"] = matrix_json(run.empirical_grandchild());
      doc["band_check"] = {{"sigmas", band->sigmas}, {"max_abs_z", band->max_abs_z}, {"within", band->within}};
      doc["chi_square"] = {{"statistic", chi->statistic}, {"dof", chi->dof}, {"p_value", chi->p_value}};
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  out << "philox4x32-10 seed " << run.seed << ", " << run.samples << " samples, depth " << run.depth << '\n';
  out << "root law (stationary for H): " << num(root_law[0], "%.6f") << ' ' << num(root_law[1], "%.6f") << ' '
      << num(root_law[2], "%.6f") << '\n';
  for (int m = 0; m <= run.depth; ++m) {
    out << "  level " << m << ':';
    for (double p : run.level_distribution(m)) out << ' ' << num(p, "%.6f");
    out << '\n';
  }
  if (band) {
    print_matrix(out, "grandchild given root, empirical (rows/cols -1, 0, +1)", run.empirical_grandchild());
    print_matrix(out, "grandchild given root, H", chain.two_step);
    out << "max |z| = " << num(band->max_abs_z, "%.3f") << (band->within ? " (within " : " (outside ")
        << num(band->sigmas, "%g") << " sigma)\n";
    out << "chi-square = " << num(chi->statistic, "%.4f") << " on " << chi->dof
        << " dof, p = " << num(chi->p_value, "%.4g") << '\n';
  }
  return kExitOk;
}

// matrices -------------------------------------------------------------------

int cmd_matrices(const ThetaArgs& args, const std::string& fields_flag, const std::string& out_path, bool json,
                 std::ostream& out) {
  const ModelParams params = args.resolve();
  const PhaseLabel label = parse_label(fields_flag);
  const FixedPointSet set = enumerate_fixed_points(params);
  const TransitionMatrices chain = build_matrices(require_fixed_point(set, label, params.theta()).state, params);
  const std::string doc = matrices_to_json(chain);
  if (!out_path.empty()) write_file(out_path, doc + '\n');
  if (json) {
    out << doc << '\n';
    return kExitOk;
  }
  print_matrix(out, "P (even -1, 0, +1 -> odd -1/2, +1/2)", chain.even_to_odd);
  print_matrix(out, "Q (odd -1/2, +1/2 -> even -1, 0, +1)", chain.odd_to_even);
  print_matrix(out, "H = P Q", chain.two_step);
  const KappaGamma kg = kappa_gamma(chain.two_step);
  out << "kappa = " << num(kg.kappa, "%.15g") << '\n';
  if (!out_path.empty()) out << "wrote " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs measures of the mixed spin-(1, 1/2) Ising model on the binary tree", "gibbs-tree"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output")->configurable(false);

  ThetaArgs fp_args;
  auto* fp = app.add_subcommand("fixed-points", "translation-invariant fixed points at one theta");
  fp_args.attach(fp);
  fp->add_flag("--json", json, "machine-readable output");

  auto* critical = app.add_subcommand("critical", "critical constants of the phase and extremality boundaries");
  critical->add_flag("--json", json, "machine-readable output");

  double theta_min = 0.1;
  double theta_max = 4.0;
  int steps = 400;
  std::string pd_out;
  std::string pd_format;
  auto* pd = app.add_subcommand("phase-diagram", "sweep theta and classify each grid point");
  pd->add_option("--theta-min", theta_min, "lower end of the grid")->capture_default_str();
  pd->add_option("--theta-max", theta_max, "upper end of the grid")->capture_default_str();
  pd->add_option("--steps", steps, "number of grid points (>= 2)")->capture_default_str();
  pd->add_option("--out", pd_out, "output file (stdout when omitted)");
  pd->add_option("--format", pd_format, "csv, json or svg (default: from --out extension, else csv)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  pd->add_flag("--json", json, "machine-readable summary");

  ThetaArgs ov_args;
  int ov_depth = 2;
  std::string ov_fields = "disordered";
  std::string ov_table;
  auto* ov = app.add_subcommand("oracle-verify", "check a fixed point against exact enumeration");
  ov_args.attach(ov);
  ov->add_option("--depth", ov_depth, "tree depth n (at most 3)")->capture_default_str();
  ov->add_option("--fields", ov_fields, "disordered, plus or minus")
      ->check(CLI::IsMember({"disordered", "plus", "minus"}))
      ->capture_default_str();
  ov->add_option("--table", ov_table, "write the depth-n probability table as CSV");
  ov->add_flag("--json", json, "machine-readable output");

  ThetaArgs sm_args;
  SampleOptions sm;
  auto* sample = app.add_subcommand("sample", "sample the tree-indexed Markov chain");
  sm_args.attach(sample);
  sample->add_option("--depth", sm.depth, "tree depth")->capture_default_str();
  sample->add_option("--samples", sm.samples, "number of sampled trees")->capture_default_str();
  sample->add_option("--seed", sm.seed, "64-bit seed")->capture_default_str();
  sample->add_option("--fields", sm.fields, "disordered, plus or minus")
      ->check(CLI::IsMember({"disordered", "plus", "minus"}))
      ->capture_default_str();
  sample->add_option("--matrices", sm.matrices_path, "chain JSON written by 'matrices --out'");
  sample->add_option("--out", sm.out_path, "write the SampleRun as JSON");
  sample->add_option("--sigmas", sm.sigmas, "band width for the grandchild check")->capture_default_str();
  sample->add_flag("--json", json, "machine-readable output");

  ThetaArgs mx_args;
  std::string mx_fields = "disordered";
  std::string mx_out;
  auto* mx = app.add_subcommand("matrices", "transition matrices P, Q and H of a fixed point");
  mx_args.attach(mx);
  mx->add_option("--fields", mx_fields, "disordered, plus or minus")
      ->check(CLI::IsMember({"disordered", "plus", "minus"}))
      ->capture_default_str();
  mx->add_option("--out", mx_out, "write the matrices as JSON");
  mx->add_flag("--json", json, "machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (fp->parsed()) return cmd_fixed_points(fp_args, json, out);
    if (critical->parsed()) return cmd_critical(json, out);
    if (pd->parsed()) return cmd_phase_diagram(theta_min, theta_max, steps, pd_out, pd_format, json, out);
    if (ov->parsed()) return cmd_oracle_verify(ov_args, ov_depth, ov_fields, ov_table, json, out);
    if (sample->parsed()) return cmd_sample(sm_args, sm, json, out);
    if (mx->parsed()) return cmd_matrices(mx_args, mx_fields, mx_out, json, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal check failed: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
  return kExitInput;
}

}  // namespace gibbs_tree::cli
