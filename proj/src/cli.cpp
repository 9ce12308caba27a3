#include "curvlab/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/analysis.hpp"
#include "curvlab/suite.hpp"

namespace curvlab {

namespace {

constexpr int kExitSuiteFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEvaluation = 3;
constexpr int kExitIndeterminate = 4;
constexpr int kExitNonEinstein = 5;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError("invalid JSON in '" + path + "': " + err.what());
  }
  return j;
}

void emit(const nlohmann::json& doc, bool pretty, const std::string& out_path,
          std::ostream& out) {
  const std::string text = pretty ? doc.dump(2) : doc.dump();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw ConfigError("cannot write '" + out_path + "'");
    f << text << "\n";
  } else {
    out << text << "\n";
  }
}

std::optional<std::vector<Point>> parse_points_flag(const std::string& spec, int* sample_count) {
  if (spec.empty()) return std::nullopt;
  if (spec.rfind("sample:", 0) == 0) {
    *sample_count = std::stoi(spec.substr(7));
    if (*sample_count < 1) throw ConfigError("--points sample count must be positive");
    return std::nullopt;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(spec);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("--points expects 'sample:N' or an inline JSON list of points");
  }
  if (!j.is_array()) throw ConfigError("--points list must be an array of points");
  std::vector<Point> pts;
  for (const auto& row : j) {
    if (!row.is_array()) throw ConfigError("--points entries must be arrays");
    Point p;
    for (const auto& v : row) p.push_back(v.get<double>());
    pts.push_back(p);
  }
  return pts;
}

int cmd_analyze(const std::string& config_path, const ToleranceBand& band, std::uint64_t seed,
                const std::string& points_spec, std::optional<bool> nabla, bool pretty,
                const std::string& out_path, std::ostream& out) {
  const FamilyConfig cfg = family_from_json(load_json(config_path));
  AnalyzeOptions opt;
  opt.band = band;
  opt.seed = seed;
  opt.points_override = parse_points_flag(points_spec, &opt.sample_count);
  opt.nabla_r_override = nabla;
  const AnalyzeResult result = analyze_family(cfg, opt);
  emit(result.report, pretty, out_path, out);
  return result.any_indeterminate ? kExitIndeterminate : 0;
}

int cmd_model_validate(const std::string& path, double tol, bool pretty,
                       const std::string& out_path, std::ostream& out) {
  const Model m = model_from_json(load_json(path));
  const ModelSymmetryReport rep = validate_model(m);
  nlohmann::json doc;
  doc["schema"] = "curvlab/model-validate-v1";
  doc["n"] = m.dim();
  doc["tol"] = tol;
  doc["scale"] = rep.scale;
  doc["residuals"] = {{"antisymmetry_first_pair", rep.antisym_first_pair},
                      {"antisymmetry_last_pair", rep.antisym_last_pair},
                      {"pair_symmetry", rep.pair_symmetry},
                      {"first_bianchi", rep.bianchi_first}};
  doc["worst_index"] = rep.worst_index;
  doc["violations"] = rep.violations(tol);
  emit(doc, pretty, out_path, out);
  return 0;
}

int cmd_model_double(const std::string& in_path, const std::string& out_file, double tol,
                     bool pretty, std::ostream& out) {
  const Model m0 = model_from_json(load_json(in_path));
  const Model m1 = double_model(m0);
  {
    std::ofstream f(out_file);
    if (!f) throw ConfigError("cannot write '" + out_file + "'");
    f << model_to_json(m1).dump(2) << "\n";
  }
  const double s = einstein_constant(m0);
  const SquareMatrix rho = m1.ricci_op();
  const double sq_residual =
      (rho * rho - (-4.0 * s * s) * SquareMatrix::identity(m1.dim())).max_abs() /
      (1.0 + 4.0 * s * s);
  nlohmann::json doc;
  doc["schema"] = "curvlab/model-double-v1";
  doc["input_dim"] = m0.dim();
  doc["einstein_constant"] = s;
  doc["output"] = out_file;
  doc["rho1_sq_plus_4s2_residual"] = sq_residual;
  doc["rho1_sq_check"] = sq_residual <= tol;
  emit(doc, pretty, "", out);
  return 0;
}

int cmd_model_random(std::uint64_t seed, int n, const std::string& signature,
                     const std::string& out_file, bool pretty, std::ostream& out) {
  int negatives = 0;
  if (!signature.empty()) {
    const auto comma = signature.find(',');
    if (comma == std::string::npos)
      throw ConfigError("--signature expects 'neg,pos'");
    negatives = std::stoi(signature.substr(0, comma));
    const int positives = std::stoi(signature.substr(comma + 1));
    if (negatives + positives != n) throw ConfigError("signature must sum to n");
  }
  const Model m = random_model(seed, n, negatives);
  const nlohmann::json doc = model_to_json(m);
  if (!out_file.empty()) {
    std::ofstream f(out_file);
    if (!f) throw ConfigError("cannot write '" + out_file + "'");
    f << doc.dump(2) << "\n";
  } else {
    emit(doc, pretty, "", out);
  }
  return 0;
}

int cmd_suite(const std::string& filter, double tol, std::uint64_t seed, bool as_json,
              bool pretty, std::ostream& out) {
  SuiteOptions opt;
  opt.filter = filter;
  opt.tol = tol;
  opt.seed = seed;
  const auto rows = run_reproduction_suite(opt);
  if (as_json) {
    emit(suite_to_json(rows), pretty, "", out);
  } else {
    for (const CriterionResult& r : rows) {
      out << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(8) << r.key << " "
          << r.title << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)\n";
      out.unsetf(std::ios::floatfield);
      if (!r.pass) out << "        failing: " << r.failing_subchecks() << "\n";
    }
  }
  std::string failing;
  for (const CriterionResult& r : rows)
    if (!r.pass) failing += (failing.empty() ? "" : ", ") + r.key;
  if (!failing.empty()) {
    out << "failed criteria: " << failing << "\n";
    return kExitSuiteFailure;
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvature laboratory for coordinate-chart pseudo-Riemannian metrics"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "curvature and property report for a family");
  std::string config_path, points_spec, out_path;
  double tol = 1e-8, fail_floor = 1e-4;
  std::uint64_t seed = 0;
  bool pretty = false, lazy_nabla = false, with_nabla = false;
  analyze->add_option("--config", config_path, "family configuration JSON")->required();
  analyze->add_option("--tol", tol, "pass tolerance for property verdicts");
  analyze->add_option("--fail-floor", fail_floor, "failure floor of the verdict band");
  analyze->add_option("--seed", seed, "sampling seed");
  analyze->add_option("--points", points_spec, "'sample:N' or inline JSON point list");
  analyze->add_flag("--lazy-nabla-r", lazy_nabla, "skip the covariant derivative of R");
  analyze->add_flag("--with-nabla-r", with_nabla, "force the covariant derivative of R");
  analyze->add_flag("--pretty", pretty, "indent JSON output");
  analyze->add_option("--out", out_path, "write the report to a file");

  // model
  auto* model = app.add_subcommand("model", "algebraic curvature model utilities");
  model->require_subcommand(1);
  auto* validate = model->add_subcommand("validate", "check the curvature symmetries");
  std::string model_path;
  double mtol = 1e-8;
  bool mpretty = false;
  validate->add_option("file", model_path, "model JSON document")->required();
  validate->add_option("--tol", mtol, "violation threshold");
  validate->add_flag("--pretty", mpretty, "indent JSON output");
  auto* dbl = model->add_subcommand("double", "neutral-signature doubling of an Einstein model");
  std::string dbl_in, dbl_out;
  double dtol = 1e-9;
  bool dpretty = false;
  dbl->add_option("input", dbl_in, "input model JSON")->required();
  dbl->add_option("output", dbl_out, "output model JSON")->required();
  dbl->add_option("--tol", dtol, "residual threshold for the squared-Ricci check");
  dbl->add_flag("--pretty", dpretty, "indent JSON output");
  auto* rnd = model->add_subcommand("random", "seeded random model");
  std::uint64_t rseed = 1;
  int rn = 4;
  std::string rsig, rout;
  bool rpretty = false;
  rnd->add_option("--seed", rseed, "generator seed");
  rnd->add_option("--n", rn, "dimension (2..8)");
  rnd->add_option("--signature", rsig, "inner product signature 'neg,pos'");
  rnd->add_option("--out", rout, "write the model to a file");
  rnd->add_flag("--pretty", rpretty, "indent JSON output");

  // suite
  auto* suite = app.add_subcommand("suite", "run the verification battery");
  std::string filter;
  double stol = 1e-8;
  std::uint64_t sseed = 1;
  bool sjson = false, spretty = false;
  suite->add_option("--filter", filter, "run only rows whose key contains this string");
  suite->add_option("--tol", stol, "pass tolerance for property verdicts");
  suite->add_option("--seed", sseed, "sampling seed");
  suite->add_flag("--json", sjson, "emit the table as JSON");
  suite->add_flag("--pretty", spretty, "indent JSON output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (analyze->parsed()) {
      std::optional<bool> nabla;
      if (lazy_nabla) nabla = false;
      if (with_nabla) nabla = true;
      return cmd_analyze(config_path, ToleranceBand{tol, fail_floor}, seed, points_spec, nabla,
                         pretty, out_path, out);
    }
    if (validate->parsed()) return cmd_model_validate(model_path, mtol, mpretty, "", out);
    if (dbl->parsed()) return cmd_model_double(dbl_in, dbl_out, dtol, dpretty, out);
    if (rnd->parsed()) return cmd_model_random(rseed, rn, rsig, rout, rpretty, out);
    if (suite->parsed()) return cmd_suite(filter, stol, sseed, sjson, spretty, out);
  } catch (const NonEinsteinError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonEinstein;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  err << "error: no subcommand\n";
  return kExitConfig;
}

}  // namespace curvlab
