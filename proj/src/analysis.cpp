#include "curvlab/analysis.hpp"

#include <cmath>

#include <json.hpp>

namespace curvlab {

namespace {

std::set<std::string> param_names(const Bindings& b) {
  std::set<std::string> names;
  for (const auto& [k, v] : b) names.insert(k);
  return names;
}

Bindings bindings_from(const nlohmann::json& j) {
  Bindings b;
  if (!j.contains("params")) return b;
  if (!j.at("params").is_object()) throw ConfigError("params must be an object");
  for (const auto& [k, v] : j.at("params").items()) {
    if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
    b[k] = v.get<double>();
  }
  return b;
}

ScalarExpr parse_field(const nlohmann::json& j, const char* field, int dim,
                       const std::set<std::string>& params) {
  if (!j.contains(field))
    throw ConfigError(std::string("missing required field '") + field + "'");
  if (!j.at(field).is_string())
    throw ConfigError(std::string("field '") + field + "' must be an expression string");
  try {
    return parse_expr(j.at(field).get<std::string>(), dim, params);
  } catch (const ParseError& err) {
    throw ConfigError(std::string("field '") + field + "': " + err.what());
  }
}

double number_field(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number())
    throw ConfigError(std::string("missing numeric field '") + field + "'");
  return j.at(field).get<double>();
}

std::vector<Point> points_from(const nlohmann::json& j, int dim) {
  std::vector<Point> pts;
  if (!j.contains("points")) return pts;
  if (!j.at("points").is_array()) throw ConfigError("points must be an array of points");
  for (const auto& row : j.at("points")) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ConfigError("each point must have the chart dimension " + std::to_string(dim));
    Point p;
    for (const auto& v : row) p.push_back(v.get<double>());
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

FamilyConfig family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw ConfigError("configuration must be an object with a 'family' string");
  FamilyConfig cfg;
  cfg.family = j.at("family").get<std::string>();
  const Bindings params = bindings_from(j);
  const std::set<std::string> names = param_names(params);

  if (cfg.family == "def11") {
    const int k = static_cast<int>(number_field(j, "k"));
    const int l = static_cast<int>(number_field(j, "l"));
    if (k < 1 || l < 1 || 2 * k + l > 8) throw ConfigError("def11 requires k,l >= 1 and 2k+l <= 8");
    const int m = 2 * k + l;
    if (!j.contains("C") || !j.at("C").is_array() || static_cast<int>(j.at("C").size()) != l)
      throw ConfigError("def11 requires an l x l array C");
    SquareMatrix c(l);
    for (int a = 0; a < l; ++a) {
      if (static_cast<int>(j.at("C")[a].size()) != l) throw ConfigError("C must be l x l");
      for (int b = 0; b < l; ++b) c(a, b) = j.at("C")[a][b].get<double>();
    }
    if (!j.contains("psi") || !j.at("psi").is_array() ||
        static_cast<int>(j.at("psi").size()) != k)
      throw ConfigError("def11 requires a k x k array psi of expression strings");
    std::vector<ScalarExpr> psi;
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(j.at("psi")[i].size()) != k) throw ConfigError("psi must be k x k");
      for (int jj = i; jj < k; ++jj) {
        try {
          psi.push_back(parse_expr(j.at("psi")[i][jj].get<std::string>(), m, names));
        } catch (const ParseError& err) {
          throw ConfigError(std::string("psi entry: ") + err.what());
        }
      }
    }
    cfg.chart = build_def11(k, l, c, psi);
    cfg.chart.params = params;
    cfg.k = k;
    cfg.l = l;
    cfg.c_inner = c;
    cfg.psi = psi;
  } else if (cfg.family == "thm13") {
    const ScalarExpr phi = parse_field(j, "phi", 4, names);
    cfg.chart = build_thm13(phi, params);
    cfg.phi = phi;
  } else if (cfg.family == "walker") {
    cfg.chart = build_walker(parse_field(j, "g33", 4, names), parse_field(j, "g34", 4, names),
                             parse_field(j, "g44", 4, names), params);
  } else if (cfg.family == "thm14") {
    WalkerChart wc = build_thm14(parse_field(j, "P", 4, names), parse_field(j, "Q", 4, names),
                                 parse_field(j, "S", 4, names), params);
    cfg.chart = wc.chart;
    cfg.classification = wc.classification;
  } else if (cfg.family == "thm14case2") {
    const double a = number_field(j, "a");
    const double b = number_field(j, "b");
    const double c = number_field(j, "c");
    const ScalarExpr s = j.contains("S") ? parse_field(j, "S", 4, names)
                                         : ScalarExpr::constant(0.0);
    WalkerChart wc = make_thm14_case2(a, b, c, s);
    wc.chart.params = params;
    cfg.chart = wc.chart;
    cfg.classification = wc.classification;
  } else if (cfg.family == "thm19") {
    const double s = number_field(j, "s");
    cfg.chart = build_thm19(s);
    cfg.s = s;
  } else {
    throw ConfigError("unknown family '" + cfg.family + "'");
  }
  cfg.user_points = points_from(j, cfg.chart.dim());
  return cfg;
}

namespace {

nlohmann::json residuals_to_json(const CurvatureResiduals& r) {
  nlohmann::json j;
  j["antisym_first_pair"] = r.antisym_first_pair;
  j["antisym_last_pair"] = r.antisym_last_pair;
  j["pair_symmetry"] = r.pair_symmetry;
  j["bianchi_first"] = r.bianchi_first;
  if (r.bianchi_second >= 0.0) j["bianchi_second"] = r.bianchi_second;
  j["metric_compat"] = r.metric_compat;
  j["ricci_symmetry"] = r.ricci_symmetry;
  j["ricci_self_adjoint"] = r.ricci_self_adjoint;
  j["ricci_raise"] = r.ricci_raise;
  j["trace_link"] = r.trace_link;
  j["scale"] = r.r_scale;
  return j;
}

nlohmann::json spectrum_to_json(const SpectralProfile& p) {
  nlohmann::json j;
  nlohmann::json ev = nlohmann::json::array();
  for (const Eigenvalue& e : p.eigenvalues)
    ev.push_back({{"re", e.re}, {"im", e.im}, {"multiplicity", e.multiplicity}});
  j["eigenvalues"] = ev;
  j["power_ranks"] = p.power_ranks;
  j["nilpotency_index"] = p.nilpotency_index;
  return j;
}

nlohmann::json classification_to_json(const WalkerClassification& c) {
  nlohmann::json j;
  j["condition1"] = c.condition1;
  j["condition1_residual"] = c.condition1_residual;
  j["condition2_by_construction"] = c.condition2_by_construction;
  return j;
}

}  // namespace

AnalyzeResult analyze_family(const FamilyConfig& cfg, const AnalyzeOptions& opt) {
  const bool nabla_default = cfg.family == "thm19" || cfg.family == "def11";
  const bool with_nabla = opt.nabla_r_override.value_or(nabla_default);

  std::vector<Point> pts;
  if (opt.points_override) {
    pts = *opt.points_override;
  } else {
    pts = cfg.user_points;
    if (pts.empty()) pts = sample_points(cfg.chart, opt.sample_count, opt.seed);
  }

  AnalyzeResult out;
  nlohmann::json& rep = out.report;
  rep["schema"] = "curvlab/analyze-v1";
  rep["family"] = cfg.family;
  rep["tolerances"] = {{"tol", opt.band.tol}, {"fail_floor", opt.band.fail_floor}};
  rep["seed"] = opt.seed;
  if (cfg.classification) rep["classification"] = classification_to_json(*cfg.classification);
  rep["points"] = pts;

  int indeterminate = 0;
  double worst_residual = 0.0;
  nlohmann::json results = nlohmann::json::array();
  for (const Point& p : pts) {
    const CurvatureData cd = curvature_at(cfg.chart, p, with_nabla);
    const Model model = model_at(cd);
    const SpectralProfile prof = spectral_profile(cd.ricci_op, opt.band.tol);
    const PropertyReport props = full_property_report(model, prof, opt.band);
    const CurvatureResiduals res = curvature_residuals(cd);

    nlohmann::json entry;
    entry["point"] = p;
    entry["curvature_residuals"] = residuals_to_json(res);
    entry["properties"] = property_report_to_json(props);
    entry["ricci_spectrum"] = spectrum_to_json(prof);
    worst_residual = std::max(worst_residual, res.worst());
    if (props.any_indeterminate()) ++indeterminate;

    nlohmann::json extras;
    if (cfg.family == "thm19") {
      const double s = *cfg.s;
      const SquareMatrix sq = cd.ricci_op * cd.ricci_op;
      extras["rho_squared_plus_s2_residual"] =
          (sq - (-s * s) * SquareMatrix::identity(4)).max_abs() / (1.0 + s * s);
      extras["nabla_r_max"] = cd.has_nabla_r() ? cd.max_abs_nabla_r() : -1.0;
    } else if (cfg.family == "thm13") {
      const NormalizedBasis nb = normalized_basis_thm13(*cfg.phi, cfg.chart.params, p);
      extras["alpha"] = nb.alpha;
      extras["alpha_closed_form"] = alpha_invariant(*cfg.phi, cfg.chart.params, p[1]);
      extras["normalized_basis_residual"] = nb.worst_relation_residual;
      // raw gap of the jacobi-videv witness composition applied to dy
      const SquareMatrix jac01 = model.jacobi_polarized(0, 1);
      const SquareMatrix rho = model.ricci_op();
      const SquareMatrix comm = rho * jac01 - jac01 * rho;
      double gap = 0.0;
      for (int r = 0; r < 4; ++r) gap = std::max(gap, std::abs(comm(r, 1)));
      extras["jacobi_videv_witness_gap"] = gap;
    } else if (cfg.family == "def11" && cfg.c_inner) {
      const SquareMatrix cinv = invert(*cfg.c_inner);
      double harmonicity = 0.0;
      int idx = 0;
      for (int i = 0; i < cfg.k; ++i)
        for (int jj = i; jj < cfg.k; ++jj, ++idx) {
          const Jet3 jet = eval_jet(cfg.psi[idx], p, cfg.chart.params);
          double h = 0.0;
          for (int a = 0; a < cfg.l; ++a)
            for (int b = 0; b < cfg.l; ++b) h += cinv(a, b) * jet.d2(cfg.k + a, cfg.k + b);
          harmonicity = std::max(harmonicity, std::abs(h));
        }
      extras["harmonicity_residual"] = harmonicity;
      extras["rho_squared_max"] = (cd.ricci_op * cd.ricci_op).max_abs();
    }
    if (!extras.is_null()) entry["extras"] = extras;
    results.push_back(entry);
  }
  rep["results"] = results;
  rep["summary"] = {{"points", pts.size()},
                    {"indeterminate_count", indeterminate},
                    {"worst_curvature_residual", worst_residual}};
  out.any_indeterminate = indeterminate > 0;
  return out;
}

}  // namespace curvlab
