#include "curvlab/videv.hpp"

#include <cmath>

#include <json.hpp>

#include "curvlab/families.hpp"

namespace curvlab {

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

PropertyCheck finish(std::string name, double residual, std::vector<int> witness,
                     const ToleranceBand& band) {
  PropertyCheck c;
  c.property = std::move(name);
  c.residual = residual;
  c.witness = std::move(witness);
  c.tol = band.tol;
  c.fail_floor = band.fail_floor;
  c.verdict = band.classify(residual);
  return c;
}

// worst entry of [a, b] together with its position
std::pair<double, std::pair<int, int>> worst_commutator_entry(const SquareMatrix& a,
                                                              const SquareMatrix& b) {
  const SquareMatrix c = a * b - b * a;
  double worst = -1.0;
  std::pair<int, int> at{0, 0};
  for (int r = 0; r < c.dim(); ++r)
    for (int s = 0; s < c.dim(); ++s)
      if (std::abs(c(r, s)) > worst) {
        worst = std::abs(c(r, s));
        at = {r, s};
      }
  return {worst, at};
}

}  // namespace

nlohmann::json property_check_to_json(const PropertyCheck& c) {
  nlohmann::json j;
  j["verdict"] = c.verdict == Verdict::Pass;
  j["status"] = verdict_name(c.verdict);
  j["residual"] = c.residual;
  j["witness"] = c.witness;
  j["tol"] = c.tol;
  j["fail_floor"] = c.fail_floor;
  return j;
}

PropertyCheck check_einstein(const SquareMatrix& rho, const ToleranceBand& band) {
  const int n = rho.dim();
  const double c = rho.trace() / n;
  double worst = -1.0;
  std::vector<int> witness{0, 0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dev = std::abs(rho(i, j) - (i == j ? c : 0.0));
      if (dev > worst) {
        worst = dev;
        witness = {i, j};
      }
    }
  return finish("einstein", worst / (std::abs(c) + 1.0), witness, band);
}

PropertyCheck check_pseudo_einstein(const SpectralProfile& profile, const ToleranceBand& band) {
  const double scale = 1.0 + profile.max_abs_eigenvalue();

  // candidate 1: a single real eigenvalue
  double mean = 0.0;
  int count = 0;
  for (const Eigenvalue& e : profile.eigenvalues) {
    mean += e.re * e.multiplicity;
    count += e.multiplicity;
  }
  mean = count ? mean / count : 0.0;
  double res_real = 0.0;
  int worst_real = 0;
  for (std::size_t i = 0; i < profile.eigenvalues.size(); ++i) {
    const Eigenvalue& e = profile.eigenvalues[i];
    const double d = std::hypot(e.re - mean, e.im);
    if (d > res_real) {
      res_real = d;
      worst_real = static_cast<int>(i);
    }
  }

  // candidate 2: one conjugate pair a +- i b with b away from zero
  double a = mean, b = 0.0;
  for (const Eigenvalue& e : profile.eigenvalues) b += std::abs(e.im) * e.multiplicity;
  b = count ? b / count : 0.0;
  double res_pair = 0.0;
  int worst_pair = 0;
  for (std::size_t i = 0; i < profile.eigenvalues.size(); ++i) {
    const Eigenvalue& e = profile.eigenvalues[i];
    const double d = std::min(std::hypot(e.re - a, e.im - b), std::hypot(e.re - a, e.im + b));
    if (d > res_pair) {
      res_pair = d;
      worst_pair = static_cast<int>(i);
    }
  }
  const bool pair_valid = b > band.tol * scale;

  double residual = res_real / scale;
  int witness = worst_real;
  if (pair_valid && res_pair / scale < residual) {
    residual = res_pair / scale;
    witness = worst_pair;
  }
  return finish("pseudo_einstein", residual, {witness}, band);
}

namespace {

PropertyCheck commutes_with(const char* name, const Model& m, const SquareMatrix& t,
                            bool jacobi_side, const ToleranceBand& band) {
  const int n = m.dim();
  double worst = -1.0;
  std::vector<int> witness;
  for (int i = 0; i < n; ++i)
    for (int j = (jacobi_side ? i : i + 1); j < n; ++j) {
      const SquareMatrix op = jacobi_side ? m.jacobi_polarized(i, j) : m.curvature_op(i, j);
      const auto [dev, at] = worst_commutator_entry(op, t);
      if (dev > worst) {
        worst = dev;
        witness = {i, j, at.first, at.second};
      }
    }
  return finish(name, worst / m.a_scale(), witness, band);
}

}  // namespace

PropertyCheck check_jacobi_videv(const Model& m, const ToleranceBand& band) {
  return commutes_with("jacobi_videv", m, m.ricci_op(), true, band);
}

PropertyCheck check_skew_videv(const Model& m, const ToleranceBand& band) {
  return commutes_with("skew_videv", m, m.ricci_op(), false, band);
}

PropertyCheck check_jacobi_tsankov(const Model& m, const ToleranceBand& band) {
  const int n = m.dim();
  std::vector<SquareMatrix> js;
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      js.push_back(m.jacobi_polarized(i, j));
      idx.emplace_back(i, j);
    }
  double worst = -1.0;
  std::vector<int> witness;
  for (std::size_t p = 0; p < js.size(); ++p)
    for (std::size_t q = p + 1; q < js.size(); ++q) {
      const auto [dev, at] = worst_commutator_entry(js[p], js[q]);
      if (dev > worst) {
        worst = dev;
        witness = {idx[p].first, idx[p].second, idx[q].first, idx[q].second,
                   at.first, at.second};
      }
    }
  const double scale = m.a_scale();
  return finish("jacobi_tsankov", worst < 0 ? 0.0 : worst / (scale * scale), witness, band);
}

PropertyCheck check_mixed_tsankov(const Model& m, const ToleranceBand& band) {
  const int n = m.dim();
  double worst = -1.0;
  std::vector<int> witness;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const SquareMatrix jac = m.jacobi_polarized(i, j);
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const auto [dev, at] = worst_commutator_entry(jac, m.curvature_op(k, l));
          if (dev > worst) {
            worst = dev;
            witness = {i, j, k, l, at.first, at.second};
          }
        }
    }
  const double scale = m.a_scale();
  return finish("mixed_tsankov", worst < 0 ? 0.0 : worst / (scale * scale), witness, band);
}

double condition_a_residual(const Model& m, const SquareMatrix& t) {
  const int n = m.dim();
  const SquareMatrix gt = m.metric() * t;
  if ((gt - gt.transpose()).max_abs() > 1e-8 * (gt.max_abs() + 1.0))
    throw ModelError("condition check requires a self-adjoint map");

  // insert T into each slot in turn
  std::array<std::vector<double>, 4> ins;
  const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
  for (auto& v : ins) v.assign(n4, 0.0);
  std::size_t at = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l, ++at)
          for (int q = 0; q < n; ++q) {
            ins[0][at] += t(q, i) * m.a(q, j, k, l);
            ins[1][at] += t(q, j) * m.a(i, q, k, l);
            ins[2][at] += t(q, k) * m.a(i, j, q, l);
            ins[3][at] += t(q, l) * m.a(i, j, k, q);
          }
  double worst = 0.0;
  for (std::size_t u = 0; u < n4; ++u)
    worst = std::max({worst, std::abs(ins[0][u] - ins[1][u]), std::abs(ins[1][u] - ins[2][u]),
                      std::abs(ins[2][u] - ins[3][u])});
  return worst / m.a_scale();
}

CommutationConditions commutation_conditions(const Model& m, const SquareMatrix& t) {
  CommutationConditions c;
  c.slot_insertion = condition_a_residual(m, t);
  c.curvature_commute = commutes_with("c2", m, t, false, {}).residual;
  c.jacobi_commute = commutes_with("c3", m, t, true, {}).residual;
  return c;
}

bool PropertyReport::any_indeterminate() const {
  for (const PropertyCheck& c : checks)
    if (c.indeterminate()) return true;
  return false;
}

const PropertyCheck& PropertyReport::at(const std::string& property) const {
  for (const PropertyCheck& c : checks)
    if (c.property == property) return c;
  throw Error("no such property in report: " + property);
}

PropertyReport full_property_report(const Model& m, const SpectralProfile& rho_profile,
                                    const ToleranceBand& band) {
  PropertyReport r;
  r.checks.push_back(check_einstein(m.ricci_op(), band));
  r.checks.push_back(check_pseudo_einstein(rho_profile, band));
  r.checks.push_back(check_jacobi_videv(m, band));
  r.checks.push_back(check_skew_videv(m, band));
  r.checks.push_back(check_jacobi_tsankov(m, band));
  r.checks.push_back(check_mixed_tsankov(m, band));
  return r;
}

nlohmann::json property_report_to_json(const PropertyReport& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const PropertyCheck& c : r.checks) j[c.property] = property_check_to_json(c);
  return j;
}

NormalizedBasis normalized_basis_thm13(const ScalarExpr& phi, const Bindings& params,
                                       const Point& p) {
  const Jet3 jet = eval_jet(phi, p, params);
  const double ph = jet.value();
  const double ph1 = jet.d1(1);
  const double ph2 = jet.d2(1, 1);
  if (ph2 == 0.0) throw DomainError("normalized basis requires phi''(y) != 0");

  NormalizedBasis nb;
  nb.eps1 = 1.0 / ph2;
  nb.delta1 = 0.5 * ph1 * ph1 / ph2;

  const double e1 = nb.eps1, d1 = nb.delta1;
  nb.vectors[0] = {e1, 0.0, e1 * d1, -e1 * 0.5 * (d1 * d1 + 4.0 * ph * d1)};
  nb.vectors[1] = {0.0, 1.0, 0.0, 0.0};
  nb.vectors[2] = {0.0, 0.0, 1.0, -(d1 + 2.0 * ph)};
  nb.vectors[3] = {0.0, 0.0, 0.0, ph2};

  const MetricChart chart = build_thm13(phi, params);
  const CurvatureData cd = curvature_at(chart, p, false);
  const auto gv = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += cd.g(i, j) * u[i] * v[j];
    return s;
  };
  const auto rv = [&](const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& c, const std::vector<double>& d) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) s += cd.r_lower(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
    return s;
  };
  const auto& x = nb.vectors[0];
  const auto& y = nb.vectors[1];
  const auto& z = nb.vectors[2];
  const auto& xb = nb.vectors[3];

  nb.alpha = rv(x, z, z, x);

  double worst = 0.0;
  const auto rel = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  rel(gv(x, xb), 1.0);
  rel(gv(y, y), 1.0);
  rel(gv(z, z), 1.0);
  rel(rv(x, y, y, x), 0.0);
  rel(rv(y, z, z, y), 0.0);
  rel(rv(y, x, x, z), 0.0);
  rel(rv(x, y, y, z), -1.0);
  rel(rv(x, z, z, y), 0.0);
  nb.worst_relation_residual = worst;
  return nb;
}

double alpha_invariant(const ScalarExpr& phi, const Bindings& params, double y) {
  const Point p{0.0, y, 0.0, 0.0};
  const Jet3 jet = eval_jet(phi, p, params);
  const double ph1 = jet.d1(1);
  const double ph2 = jet.d2(1, 1);
  if (ph2 == 0.0) throw DomainError("alpha invariant requires phi''(y) != 0");
  return (ph1 * ph1) / (ph2 * ph2);
}

}  // namespace curvlab
