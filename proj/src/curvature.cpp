#include "curvlab/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

double CurvatureData::max_abs_r() const {
  double m = 0.0;
  for (double v : rl_) m = std::max(m, std::abs(v));
  return m;
}

double CurvatureData::r_scale() const { return max_abs_r() + 1.0; }

double CurvatureData::max_abs_nabla_r() const {
  double m = 0.0;
  for (double v : nr_) m = std::max(m, std::abs(v));
  return m;
}

CurvatureData curvature_at(const MetricChart& chart, const Point& p, bool with_nabla_r) {
  const int m = chart.dim();
  if (static_cast<int>(p.size()) != m)
    throw Error("point dimension does not match the chart dimension");
  chart.require_admissible(p);

  CurvatureData cd;
  cd.dim = m;
  cd.point = p;

  // order-3 jets of every metric component
  std::vector<Jet3> jets;
  jets.reserve(static_cast<std::size_t>(m) * (m + 1) / 2);
  const auto jet_of = [&](int i, int j) -> const Jet3& {
    const int ii = std::min(i, j), jj = std::max(i, j);
    return jets[static_cast<std::size_t>(ii * m - ii * (ii - 1) / 2 + (jj - ii))];
  };
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) jets.push_back(eval_jet(chart.metric(i, j), p, chart.params));

  cd.g = SquareMatrix(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cd.g(i, j) = jet_of(i, j).value();
  cd.g_inv = invert(cd.g, 1e-10);

  const auto dgv = [&](int a, int i, int j) { return jet_of(i, j).d1(a); };
  const auto ddg = [&](int a, int b, int i, int j) { return jet_of(i, j).d2(a, b); };
  const auto dddg = [&](int a, int b, int c, int i, int j) { return jet_of(i, j).d3(a, b, c); };

  cd.dg_.assign(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) cd.dg_[(a * m + i) * m + j] = dgv(a, i, j);

  // Christoffel symbols of the first kind and their first derivatives
  cd.gf_.assign(static_cast<std::size_t>(m) * m * m, 0.0);
  std::vector<double> dgf(static_cast<std::size_t>(m) * m * m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        cd.gf_[(i * m + j) * m + k] =
            0.5 * (dgv(i, j, k) + dgv(j, i, k) - dgv(k, i, j));
        for (int a = 0; a < m; ++a)
          dgf[((a * m + i) * m + j) * m + k] =
              0.5 * (ddg(a, i, j, k) + ddg(a, j, i, k) - ddg(a, k, i, j));
      }

  cd.gs_.assign(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += cd.g_inv(k, l) * cd.gamma_first(i, j, l);
        cd.gs_[(i * m + j) * m + k] = s;
      }

  // R_ijkl = (dd_ik g_jl - dd_il g_jk - dd_jk g_il + dd_jl g_ik)/2
  //          + g^{mp} (Gamma_ikp Gamma_jlm - Gamma_jkp Gamma_ilm)
  cd.rl_.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = 0.5 * (ddg(i, k, j, l) - ddg(i, l, j, k) - ddg(j, k, i, l) +
                            ddg(j, l, i, k));
          for (int mm = 0; mm < m; ++mm)
            for (int pp = 0; pp < m; ++pp)
              v += cd.g_inv(mm, pp) * (cd.gamma_first(i, k, pp) * cd.gamma_first(j, l, mm) -
                                       cd.gamma_first(j, k, pp) * cd.gamma_first(i, l, mm));
          cd.rl_[((i * m + j) * m + k) * m + l] = v;
        }

  cd.ro_.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int q = 0; q < m; ++q) s += cd.r_lower(i, j, k, q) * cd.g_inv(q, l);
          cd.ro_[((i * m + j) * m + k) * m + l] = s;
        }

  cd.ricci_form = SquareMatrix(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int l = 0; l < m; ++l) s += 0.5 * (cd.r_op(l, i, j, l) + cd.r_op(l, j, i, l));
      cd.ricci_form(i, j) = s;
    }
  cd.ricci_op = cd.g_inv * cd.ricci_form;

  if (with_nabla_r) {
    // d_a g^{mp} = -g^{mq} (d_a g_qr) g^{rp}
    std::vector<double> dginv(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int a = 0; a < m; ++a) {
      SquareMatrix dga(m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) dga(i, j) = dgv(a, i, j);
      const SquareMatrix d = (-1.0) * (cd.g_inv * dga * cd.g_inv);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) dginv[(a * m + i) * m + j] = d(i, j);
    }
    const auto dgi = [&](int a, int i, int j) { return dginv[(a * m + i) * m + j]; };
    const auto gf1 = [&](int a, int i, int j, int k) {
      return dgf[((a * m + i) * m + j) * m + k];
    };

    cd.nr_.assign(static_cast<std::size_t>(m) * m * m * m * m, 0.0);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              // coordinate derivative of R_ijkl
              double v = 0.5 * (dddg(a, i, k, j, l) - dddg(a, i, l, j, k) -
                                dddg(a, j, k, i, l) + dddg(a, j, l, i, k));
              for (int mm = 0; mm < m; ++mm)
                for (int pp = 0; pp < m; ++pp) {
                  v += dgi(a, mm, pp) *
                       (cd.gamma_first(i, k, pp) * cd.gamma_first(j, l, mm) -
                        cd.gamma_first(j, k, pp) * cd.gamma_first(i, l, mm));
                  v += cd.g_inv(mm, pp) *
                       (gf1(a, i, k, pp) * cd.gamma_first(j, l, mm) +
                        cd.gamma_first(i, k, pp) * gf1(a, j, l, mm) -
                        gf1(a, j, k, pp) * cd.gamma_first(i, l, mm) -
                        cd.gamma_first(j, k, pp) * gf1(a, i, l, mm));
                }
              // connection corrections on each slot
              for (int q = 0; q < m; ++q)
                v -= cd.gamma_second(a, i, q) * cd.r_lower(q, j, k, l) +
                     cd.gamma_second(a, j, q) * cd.r_lower(i, q, k, l) +
                     cd.gamma_second(a, k, q) * cd.r_lower(i, j, q, l) +
                     cd.gamma_second(a, l, q) * cd.r_lower(i, j, k, q);
              cd.nr_[(((a * m + i) * m + j) * m + k) * m + l] = v;
            }
  }

  return cd;
}

SquareMatrix jacobi_op(const CurvatureData& cd, const std::vector<double>& x) {
  const int m = cd.dim;
  SquareMatrix out(m);
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a) {
      if (x[a] == 0.0) continue;
      for (int b = 0; b < m; ++b) {
        const double w = x[a] * x[b];
        if (w == 0.0) continue;
        for (int l = 0; l < m; ++l) out(l, k) += w * cd.r_op(k, a, b, l);
      }
    }
  return out;
}

SquareMatrix jacobi_polarized(const CurvatureData& cd, int i, int j) {
  const int m = cd.dim;
  SquareMatrix out(m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) out(l, k) = 0.5 * (cd.r_op(k, i, j, l) + cd.r_op(k, j, i, l));
  return out;
}

SquareMatrix jacobi_polarized(const CurvatureData& cd, const std::vector<double>& u,
                              const std::vector<double>& v) {
  const int m = cd.dim;
  SquareMatrix out(m);
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const double w = 0.5 * (u[a] * v[b] + u[b] * v[a]);
        if (w == 0.0) continue;
        for (int l = 0; l < m; ++l) out(l, k) += w * cd.r_op(k, a, b, l);
      }
  return out;
}

SquareMatrix curvature_operator(const CurvatureData& cd, int i, int j) {
  const int m = cd.dim;
  SquareMatrix out(m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) out(l, k) = cd.r_op(i, j, k, l);
  return out;
}

double CurvatureResiduals::worst() const {
  double w = std::max({antisym_first_pair, antisym_last_pair, pair_symmetry, bianchi_first,
                       metric_compat, ricci_symmetry, ricci_self_adjoint, ricci_raise,
                       trace_link});
  if (bianchi_second >= 0.0) w = std::max(w, bianchi_second);
  return w;
}

CurvatureResiduals curvature_residuals(const CurvatureData& cd) {
  const int m = cd.dim;
  CurvatureResiduals res;
  res.r_scale = cd.r_scale();
  const double inv_scale = 1.0 / res.r_scale;

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double r = cd.r_lower(i, j, k, l);
          res.antisym_first_pair =
              std::max(res.antisym_first_pair, std::abs(r + cd.r_lower(j, i, k, l)));
          res.antisym_last_pair =
              std::max(res.antisym_last_pair, std::abs(r + cd.r_lower(i, j, l, k)));
          res.pair_symmetry = std::max(res.pair_symmetry, std::abs(r - cd.r_lower(k, l, i, j)));
          res.bianchi_first = std::max(
              res.bianchi_first,
              std::abs(r + cd.r_lower(j, k, i, l) + cd.r_lower(k, i, j, l)));
        }
  res.antisym_first_pair *= inv_scale;
  res.antisym_last_pair *= inv_scale;
  res.pair_symmetry *= inv_scale;
  res.bianchi_first *= inv_scale;

  double gscale = 0.0;
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gscale = std::max(gscale, std::abs(cd.dg(a, i, j)));
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        res.metric_compat = std::max(
            res.metric_compat, std::abs(cd.dg(a, i, j) - cd.gamma_first(a, i, j) -
                                        cd.gamma_first(a, j, i)));
  res.metric_compat /= (gscale + 1.0);

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      res.ricci_symmetry =
          std::max(res.ricci_symmetry, std::abs(cd.ricci_form(i, j) - cd.ricci_form(j, i)));
  res.ricci_symmetry *= inv_scale;

  const SquareMatrix grho = cd.g * cd.ricci_op;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      res.ricci_self_adjoint = std::max(res.ricci_self_adjoint, std::abs(grho(i, j) - grho(j, i)));
      res.ricci_raise = std::max(res.ricci_raise, std::abs(grho(i, j) - cd.ricci_form(i, j)));
    }
  res.ricci_self_adjoint *= inv_scale;
  res.ricci_raise *= inv_scale;

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double tr = jacobi_polarized(cd, i, j).trace();
      res.trace_link = std::max(res.trace_link, std::abs(tr - cd.ricci_form(i, j)));
    }
  res.trace_link *= inv_scale;

  if (cd.has_nabla_r()) {
    res.nabla_scale = cd.max_abs_nabla_r() + 1.0;
    res.bianchi_second = 0.0;
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l)
              res.bianchi_second =
                  std::max(res.bianchi_second,
                           std::abs(cd.nabla_r(a, i, j, k, l) + cd.nabla_r(i, j, a, k, l) +
                                    cd.nabla_r(j, a, i, k, l)));
    res.bianchi_second /= res.nabla_scale;
  }

  return res;
}

}  // namespace curvlab
