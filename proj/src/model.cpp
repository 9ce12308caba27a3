#include "curvlab/model.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

namespace curvlab {

Model Model::create(int n, const SquareMatrix& metric, std::vector<double> a) {
  if (n < 1) throw ModelError("model dimension must be positive");
  if (metric.dim() != n) throw ModelError("inner product dimension mismatch");
  if (!metric.is_symmetric(1e-12 * (metric.max_abs() + 1.0)))
    throw ModelError("inner product must be symmetric");
  const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
  if (a.size() != n4) throw ModelError("curvature tensor must have n^4 entries");
  for (double v : a)
    if (!std::isfinite(v)) throw ModelError("curvature tensor entries must be finite");
  Model m;
  m.n_ = n;
  m.metric_ = metric;
  try {
    m.metric_inv_ = invert(metric, 1e-10);
  } catch (const SingularMatrixError&) {
    throw ModelError("inner product is degenerate");
  }
  m.a_ = std::move(a);
  return m;
}

double Model::a_scale() const {
  double s = 0.0;
  for (double v : a_) s = std::max(s, std::abs(v));
  return s + 1.0;
}

SquareMatrix Model::curvature_op(int i, int j) const {
  SquareMatrix out(n_);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l) {
      double s = 0.0;
      for (int q = 0; q < n_; ++q) s += a(i, j, k, q) * metric_inv_(q, l);
      out(l, k) = s;
    }
  return out;
}

SquareMatrix Model::jacobi_polarized(int i, int j) const {
  SquareMatrix out(n_);
  for (int k = 0; k < n_; ++k)
    for (int l = 0; l < n_; ++l) {
      double s = 0.0;
      for (int q = 0; q < n_; ++q)
        s += 0.5 * (a(k, i, j, q) + a(k, j, i, q)) * metric_inv_(q, l);
      out(l, k) = s;
    }
  return out;
}

SquareMatrix Model::jacobi(const std::vector<double>& x) const {
  SquareMatrix out(n_);
  for (int k = 0; k < n_; ++k)
    for (int q = 0; q < n_; ++q) {
      double s = 0.0;
      for (int u = 0; u < n_; ++u) {
        if (x[u] == 0.0) continue;
        for (int v = 0; v < n_; ++v) s += x[u] * x[v] * a(k, u, v, q);
      }
      for (int l = 0; l < n_; ++l) out(l, k) += s * metric_inv_(q, l);
    }
  return out;
}

SquareMatrix Model::ricci_form() const {
  SquareMatrix out(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out(i, j) = jacobi_polarized(i, j).trace();
  return out;
}

SquareMatrix Model::ricci_op() const { return metric_inv_ * ricci_form(); }

std::pair<int, int> Model::signature() const { return symmetric_signature(metric_); }

double ModelSymmetryReport::worst() const {
  return std::max({antisym_first_pair, antisym_last_pair, pair_symmetry, bianchi_first});
}

std::vector<std::string> ModelSymmetryReport::violations(double tol) const {
  std::vector<std::string> out;
  if (antisym_first_pair > tol) out.push_back("antisymmetry_first_pair");
  if (antisym_last_pair > tol) out.push_back("antisymmetry_last_pair");
  if (pair_symmetry > tol) out.push_back("pair_symmetry");
  if (bianchi_first > tol) out.push_back("first_bianchi");
  return out;
}

ModelSymmetryReport validate_model(const Model& m) {
  const int n = m.dim();
  ModelSymmetryReport rep;
  rep.scale = m.a_scale();
  double worst = -1.0;
  const auto consider = [&](double raw, double& slot, int i, int j, int k, int l) {
    slot = std::max(slot, raw);
    if (raw > worst) {
      worst = raw;
      rep.worst_index = {i, j, k, l};
    }
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = m.a(i, j, k, l);
          consider(std::abs(v + m.a(j, i, k, l)), rep.antisym_first_pair, i, j, k, l);
          consider(std::abs(v + m.a(i, j, l, k)), rep.antisym_last_pair, i, j, k, l);
          consider(std::abs(v - m.a(k, l, i, j)), rep.pair_symmetry, i, j, k, l);
          consider(std::abs(v + m.a(j, k, i, l) + m.a(k, i, j, l)), rep.bianchi_first, i, j, k, l);
        }
  rep.antisym_first_pair /= rep.scale;
  rep.antisym_last_pair /= rep.scale;
  rep.pair_symmetry /= rep.scale;
  rep.bianchi_first /= rep.scale;
  return rep;
}

Model model_at(const CurvatureData& cd) {
  const int n = cd.dim;
  std::vector<double> a(static_cast<std::size_t>(n) * n * n * n);
  std::size_t t = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) a[t++] = cd.r_lower(i, j, k, l);
  return Model::create(n, cd.g, std::move(a));
}

Model model_at(const MetricChart& chart, const Point& p) {
  return model_at(curvature_at(chart, p, false));
}

Model canonical_model(const SquareMatrix& phi, double c) {
  const int n = phi.dim();
  if (!phi.is_symmetric(1e-12 * (phi.max_abs() + 1.0)))
    throw ModelError("canonical model coefficient matrix must be symmetric");
  std::vector<double> a(static_cast<std::size_t>(n) * n * n * n);
  std::size_t t = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          a[t++] = c * (phi(i, l) * phi(j, k) - phi(i, k) * phi(j, l));
  return Model::create(n, SquareMatrix::identity(n), std::move(a));
}

Model random_model(std::uint64_t seed, int n, int negatives) {
  if (n < 2 || n > 8) throw ModelError("random models support 2 <= n <= 8");
  if (negatives < 0 || negatives > n) throw ModelError("invalid signature");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_int_distribution<int> nterm(1, 3);
  const int terms = nterm(rng);
  std::vector<double> a(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int t = 0; t < terms; ++t) {
    SquareMatrix phi(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = entry(rng);
        phi(i, j) = v;
        phi(j, i) = v;
      }
    const Model part = canonical_model(phi, 1.0);
    for (std::size_t q = 0; q < a.size(); ++q) a[q] += part.tensor()[q];
  }
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < negatives; ++i) diag[i] = -1.0;
  return Model::create(n, SquareMatrix::diagonal(diag), std::move(a));
}

double einstein_constant(const Model& m) {
  const SquareMatrix rho = m.ricci_op();
  const double s = rho.trace() / m.dim();
  const double dev = (rho - s * SquareMatrix::identity(m.dim())).max_abs();
  if (dev > 1e-8 * (std::abs(s) + 1.0))
    throw NonEinsteinError("Ricci operator is not a multiple of the identity (deviation " +
                           std::to_string(dev) + ")");
  return s;
}

Model double_model(const Model& m0) {
  const int n = m0.dim();
  if ((m0.metric() - SquareMatrix::identity(n)).max_abs() != 0.0)
    throw ModelError("doubling requires the inner product to be exactly the identity");
  const ModelSymmetryReport rep = validate_model(m0);
  if (!rep.violations(1e-10).empty())
    throw ModelError("doubling input fails the curvature symmetries");
  einstein_constant(m0);  // throws NonEinsteinError when not Einstein

  const int nn = 2 * n;
  std::vector<double> a(static_cast<std::size_t>(nn) * nn * nn * nn, 0.0);
  // Im(i^minus_count) for minus_count = 0..4
  static const double eta[5] = {0.0, 1.0, 0.0, -1.0, 0.0};
  std::size_t t = 0;
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      for (int k = 0; k < nn; ++k)
        for (int l = 0; l < nn; ++l) {
          const int minus = (i >= n) + (j >= n) + (k >= n) + (l >= n);
          a[t++] = eta[minus] * m0.a(i % n, j % n, k % n, l % n);
        }
  std::vector<double> diag(nn, 1.0);
  for (int i = n; i < nn; ++i) diag[i] = -1.0;
  return Model::create(nn, SquareMatrix::diagonal(diag), std::move(a));
}

nlohmann::json model_to_json(const Model& m) {
  nlohmann::json j;
  j["n"] = m.dim();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < m.dim(); ++k) row.push_back(m.metric()(i, k));
    rows.push_back(row);
  }
  j["metric"] = rows;
  j["A"] = m.tensor();
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("metric") || !j.contains("A"))
    throw ConfigError("model document must contain n, metric and A");
  const int n = j.at("n").get<int>();
  if (n < 1 || n > 16) throw ConfigError("model dimension out of range");
  const auto& rows = j.at("metric");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ConfigError("metric must be an n x n array");
  SquareMatrix g(n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw ConfigError("metric must be an n x n array");
    for (int k = 0; k < n; ++k) g(i, k) = rows[i][k].get<double>();
  }
  std::vector<double> a = j.at("A").get<std::vector<double>>();
  if (a.size() != static_cast<std::size_t>(n) * n * n * n)
    throw ConfigError("A must have n^4 entries in row-major (i,j,k,l) order");
  try {
    return Model::create(n, g, std::move(a));
  } catch (const ModelError& err) {
    throw ConfigError(std::string("invalid model document: ") + err.what());
  }
}

}  // namespace curvlab
