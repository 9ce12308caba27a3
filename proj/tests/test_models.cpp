#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "curvlab/families.hpp"
#include "curvlab/model.hpp"

using namespace curvlab;

namespace {

// standard Ricci contraction, independent of Model's trace-of-jacobi route
SquareMatrix brute_force_ricci(const Model& m) {
  const int n = m.dim();
  SquareMatrix rho(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += m.metric_inv()(l, k) * m.a(k, i, j, l);
      rho(i, j) = s;
    }
  return m.metric_inv() * rho;
}

}  // namespace

TEST_CASE("validate: zero model and engine output pass; perturbations are caught") {
  const Model zero = Model::create(3, SquareMatrix::identity(3), std::vector<double>(81, 0.0));
  CHECK(validate_model(zero).worst() == 0.0);

  const MetricChart chart = build_thm19(2.0);
  const Model from_chart = model_at(chart, {0.3, -0.7, 0.2, 0.9});
  const ModelSymmetryReport rep = validate_model(from_chart);
  CHECK(rep.worst() <= 1e-10);
  CHECK(rep.violations(1e-10).empty());

  std::vector<double> bad = from_chart.tensor();
  bad[1 * 64 + 2 * 16 + 3 * 4 + 0] += 1.0;  // breaks the antisymmetries
  const Model broken = Model::create(4, from_chart.metric(), bad);
  const auto violations = validate_model(broken).violations(1e-8);
  CHECK(!violations.empty());
  bool antisym_reported = false;
  for (const auto& v : violations)
    if (v == "antisymmetry_first_pair") antisym_reported = true;
  CHECK(antisym_reported);
}

TEST_CASE("model_at agrees with the chart Ricci data") {
  const MetricChart chart = build_thm13(parse_expr("exp(2*x1)", 4, {}));
  const Point p{0.2, 0.4, -0.5, 0.3};
  const CurvatureData cd = curvature_at(chart, p, false);
  const Model m = model_at(cd);
  CHECK((m.ricci_op() - cd.ricci_op).max_abs() <= 1e-11 * m.a_scale());
  CHECK((m.ricci_form() - cd.ricci_form).max_abs() <= 1e-11 * m.a_scale());
  // the model jacobi matches the chart polarized jacobi
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      CHECK((m.jacobi_polarized(i, j) - jacobi_polarized(cd, i, j)).max_abs() <=
            1e-11 * m.a_scale());
}

TEST_CASE("canonical model: constant curvature") {
  const Model m = canonical_model(SquareMatrix::identity(2), 1.0);
  CHECK(m.a(0, 1, 1, 0) == 1.0);
  CHECK(m.a(0, 1, 0, 1) == -1.0);
  CHECK(validate_model(m).worst() == 0.0);
  // Ricci operator is (n-1) c id; cross-checked with the brute-force trace
  const SquareMatrix rho = m.ricci_op();
  CHECK((rho - SquareMatrix::identity(2)).max_abs() <= 1e-13);
  CHECK((brute_force_ricci(m) - rho).max_abs() <= 1e-13);
  CHECK(einstein_constant(m) == doctest::Approx(1.0));

  for (int n : {3, 4}) {
    for (double c : {2.0, -1.0}) {
      const Model mc = canonical_model(SquareMatrix::identity(n), c);
      CHECK(einstein_constant(mc) == doctest::Approx(c * (n - 1)));
      CHECK((brute_force_ricci(mc) - mc.ricci_op()).max_abs() <= 1e-12 * mc.a_scale());
    }
  }

  const Model z = canonical_model(SquareMatrix::identity(3), 0.0);
  CHECK(z.a_scale() == 1.0);

  // random symmetric coefficient matrices validate exactly
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    SquareMatrix phi(4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) phi(i, j) = phi(j, i) = entry(rng);
    CHECK(validate_model(canonical_model(phi, entry(rng))).worst() <= 1e-14);
  }
}

TEST_CASE("random models: reproducible, valid, generically not Einstein") {
  const Model a = random_model(12345, 5, 2);
  const Model b = random_model(12345, 5, 2);
  CHECK(a.tensor() == b.tensor());
  CHECK((a.metric() - b.metric()).max_abs() == 0.0);

  int non_einstein = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    const Model m = random_model(seed, n, static_cast<int>(seed % (n + 1)));
    CHECK(validate_model(m).worst() <= 1e-12);
    const SquareMatrix rho = m.ricci_op();
    const double s = rho.trace() / n;
    const double dev =
        (rho - s * SquareMatrix::identity(n)).max_abs() / (std::abs(s) + 1.0);
    if (dev > 1e-4) ++non_einstein;
  }
  CHECK(non_einstein >= 30);  // computed over the sweep, not assumed per seed
}

TEST_CASE("double_model: neutral signature and Ricci structure") {
  for (int n : {2, 3, 4}) {
    for (double c : {1.0, 2.0, -1.0}) {
      const Model m0 = canonical_model(SquareMatrix::identity(n), c);
      const double s = c * (n - 1);
      const Model m1 = double_model(m0);
      CHECK(m1.dim() == 2 * n);
      const auto sig = m1.signature();
      CHECK(sig.first == n);
      CHECK(sig.second == n);
      CHECK(validate_model(m1).worst() <= 1e-14);

      // mixed Ricci entries 2 s delta, pure entries 0
      const SquareMatrix rho_form = m1.ricci_form();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(rho_form(i, n + j) - (i == j ? 2 * s : 0.0)) <= 1e-10 * (1 + 2 * std::abs(s)));
          CHECK(std::abs(rho_form(i, j)) <= 1e-10);
          CHECK(std::abs(rho_form(n + i, n + j)) <= 1e-10);
        }

      // rho: ei+ -> -2s ei-, ei- -> 2s ei+
      const SquareMatrix rho = m1.ricci_op();
      for (int i = 0; i < n; ++i)
        for (int r = 0; r < 2 * n; ++r) {
          CHECK(std::abs(rho(r, i) - (r == n + i ? -2 * s : 0.0)) <= 1e-10 * (1 + 2 * std::abs(s)));
          CHECK(std::abs(rho(r, n + i) - (r == i ? 2 * s : 0.0)) <= 1e-10 * (1 + 2 * std::abs(s)));
        }

      // rho^2 = -4 s^2 id
      const SquareMatrix sq = rho * rho;
      CHECK((sq - (-4 * s * s) * SquareMatrix::identity(2 * n)).max_abs() <=
            1e-9 * (1 + 4 * s * s));

      // the eight listed component patterns (cross-check of the construction)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              const double a0 = m0.a(i, j, k, l);
              CHECK(m1.a(n + i, j, k, l) == a0);
              CHECK(m1.a(i, n + j, k, l) == a0);
              CHECK(m1.a(i, j, n + k, l) == a0);
              CHECK(m1.a(i, j, k, n + l) == a0);
              CHECK(m1.a(i, n + j, n + k, n + l) == -a0);
              CHECK(m1.a(n + i, j, n + k, n + l) == -a0);
              CHECK(m1.a(n + i, n + j, k, n + l) == -a0);
              CHECK(m1.a(n + i, n + j, n + k, l) == -a0);
              // an even number of minus factors vanishes
              CHECK(m1.a(n + i, n + j, k, l) == 0.0);
              CHECK(m1.a(n + i, j, n + k, l) == 0.0);
              CHECK(m1.a(n + i, n + j, n + k, n + l) == 0.0);
              CHECK(m1.a(i, j, k, l) == 0.0);
            }
    }
  }
}

TEST_CASE("double_model: input validation") {
  // zero model doubles to the zero model
  const Model z0 = canonical_model(SquareMatrix::identity(2), 0.0);
  const Model z1 = double_model(z0);
  CHECK(z1.a_scale() == 1.0);

  // non-Einstein input is refused with the dedicated error
  SquareMatrix phi(3);
  phi(0, 0) = 1.0;
  phi(1, 1) = 2.0;
  phi(2, 2) = -0.5;
  const Model skew = canonical_model(phi, 1.0);
  CHECK_THROWS_AS(double_model(skew), NonEinsteinError);

  // non-identity inner product is refused
  const Model scaled =
      Model::create(2, SquareMatrix::diagonal({2.0, 2.0}),
                    canonical_model(SquareMatrix::identity(2), 1.0).tensor());
  CHECK_THROWS_AS(double_model(scaled), ModelError);

  // symmetry-violating input is refused
  std::vector<double> bad(16, 0.0);
  bad[1] = 1.0;
  const Model broken = Model::create(2, SquareMatrix::identity(2), bad);
  CHECK_THROWS_AS(double_model(broken), ModelError);
}

TEST_CASE("model json round trip") {
  const Model m = random_model(777, 3, 1);
  const nlohmann::json j = model_to_json(m);
  const Model back = model_from_json(j);
  CHECK(back.dim() == m.dim());
  CHECK(back.tensor() == m.tensor());
  CHECK((back.metric() - m.metric()).max_abs() == 0.0);

  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"n", 2}}), ConfigError);
  nlohmann::json badshape = j;
  badshape["A"] = std::vector<double>(7, 0.0);
  CHECK_THROWS_AS(model_from_json(badshape), ConfigError);
}
