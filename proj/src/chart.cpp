#include "curvlab/chart.hpp"

#include <cmath>

namespace curvlab {

MetricChart::MetricChart(int dim) : dim_(dim), g_(static_cast<std::size_t>(dim) * (dim + 1) / 2) {
  for (auto& e : g_) e = ScalarExpr::constant(0.0);
  sample_box.assign(dim, {-1.0, 1.0});
  for (int i = 0; i < dim; ++i) coord_names.push_back("x" + std::to_string(i));
}

int MetricChart::pack(int i, int j) const {
  if (i > j) std::swap(i, j);
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

const ScalarExpr& MetricChart::metric(int i, int j) const { return g_[pack(i, j)]; }

void MetricChart::set_metric(int i, int j, const ScalarExpr& e) { g_[pack(i, j)] = e; }

SquareMatrix MetricChart::metric_at(const Point& p) const {
  SquareMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      const double v = eval_value(metric(i, j), p, params);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

bool MetricChart::admissible(const Point& p, double margin) const {
  for (const ScalarExpr& pred : domain_predicates) {
    double v;
    try {
      v = eval_value(pred, p, params);
    } catch (const EvalError&) {
      return false;
    }
    if (std::abs(v) <= margin) return false;
  }
  return true;
}

void MetricChart::require_admissible(const Point& p) const {
  for (const ScalarExpr& pred : domain_predicates) {
    const double v = eval_value(pred, p, params);
    if (std::abs(v) <= 1e-12)
      throw DomainError("point violates the chart domain predicate " + pred.to_string());
  }
}

namespace {

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

std::vector<Point> sample_points(const MetricChart& chart, int count, std::uint64_t seed,
                                 double margin) {
  const int m = chart.dim();
  if (m > 8) throw Error("sampling supports at most 8 coordinates");
  std::vector<Point> pts;
  std::uint64_t index = 1 + seed * 7919;
  const std::uint64_t limit = index + 10000ull * static_cast<std::uint64_t>(count) + 10000ull;
  while (static_cast<int>(pts.size()) < count && index < limit) {
    Point p(m);
    for (int d = 0; d < m; ++d) {
      const double t = halton(index, kPrimes[d]);
      p[d] = chart.sample_box[d][0] + t * (chart.sample_box[d][1] - chart.sample_box[d][0]);
    }
    ++index;
    if (!chart.admissible(p, margin)) continue;
    try {
      invert(chart.metric_at(p), 1e-10);
    } catch (const Error&) {
      continue;
    }
    pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) < count)
    throw DomainError("could not sample enough admissible points for the chart");
  return pts;
}

}  // namespace curvlab
