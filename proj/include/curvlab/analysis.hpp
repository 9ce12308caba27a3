#ifndef CURVLAB_ANALYSIS_HPP
#define CURVLAB_ANALYSIS_HPP

#include <cstdint>
#include <optional>

#include "curvlab/families.hpp"
#include "curvlab/videv.hpp"

#include <json.hpp>

namespace curvlab {

/// A chart built from a family configuration document, together with the
/// family-specific data the analyzer reports on.
struct FamilyConfig {
  std::string family;
  MetricChart chart;
  std::optional<WalkerClassification> classification;
  std::optional<double> s;        // quadratic walker family
  std::optional<ScalarExpr> phi;  // exponential-coupling family
  // plane-wave family extras (harmonicity residual)
  int k = 0, l = 0;
  std::optional<SquareMatrix> c_inner;
  std::vector<ScalarExpr> psi;
  std::vector<Point> user_points;
};

/// Parses a family configuration document:
///   {"family": "def11"|"thm13"|"walker"|"thm14"|"thm14case2"|"thm19",
///    ...family fields..., "params": {name: value}, "points": [[...]]}.
/// Expression strings use the chart coordinates x0..x{m-1}.
FamilyConfig family_from_json(const nlohmann::json& j);

struct AnalyzeOptions {
  ToleranceBand band;
  std::uint64_t seed = 0;
  int sample_count = 10;
  std::optional<std::vector<Point>> points_override;
  std::optional<bool> nabla_r_override;
};

struct AnalyzeResult {
  nlohmann::json report;
  bool any_indeterminate = false;
};

/// Per-point curvature residuals, the six property checks, the Ricci
/// spectrum, and family-specific extras, as a deterministic JSON document.
AnalyzeResult analyze_family(const FamilyConfig& cfg, const AnalyzeOptions& opt);

}  // namespace curvlab

#endif  // CURVLAB_ANALYSIS_HPP
