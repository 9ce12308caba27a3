#ifndef CURVLAB_SUITE_HPP
#define CURVLAB_SUITE_HPP

#include <cstdint>

#include "curvlab/common.hpp"

#include <json.hpp>

namespace curvlab {

struct SubCheck {
  std::string name;
  bool pass = false;
  std::string info;
};

struct CriterionResult {
  std::string key;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::vector<SubCheck> subchecks;

  std::string failing_subchecks() const;
};

struct SuiteOptions {
  std::string filter;       // substring match on the row key; empty runs all
  double tol = 1e-8;        // pass tolerance for property verdicts
  std::uint64_t seed = 1;   // offsets the deterministic point sampling
};

/// Runs the verification battery, one row per theorem-numbered family plus an
/// engine row, each with named sub-checks.  Deterministic for fixed options.
std::vector<CriterionResult> run_reproduction_suite(const SuiteOptions& opt = {});

nlohmann::json suite_to_json(const std::vector<CriterionResult>& rows);

}  // namespace curvlab

#endif  // CURVLAB_SUITE_HPP
