// Acceptance runner: one pass/fail line per criterion row, nonzero exit when
// any row fails.  `--filter KEY` restricts to matching rows.

#include <cstring>
#include <iomanip>
#include <iostream>

#include "curvlab/suite.hpp"

int main(int argc, char** argv) {
  curvlab::SuiteOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--filter") == 0 && i + 1 < argc) {
      opt.filter = argv[++i];
    } else if (std::strcmp(argv[i], "--tol") == 0 && i + 1 < argc) {
      opt.tol = std::stod(argv[++i]);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opt.seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--filter KEY] [--tol T] [--seed N]\n";
      return 2;
    }
  }

  const auto rows = curvlab::run_reproduction_suite(opt);
  if (rows.empty()) {
    std::cerr << "no criteria match filter '" << opt.filter << "'\n";
    return 2;
  }

  int failures = 0;
  for (const auto& r : rows) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(8) << r.key
              << " " << r.title << " (" << std::fixed << std::setprecision(2) << r.seconds
              << " s)\n";
    std::cout.unsetf(std::ios::floatfield);
    for (const auto& sc : r.subchecks) {
      std::cout << "        " << (sc.pass ? "ok   " : "FAIL ") << sc.name;
      if (!sc.pass && !sc.info.empty()) std::cout << "  -- " << sc.info;
      std::cout << "\n";
    }
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
