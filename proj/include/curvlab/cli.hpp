#ifndef CURVLAB_CLI_HPP
#define CURVLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace curvlab {

/// Command-line entry point.  Exit codes:
///   0 success, 1 suite failure, 2 configuration or parse error,
///   3 evaluation error, 4 indeterminate verdict, 5 doubling input not
///   Einstein.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvlab

#endif  // CURVLAB_CLI_HPP
