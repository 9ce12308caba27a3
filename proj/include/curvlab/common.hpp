#ifndef CURVLAB_COMMON_HPP
#define CURVLAB_COMMON_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvlab {

/// Coordinates of an evaluation point.
using Point = std::vector<double>;

/// Parameter name -> value map (ordered, so serialization is stable).
using Bindings = std::map<std::string, double>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Expression text could not be parsed; `offset` is the byte position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Runtime evaluation failure: division by zero, unbound parameter.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Matrix is singular within tolerance (degenerate metric or inner product).
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Point violates a chart's domain predicate.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid model input (symmetry violations, bad inner product, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Doubling requires an Einstein input; reported separately from ModelError.
class NonEinsteinError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Bad CLI or file configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvlab

#endif  // CURVLAB_COMMON_HPP
