#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace ebseq {

// Invalid configuration or parameters (bad family parameters, q out of range,
// malformed config files, unknown keys, ...).  CLI maps this to exit code 2.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A quadrature or root-finding routine failed to reach its tolerance.
// CLI maps this to exit code 3; the simulation harness records the failure
// per replicate and keeps going.
struct numerical_error : std::runtime_error {
  double achieved_error;
  explicit numerical_error(const std::string& what,
                           double achieved = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), achieved_error(achieved) {}
};

// Malformed input data (non-numeric line in a data file, bad CSV).
// CLI maps this to exit code 2.
struct parse_error : std::runtime_error {
  long line_number;  // 1-based; -1 when not line-oriented
  explicit parse_error(const std::string& what, long line = -1)
      : std::runtime_error(what), line_number(line) {}
};

}  // namespace ebseq
