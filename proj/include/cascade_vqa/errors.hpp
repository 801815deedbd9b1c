#pragma once

#include <stdexcept>
#include <string>

namespace cvqa {

/// Invalid user-supplied configuration (sizes, faces, families, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed (non-SPD matrix, degenerate denominator, NaN cost).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cvqa
