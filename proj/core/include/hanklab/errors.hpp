#pragma once

#include <stdexcept>
#include <string>

namespace hanklab {

// Invalid configuration or argument. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed its enumeration or term budget. Exit code 3.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigensolver, factorization or other numerical failure. Exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hanklab
