#pragma once

#include <stdexcept>
#include <string>

namespace bellsim {

// Both sites recorded no usable coincidences, so a correlation coefficient is
// undefined. Callers must not substitute zero.
class NoCoincidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateDenominatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bellsim
