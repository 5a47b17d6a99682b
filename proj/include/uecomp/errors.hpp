#pragma once

#include <stdexcept>
#include <string>

namespace uecomp {

// Bad construction parameters (zero rank, empty orders, malformed specs).
struct InvalidSpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An operation was asked of a model that cannot support it (e.g. boundary
// rays on a non-free group).
struct UnsupportedModelError : std::logic_error {
  using std::logic_error::logic_error;
};

// Enumeration hit its memory/element budget.
struct ResourceError : std::runtime_error {
  ResourceError(const std::string& what, double radius_reached)
      : std::runtime_error(what), radius_reached(radius_reached) {}
  double radius_reached;
};

// A Gram matrix turned out indefinite beyond tolerance, or similar.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace uecomp
