#pragma once

#include <stdexcept>
#include <string>

namespace mwmlab {

// Raised when an exhaustive search would exceed its configured state-space
// bound. Searches never truncate silently.
class GuardViolation : public std::runtime_error {
 public:
  explicit GuardViolation(const std::string& what) : std::runtime_error(what) {}
};

// Raised on mismatched dimensions or malformed arguments.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace mwmlab
