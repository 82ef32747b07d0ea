#pragma once

#include <stdexcept>
#include <string>

namespace hdsf {

// Precondition or shape violations: caller passed something the contract forbids.
struct ContractViolation : std::runtime_error {
  explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf detected where a finite value is required.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hdsf
