#pragma once

#include <stdexcept>
#include <string>

namespace knrspec {

/// A named physical or structural constraint was violated.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string constraint, const std::string& detail)
      : std::invalid_argument(constraint + ": " + detail), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// Time integration left the admissible set of density matrices.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(double time, const std::string& what)
      : std::runtime_error(what + " at t = " + std::to_string(time) + " us"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace knrspec
