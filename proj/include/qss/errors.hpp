#pragma once

#include <stdexcept>
#include <string>

namespace qss {

/// A numeric input outside the domain where a quantity is defined
/// (strength outside [0,1], singular point, outside the r_opt region).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Throws DomainError unless lo <= value <= hi.
void require_in_range(const char* name, double value, double lo = 0.0, double hi = 1.0);

}  // namespace qss

namespace qss {

/// A configuration that parses but violates a documented constraint.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qss
