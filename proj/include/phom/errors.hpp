#pragma once

#include <stdexcept>
#include <string>

namespace phom {

/// Invalid geometric input (containment, self-intersection, overlap).
class geometry_error : public std::runtime_error {
 public:
  explicit geometry_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation requested outside the domain of definition.
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user-supplied parameters (CLI/config validation).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: divergent series, singular dense system, ...
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested combination is deliberately not supported.
class unsupported_error : public std::runtime_error {
 public:
  explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace phom
