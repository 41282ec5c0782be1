#pragma once

#include <stdexcept>
#include <string>

namespace wmwpower {

// Numerical routine failed to converge or produced an invalid result.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds what the implementation supports (e.g. exact-table size).
class capability_error : public std::runtime_error {
 public:
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// A cross-group tie was observed; the test is defined for continuous data.
class tie_error : public std::runtime_error {
 public:
  explicit tie_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wmwpower
