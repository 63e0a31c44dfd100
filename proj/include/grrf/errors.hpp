#pragma once

#include <stdexcept>
#include <string>

namespace grrf {

// Malformed or unreadable input data (CSV files, JSON documents).
class CsvError : public std::runtime_error {
 public:
  explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

// A parameter outside its documented range (lambda, gamma, fractions, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace grrf
