#ifndef EVAC_ERRORS_HPP_
#define EVAC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace evac {

// Bad or inconsistent input data (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A required column or file is missing or malformed.
class SchemaError : public DataError {
 public:
  explicit SchemaError(const std::string& msg) : DataError(msg) {}
};

// A record references an entity that does not exist.
class ReferentialError : public DataError {
 public:
  explicit ReferentialError(const std::string& msg) : DataError(msg) {}
};

// A field value is out of its allowed range.
class ValueError : public DataError {
 public:
  explicit ValueError(const std::string& msg) : DataError(msg) {}
};

// A caller violated an operation precondition.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite loss or similar numerical failure (CLI exit code 4).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad command-line usage (CLI exit code 2).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace evac

#endif  // EVAC_ERRORS_HPP_
