#pragma once

#include <stdexcept>
#include <string>

namespace mgen {

/// Raised when an operation is called outside its domain. The message
/// names the violated precondition.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed set, table or certificate file.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mgen
