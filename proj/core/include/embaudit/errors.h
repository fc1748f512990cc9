#pragma once

#include <stdexcept>
#include <string>

namespace embaudit {

// Unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file was readable but its content violates the expected layout.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

// Bad parameters or data that breaks a type invariant (duplicate tokens,
// zero vectors, an empty view, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LookupStatus { kFound, kFiltered, kUnknown };

const char* lookup_status_name(LookupStatus status);

// A query token that the engine cannot use. `status()` tells apart a token
// missing from the embedding set from one that exists but was filtered out
// by the active vocabulary view.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(std::string token, LookupStatus status);

  const std::string& token() const { return token_; }
  LookupStatus status() const { return status_; }

 private:
  std::string token_;
  LookupStatus status_;
};

}  // namespace embaudit
