#pragma once

#include <stdexcept>
#include <string>

namespace verifact {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failures: unreadable inputs, unwritable run directories.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input records (bad JSON line, missing field, duplicate id,
/// dangling reference).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration detected before any work is dispatched.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A chat or search backend failed. Transport errors and HTTP 5xx are
/// retryable; everything else is not.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}

  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

/// A pipeline stage could not complete; the message names the failing unit
/// (window index, claim id, prerequisite file).
class StageError : public Error {
 public:
  using Error::Error;
};

/// Scoring preconditions violated (S > |C|, K = 0, missing labels).
class ScoringError : public Error {
 public:
  using Error::Error;
};

}  // namespace verifact
