#pragma once

#include <stdexcept>
#include <string>

namespace profiler {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or document violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: unknown domain, invalid weights, malformed bank.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation requires input that is not there (e.g. aggregating zero responses).
class InsufficientInputError : public Error {
 public:
  using Error::Error;
};

/// Session is in the wrong state for the requested operation.
class StateError : public Error {
 public:
  using Error::Error;
};

/// A scorer backend could not produce a verdict.
class ScorerError : public Error {
 public:
  using Error::Error;
};

/// Inference endpoint unreachable or returned a non-success status.
class TransportError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

/// Inference endpoint kept replying with malformed or out-of-range content.
class UnscoreableResponseError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

/// Parse failure in an input document, with location.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line),
        message_(message) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string message_;
};

}  // namespace profiler
