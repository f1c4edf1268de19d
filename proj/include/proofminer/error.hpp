#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proofminer {

// Root of every error thrown by the library. Callers that only need to
// report a failure can catch this; the subclasses exist so the CLI can map
// them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed library text. line/column are 1-based; 0 means "unknown" (the
// error was structural and is located by the JSON path in the message).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"
                   : what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateName : public ParseError {
 public:
  using ParseError::ParseError;
};

class ForwardReference : public ParseError {
 public:
  using ParseError::ParseError;
};

class TypeResolutionError : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public TypeResolutionError {
 public:
  using TypeResolutionError::TypeResolutionError;
};

class UnknownName : public TypeResolutionError {
 public:
  using TypeResolutionError::TypeResolutionError;
};

class ValuationMiss : public Error {
 public:
  using Error::Error;
};

class UnknownComponent : public Error {
 public:
  using Error::Error;
};

class ProximityRange : public Error {
 public:
  using Error::Error;
};

class GranularityRange : public Error {
 public:
  using Error::Error;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyModel : public Error {
 public:
  using Error::Error;
};

class TargetNotClustered : public Error {
 public:
  using Error::Error;
};

class UnknownLemma : public Error {
 public:
  using Error::Error;
};

// The checker itself broke (exit status >= 2, killed, or could not be
// spawned). A rejected proof is not an error.
class CheckerFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace proofminer
