#pragma once

#include <stdexcept>
#include <string>

namespace hypergroup {

enum class ErrorKind {
  ParameterOutOfRange,
  HypergroupViolation,
  IndexOutOfRange,
  QuadratureUnderresolved,
  NoDensity,
  MeasureDegenerate,
  NonAtomicUnsupported,
  InconsistentMatrix,
  InvalidArgument,
};

/// Stable lowercase name of an error kind, printed verbatim by the CLI.
const char* error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a moment chain degenerates; carries how many levels completed.
class DegenerateError : public Error {
 public:
  DegenerateError(std::size_t completed_depth, const std::string& detail)
      : Error(ErrorKind::MeasureDegenerate, detail), completed_depth_(completed_depth) {}

  std::size_t completed_depth() const { return completed_depth_; }

 private:
  std::size_t completed_depth_;
};

}  // namespace hypergroup
