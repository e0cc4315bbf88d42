#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deltaspec {

enum class ErrorCode {
  SyntaxError,
  TypeError,
  DuplicateName,
  NameMismatch,
  UnknownPoint,
  GenerationFailure,
  DomainTooLarge,
  MatrixMismatch,
  NoSharedTests,
  CandidateMismatch,
  UndefinedScore,
  EmptyPool,
  MissingTruth,
  InputError,
  InvariantViolation,
};

std::string_view error_code_name(ErrorCode code);

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string severity = "error";
  std::string message;
};

/// `file:line:col: severity: message`
std::string format_diagnostic(std::string_view file, const Diagnostic& d);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<Diagnostic> diagnostics = {})
      : std::runtime_error(message), code_(code), diagnostics_(std::move(diagnostics)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  ErrorCode code_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace deltaspec
