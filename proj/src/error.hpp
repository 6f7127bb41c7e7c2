#pragma once

#include <stdexcept>
#include <string>

namespace evalpres {

// Structured error classes shared by every module.  The C API maps these
// one-to-one onto evp_status codes.
enum class ErrorCode {
  oracle_violation = 1,   // an oracle broke its precision contract
  budget_exhausted = 2,   // a semidecidable search hit its candidate budget
  bad_manifest = 3,       // malformed or incomplete presentation manifest
  missing_tbf = 4,        // operation requires a total boundedness function
  missing_variable = 5,   // polynomial evaluation with an unbound variable
  parse_error = 6,        // unreadable rational / polynomial / point text
  bad_argument = 7,
  io_error = 8,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

  static Error oracle_violation(const std::string& what) {
    return Error(ErrorCode::oracle_violation, what);
  }
  static Error budget_exhausted(const std::string& what) {
    return Error(ErrorCode::budget_exhausted, what);
  }
  static Error bad_manifest(const std::string& what) {
    return Error(ErrorCode::bad_manifest, what);
  }
  static Error missing_tbf(const std::string& what) {
    return Error(ErrorCode::missing_tbf, what);
  }
  static Error missing_variable(const std::string& what) {
    return Error(ErrorCode::missing_variable, what);
  }
  static Error parse(const std::string& what) {
    return Error(ErrorCode::parse_error, what);
  }
  static Error bad_argument(const std::string& what) {
    return Error(ErrorCode::bad_argument, what);
  }
  static Error io(const std::string& what) {
    return Error(ErrorCode::io_error, what);
  }

private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace evalpres
