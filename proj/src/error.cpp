#include "error.hpp"

namespace evalpres {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::oracle_violation: return "oracle-contract-violation";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::bad_manifest: return "bad-manifest";
    case ErrorCode::missing_tbf: return "missing-tbf";
    case ErrorCode::missing_variable: return "missing-variable";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::bad_argument: return "bad-argument";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace evalpres
