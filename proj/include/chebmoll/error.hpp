#pragma once

#include <stdexcept>
#include <string>

namespace chebmoll {

enum class ErrorCode {
  invalid_order,
  out_of_domain,
  invalid_argument,
  degenerate_kernel,
  degree_overflow,
  mismatched_grid,
  degenerate_cell,
  tiling_gap,
  blow_up,
  io_failure,
  config,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_order: return "invalid-order";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::degenerate_kernel: return "degenerate-kernel";
    case ErrorCode::degree_overflow: return "degree-overflow";
    case ErrorCode::mismatched_grid: return "mismatched-grid";
    case ErrorCode::degenerate_cell: return "degenerate-cell";
    case ErrorCode::tiling_gap: return "tiling-gap";
    case ErrorCode::blow_up: return "blow-up";
    case ErrorCode::io_failure: return "io-failure";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

/// Every failure raised by the toolkit carries a code so callers (the CLI
/// in particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chebmoll
