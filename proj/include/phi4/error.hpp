#pragma once

#include <stdexcept>
#include <string>

namespace phi4 {

enum class ErrorKind {
  domain,
  shape_mismatch,
  symbol_evaluation,
  growth_violation,
  infeasible,
  unsupported,
  usage,
  blow_up,
  non_contraction,
  checksum,
  io,
  config,
};

// Stable machine-readable reason, e.g. "growth violation".
const char* reason(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace phi4
