#include "phi4/error.hpp"

namespace phi4 {

const char* reason(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::shape_mismatch: return "shape mismatch";
    case ErrorKind::symbol_evaluation: return "symbol evaluation";
    case ErrorKind::growth_violation: return "growth violation";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::usage: return "usage error";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::non_contraction: return "non-contraction";
    case ErrorKind::checksum: return "checksum error";
    case ErrorKind::io: return "io error";
    case ErrorKind::config: return "config error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(reason(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace phi4
