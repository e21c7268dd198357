#pragma once

#include <stdexcept>
#include <string>

namespace fpfgain {

enum class ErrorCode {
  invalid_argument,
  parse,
  underdetermined,   // Galerkin system with N < M
  singular,          // Galerkin matrix singular to working precision
  no_convergence,    // fixed point not contracted within max_iter
  domain,            // truncation too tight / density underflow / out of support
  diverged,          // non-finite particle during filtering
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fpfgain
