#pragma once

#include <stdexcept>
#include <string>

namespace thermoq {

enum class ErrorKind {
  parameter,             // an input violates a documented invariant
  divergence,            // the requested quantity diverges at this point
  degenerate_state,      // QFI undefined: pure state with non-zero derivative
  regime,                // closed form requested outside its regime
  internal_consistency,  // a numerical invariant was broken during a run
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace thermoq
