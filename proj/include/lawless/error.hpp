#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lawless {

// Contract violation carrying a stable machine-readable code ("ZeroVector",
// "DimensionMismatch", ...). The CLI maps codes to exit codes: input and
// validation problems exit 2, numerical-tolerance failures (TooTight,
// ToleranceExceeded) exit 3.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace lawless
