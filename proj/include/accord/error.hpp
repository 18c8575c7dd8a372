#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace accord {

// Input: malformed or inconsistent data supplied by the caller.
// Numeric: the computation itself failed (non-convergence, rank deficiency).
// Io: filesystem trouble.
enum class ErrorKind { Input, Numeric, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        kind_(kind),
        code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void raise_input(std::string code, const std::string& msg) {
  throw Error(ErrorKind::Input, std::move(code), msg);
}

[[noreturn]] inline void raise_numeric(std::string code, const std::string& msg) {
  throw Error(ErrorKind::Numeric, std::move(code), msg);
}

[[noreturn]] inline void raise_io(std::string code, const std::string& msg) {
  throw Error(ErrorKind::Io, std::move(code), msg);
}

}  // namespace accord
