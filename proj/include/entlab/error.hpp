#pragma once

#include <stdexcept>
#include <string>

namespace entlab {

enum class ErrorKind {
  invalid_input,
  infeasible,
  numerical_failure,
  no_connector,
  not_reducible,
  io_failure,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying an ErrorKind so callers (notably the CLI) can map
/// failures onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace entlab
