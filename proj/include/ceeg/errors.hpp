#pragma once

#include <stdexcept>
#include <string>

namespace ceeg {

enum class ErrorKind {
  invalid_argument,     // bad parameters, schema problems, invariant violations
  bad_magic,            // session file does not start with "CEEG"
  unsupported_version,  // session file version != 1
  corrupt_header,       // reserved byte nonzero, zero channels, bad name record
  truncated_payload,    // file ends mid-record
  invalid_amplitude,    // NaN/Inf sample value
  parse_error,          // malformed text input (CSV, config, JSON)
  io_failure,           // filesystem-level failure
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::bad_magic: return "bad_magic";
    case ErrorKind::unsupported_version: return "unsupported_version";
    case ErrorKind::corrupt_header: return "corrupt_header";
    case ErrorKind::truncated_payload: return "truncated_payload";
    case ErrorKind::invalid_amplitude: return "invalid_amplitude";
    case ErrorKind::parse_error: return "parse_error";
    case ErrorKind::io_failure: return "io_failure";
  }
  return "unknown";
}

/// Exception carrying a machine-checkable kind next to the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

/// CLI convention: 2 for validation/format problems, 3 for IO failures.
inline int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::io_failure ? 3 : 2;
}

}  // namespace ceeg
