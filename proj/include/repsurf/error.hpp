#pragma once

#include <stdexcept>
#include <string>

namespace repsurf {

/// Failure categories surfaced through the C API and mapped to CLI exit codes.
enum class ErrorCode {
    invalid_argument,   // parameter out of contract (k >= N, lr <= 0, ...)
    invalid_input,      // data violates a precondition (non-finite coordinate, empty cloud)
    config_mismatch,    // incompatible widths/layouts
    invalid_state,      // stale cache, use-after-step
    format_error,       // malformed file container
    validation_error,   // non-finite value where finiteness is guaranteed
    io_error,           // unreadable/unwritable path
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace repsurf
