#pragma once

#include <stdexcept>
#include <string>

namespace kppfb {

enum class ErrorCode {
    InvalidArgument,  // bad inputs: ranges, brackets, preconditions
    Numerical,        // scheme failure: lost positivity, zero pivot, retreating front
    Regime,           // mathematically empty result: negative exponent, vanishing limit
    Io,               // file errors (used by callers of the library)
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace kppfb
