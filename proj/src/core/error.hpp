#pragma once

#include <stdexcept>
#include <string>

namespace cxrsev {

enum class ErrorKind {
    NotFound,          // missing file or directory
    Io,                // read/write failure on an existing target
    UnsupportedFormat, // recognized but unsupported file contents
    CorruptData,       // malformed header or truncated payload
    InvalidArgument,   // bad parameter, dimension mismatch, out-of-range value
    Internal
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition)
        fail(kind, message);
}

} // namespace cxrsev
