#pragma once

#include <stdexcept>
#include <string>

namespace azlab {

enum class ErrorKind {
    config,   // bad input: malformed spec, config, or precondition
    numeric,  // a computation failed (non-convergence, overflow, degeneracy)
    io,       // filesystem
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void throw_config(const std::string& what);
[[noreturn]] void throw_numeric(const std::string& what);
[[noreturn]] void throw_io(const std::string& what);

/// Process exit code for an error kind: 1 config, 2 numeric, 3 I/O.
int exit_code(ErrorKind kind) noexcept;

}  // namespace azlab
