#pragma once

#include <stdexcept>
#include <string>

namespace anisofermi {

// Error categories, aligned with the CLI exit codes (2 = bad configuration,
// 3 = numerical failure, 4 = I/O failure).
enum class ErrorCode { config = 2, numeric = 3, io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(std::string m) : Error(ErrorCode::config, std::move(m)) {}
};

// Precondition violation on a numerical operation (argument outside the
// mathematical domain, time outside a model's validity interval, ...).
struct DomainError : Error {
    explicit DomainError(std::string m) : Error(ErrorCode::numeric, std::move(m)) {}
};

// Runtime numerical failure: divergence, step-size underflow, non-finite
// intermediate results.
struct NumericError : Error {
    explicit NumericError(std::string m) : Error(ErrorCode::numeric, std::move(m)) {}
};

struct IoError : Error {
    explicit IoError(std::string m) : Error(ErrorCode::io, std::move(m)) {}
};

} // namespace anisofermi
