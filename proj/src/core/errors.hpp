#pragma once

#include <stdexcept>
#include <string>

namespace advae {

enum class ErrorCode {
    invalid_dimension = 1,
    state_error = 2,
    data_error = 3,
    diverged = 4,
    usage_error = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct InvalidDimensionError : Error {
    explicit InvalidDimensionError(const std::string& msg) : Error(ErrorCode::invalid_dimension, msg) {}
};

struct StateError : Error {
    explicit StateError(const std::string& msg) : Error(ErrorCode::state_error, msg) {}
};

struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(ErrorCode::data_error, msg) {}
};

struct DivergedError : Error {
    explicit DivergedError(const std::string& msg) : Error(ErrorCode::diverged, msg) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error(ErrorCode::usage_error, msg) {}
};

} // namespace advae
