// Error types mapped to CLI exit codes: config -> 1, numerical -> 2, io -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace tumorfd {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tumorfd
