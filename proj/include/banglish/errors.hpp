#pragma once

#include <stdexcept>
#include <string>

namespace banglish {

// Error taxonomy mirrors the CLI exit codes: config 1, input 2, data 3.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace banglish
