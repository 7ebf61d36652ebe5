#pragma once

#include <stdexcept>
#include <string>

namespace mechlab {

// Invalid instance/distribution/config data. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its tolerance. CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A guaranteed mechanism property was observed to fail. CLI exit code 3.
class PropertyViolation : public std::runtime_error {
public:
    explicit PropertyViolation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mechlab
