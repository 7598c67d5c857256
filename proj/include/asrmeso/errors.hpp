#pragma once

#include <stdexcept>
#include <string>

namespace asrmeso {

// Error categories map 1:1 onto CLI exit codes (see tools/): configuration
// problems exit 2, numerical failures exit 3, packing saturation exits 4.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class PackingError : public std::runtime_error {
public:
    PackingError(const std::string& msg, double achieved, double target)
        : std::runtime_error(msg), achieved_fraction(achieved), target_fraction(target) {}
    double achieved_fraction;
    double target_fraction;
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

}
