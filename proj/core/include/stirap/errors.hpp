#pragma once

#include <stdexcept>
#include <string>

namespace stirap {

// Invalid user input: unknown ion, malformed scenario file, unknown schema
// key, inconsistent field combination. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during a computation that was configured correctly
// (step-size underflow, tolerance failure, lost eigenstate tracking).
// CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg, double time = 0.0)
        : std::runtime_error(msg), time_reached(time) {}

    // Integration time (seconds) reached when the failure occurred.
    double time_reached;
};

} // namespace stirap
