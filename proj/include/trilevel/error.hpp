#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace trilevel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated operation precondition (non-Hermitian input, bad parameter range, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Integration or linear-algebra failure; `time` is the model time where it happened, if known.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, double time = std::numeric_limits<double>::quiet_NaN())
        : Error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::vector<std::string> keys)
        : Error(what), keys_(std::move(keys)) {}
    const std::vector<std::string>& keys() const { return keys_; }

private:
    std::vector<std::string> keys_;
};

}  // namespace trilevel
