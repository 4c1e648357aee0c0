#pragma once

#include <stdexcept>
#include <string>

namespace sdfem {

/// Raised when a linear solve cannot meet its residual contract.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Internal numerical failure (non-converging iteration, singular local system).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration; `key` names the offending flag or config key when known.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::invalid_argument(key.empty() ? what : "--" + key + ": " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace sdfem
