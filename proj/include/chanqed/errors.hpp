#pragma once

#include <stdexcept>
#include <string>

namespace chanqed {

/// Input outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical method failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double error_estimate = 0.0)
        : std::runtime_error(what), error_estimate_(error_estimate) {}

    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

/// Kinematics outside the soft-photon regime (negative quasienergy, superluminal mean velocity).
class KinematicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete scenario / preset input. The message names the key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chanqed
