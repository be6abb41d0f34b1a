#pragma once

#include <stdexcept>
#include <string>

namespace satwait {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation requested past the time window on which a subsolution is valid.
class LifetimeExceeded : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter synthesis could not produce an admissible parameter set.
class SynthesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Explicit step rejected because dt exceeds the stability bound.
class StepRejected : public std::runtime_error {
public:
    StepRejected(const std::string& what, double admissible_dt)
        : std::runtime_error(what), admissible_dt_(admissible_dt) {}

    double admissible_dt() const noexcept { return admissible_dt_; }

private:
    double admissible_dt_;
};

}  // namespace satwait
