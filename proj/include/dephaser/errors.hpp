#pragma once

#include <stdexcept>
#include <string>

namespace dephaser {

// Base for all library errors. The CLI maps ValidationError to exit code 2
// and TheoremViolation to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Integrator step size exceeds the stability bound.
class StabilityError : public ValidationError {
public:
    StabilityError(const std::string& what, std::size_t required_steps)
        : ValidationError(what), required_steps_(required_steps) {}
    std::size_t required_steps() const noexcept { return required_steps_; }

private:
    std::size_t required_steps_;
};

// Trace/Hermiticity breach detected while integrating.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Fit could not be performed (no signal, too few samples).
class FitError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A checked inequality or equivalence failed. Never expected on a correct build.
class TheoremViolation : public Error {
public:
    using Error::Error;
};

}  // namespace dephaser
