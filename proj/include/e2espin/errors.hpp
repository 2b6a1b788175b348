#pragma once

#include <stdexcept>
#include <string>

namespace e2espin {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (poles, out-of-range angles, empty settings).
class DomainError : public Error {
public:
    using Error::Error;
};

// Series or integrator failed to converge within budget.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double abs_z = 0.0) : Error(what), abs_z_(abs_z) {}
    double abs_z() const noexcept { return abs_z_; }

private:
    double abs_z_;
};

// Final spin state vanishes (u = 0).
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

// Input object violates its invariants (non-Hermitian matrix, unnormalized state, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class KinematicsError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace e2espin
