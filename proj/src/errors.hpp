#pragma once

#include <stdexcept>
#include <string>

namespace secd2d {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Raised on singular systems, failed residual checks and degenerate channels.
class NumericalError : public Error {
public:
    using Error::Error;
};

class InfeasibleRateError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    using Error::Error;
};

class SearchSpaceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace secd2d
