#pragma once

#include <stdexcept>
#include <string>

namespace sblfem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A problem violates one of the data assumptions b >= beta > 0, c >= gamma > 0,
/// c - (eps2/2) b' >= rho > 0, or the parameter ordering 0 < eps1 <= eps2 <= 1.
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

/// Coefficients produced something that is not a finite real number.
class DataError : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed command line, config file or CSV input.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sblfem
