#pragma once

#include <stdexcept>
#include <string>

namespace nlmaxwell {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arrays that do not match the grid, mixed sample locations, incompatible runs.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Argument outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario or solver configuration (CFL violation, bad preset, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failures raised while a solver is running.
class SolverError : public Error {
public:
    using Error::Error;
};

/// The product graph s -> sigma(s) s cannot be inverted: sigma vanishes on an
/// interval and no displacement term is present to restore uniqueness.
class DegeneracyError : public SolverError {
public:
    using SolverError::SolverError;
};

class ConvergenceError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Adaptive step collapsed below the allowed floor.
class StiffnessError : public SolverError {
public:
    using SolverError::SolverError;
};

/// Graph shape not supported by the requested operation.
class UnsupportedShapeError : public Error {
public:
    using Error::Error;
};

}  // namespace nlmaxwell
