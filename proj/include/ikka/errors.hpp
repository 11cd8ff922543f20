#pragma once

#include <stdexcept>
#include <string>

namespace ikka {

// Root of every error the library throws deliberately.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented input requirement was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A filtration or other structured input is internally inconsistent.
class StructuralError : public Error {
public:
    using Error::Error;
};

// Bad configuration: unknown tracker names, invalid parameter values.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A file or table is missing a column or has an unparseable field.
class SchemaError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

class InsufficientLocalityError : public Error {
public:
    using Error::Error;
};

// Iterative solver hit its iteration cap. Carries the final KKT residual.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace ikka
