#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base of every error the library raises. The CLI maps the subclasses onto
// process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A model hypothesis (partial homogeneity, zero drift, full-rank covariance,
// left-continuity, ...) does not hold for the supplied data.
class HypothesisError : public Error {
public:
    using Error::Error;
};

// Malformed input: bad JSON, wrong array lengths, unparsable probability.
class SchemaError : public Error {
public:
    using Error::Error;
};

// An iterative or statistical routine could not reach its target.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), residual_(last_residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Argument outside the domain of a function (e.g. h at the origin for beta < 0).
class DomainError : public Error {
public:
    using Error::Error;
};

// Exact stationary solve requested on a chain that is not left-continuous.
class MethodUnavailableError : public Error {
public:
    using Error::Error;
};

}  // namespace qwalk
