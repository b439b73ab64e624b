#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lin {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time or index fell outside the configured integration window.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Bad argument: out-of-range parameter, malformed grid, missing constants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Unknown catalog or example name.
class CatalogError : public Error {
public:
    using Error::Error;
};

/// A singular operator was met where an inverse is required.
class InvertibilityError : public Error {
public:
    using Error::Error;
};

/// A hypothesis needed by a solver does not hold (e.g. q >= 1).
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// A truncated integral or sum cannot be certified (non-integrable tail).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history = {})
        : Error(what), history_(std::move(history)) {}

    /// Sup-norm sweep deltas (or residuals) observed before giving up.
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Configuration document failed to parse or validate.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lin
