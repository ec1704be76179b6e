#pragma once

#include <stdexcept>
#include <string>

namespace pblockade {

// Base of every exception thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

struct DivisionByZero : DomainError {
    using DomainError::DomainError;
};

// Bad configuration (file, flags, sweep spec). Field-level message.
struct ConfigError : Error {
    using Error::Error;
};

// Failures of a numerical procedure rather than of its inputs.
struct NumericalError : Error {
    using Error::Error;
};

struct SingularDenominator : NumericalError {
    enum class Which { SingleExcitation, TwoExcitation };
    SingularDenominator(Which w, const std::string& what) : NumericalError(what), which(w) {}
    Which which;
};

struct NoRealSolution : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateDetuning : NumericalError {
    using NumericalError::NumericalError;
};

struct NonFiniteState : NumericalError {
    using NumericalError::NumericalError;
};

struct NotConverged : NumericalError {
    using NumericalError::NumericalError;
};

struct UnknownFigure : ConfigError {
    using ConfigError::ConfigError;
};

} // namespace pblockade
