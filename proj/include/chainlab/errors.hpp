#pragma once

#include <stdexcept>
#include <string>

namespace chainlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller-side contract violation (window margins, sample counts, ...).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A constructive procedure could not produce its object (empty index set,
/// exhausted search grid).
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown that should never happen for valid input.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chainlab
