#pragma once

#include <stdexcept>
#include <string>

namespace speccode {

// Input violates a documented precondition of a constructor or operation
// (non-Hermitian matrix, dependent generators, unknown label, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computed quantity breached a numerical tolerance the caller relies on.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace speccode
