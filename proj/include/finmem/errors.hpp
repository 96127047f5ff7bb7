// errors.hpp: exception types shared across finmem

#pragma once

#include <stdexcept>

namespace finmem {

// A computation ran but its result cannot be trusted: Fock truncation not
// converged, step above a stability guard, no threshold crossing inside the
// horizon, divergent quadrature. Argument errors use std::invalid_argument /
// std::domain_error instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace finmem

namespace finmem {

// No threshold crossing inside the sampled horizon.
class HorizonExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace finmem
