#pragma once

#include <stdexcept>
#include <string>

namespace ppnet {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (files, flags, preconditions).
class InputError : public Error {
public:
    using Error::Error;
};

/// Failure talking to an external raster service.
class ProviderError : public Error {
public:
    using Error::Error;
};

/// Non-finite values during optimisation.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace ppnet
