#pragma once

#include <stdexcept>

namespace mzi {

/// Base class of all domain errors raised by this library. Invalid raw
/// values (NaN fields, negative moduli) throw std::invalid_argument instead.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The requested quantity is undefined for this input, e.g. a power ratio
/// with a dark reference port, or a state carrying zero phase information.
class DegenerateInput : public Error {
  public:
    using Error::Error;
};

/// The detection scheme has no formula for the requested operation.
class UnsupportedScheme : public Error {
  public:
    using Error::Error;
};

/// A parameter lies outside the domain covered by the closed forms
/// (nonzero squeeze phase, detuned input lasers, oversized amplitudes
/// for the Fock-space oracle).
class UnsupportedParameter : public Error {
  public:
    using Error::Error;
};

/// A closed form hits an identically vanishing denominator
/// (|alpha|^2 == sinh^2 r for the squeezed-input expressions).
class SingularPoint : public Error {
  public:
    using Error::Error;
};

/// A fixed Fock-space truncation leaves too much probability mass outside
/// the retained basis.
class TruncationTooSmall : public Error {
  public:
    using Error::Error;
};

/// 0/0 in the error-propagation ratio: vanishing noise and vanishing signal
/// slope at the same working point.
class IndeterminateSensitivity : public Error {
  public:
    using Error::Error;
};

/// A numerical minimum search ended on the boundary of its interval.
class NoInteriorMinimum : public Error {
  public:
    using Error::Error;
};

} // namespace mzi
