#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible range (e.g. alpha not in [0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Spectral coefficients are too far from Hermitian symmetric to describe a real field.
class SymmetryViolation : public Error {
public:
    using Error::Error;
};

/// An exact-solution object failed validation.
class InvalidSolution : public Error {
public:
    using Error::Error;
};

/// The grid is too coarse for the requested modes.
class UnderResolved : public Error {
public:
    using Error::Error;
};

/// The time step violates the advective stability guard.
class CflViolation : public Error {
public:
    CflViolation(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// The numerical solution became non-finite or grew without bound.
class BlowupDetected : public Error {
public:
    BlowupDetected(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class DegenerateFit : public Error {
public:
    using Error::Error;
};

class ZeroField : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace sqg
