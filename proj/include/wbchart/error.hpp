#pragma once

#include <stdexcept>
#include <string>

namespace wbchart {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (negative x, R outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Prior hyper-parameters violating beta1 + beta2 > 2 or b_bar > 1.
class RestrictionError : public Error {
public:
    using Error::Error;
};

// An expectation that does not exist for the given parameters.
class DivergentMeanError : public Error {
public:
    using Error::Error;
};

// Quadrature or root finding failed to reach tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

// Wrong subgroup size or malformed record layout.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Operation invoked in the wrong lifecycle state.
class StateError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

// A self-check found a result inconsistent with an independent route.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// No Weibull model satisfies the requested shift targets.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

// Malformed text in a data, configuration or state file.
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace wbchart
