#pragma once

#include <stdexcept>
#include <string>

namespace sig {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input matrix is not usable at all: non-finite entries, asymmetric
/// beyond tolerance, or not positive definite.
class InvalidMatrix : public Error {
public:
    using Error::Error;
};

/// An eigenvalue fell below the clamp floor where an inverse or logarithm
/// is required, so the operation would amplify noise instead of signal.
class NearSingular : public Error {
public:
    using Error::Error;
};

/// The requested geodesic distance has no closed form in this geometry
/// (general Gaussian Fisher-Rao case with both mean and covariance varying).
class UnsupportedGeodesic : public Error {
public:
    using Error::Error;
};

/// Operands have incompatible dimensions.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A computation produced values outside what round-off alone can explain.
class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

/// An iterative solver exhausted its iteration budget before reaching tol.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// A sampled window contained no points where at least one is required.
class EmptyWindow : public Error {
public:
    using Error::Error;
};

/// A scalar argument lies outside the domain of the requested formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// No parameter value can satisfy the requested threshold.
class InfeasibleThreshold : public Error {
public:
    using Error::Error;
};

/// The combination of options is recognized but deliberately not provided.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// Command line or config file could not be interpreted.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace sig
