#pragma once

#include <stdexcept>
#include <string>

namespace spiraldim {

/// Base class for every error raised by the library. The CLI maps these to
/// exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (t < t0, outside knot range).
class DomainError : public Error {
public:
    using Error::Error;
};

class PositivityError : public Error {
public:
    using Error::Error;
};

/// Regression cannot be formed (too few points or too narrow a window).
class FitDegenerateError : public Error {
public:
    using Error::Error;
};

class OriginError : public Error {
public:
    using Error::Error;
};

/// Adaptive step size collapsed; the problem is stiff or singular here.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// Polar angle never settled into monotone clockwise rotation.
class NotSpiralError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Construction-time invariant violated by a spec object.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Requested raster resolution exceeds the work budget.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Curve does not reach far enough toward its center for the requested
/// epsilon range.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or input file. The CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace spiraldim
