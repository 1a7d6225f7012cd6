#pragma once

#include <stdexcept>
#include <string>

namespace kickfid {

// Bad parameters, arguments or input files. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical, regime or domain failures. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands live on different grids or incompatible sampling.
class ShapeError : public NumericError {
public:
    using NumericError::NumericError;
};

// Parameters outside the validity domain (K outside (0,4), 2*omega <= Omega, ...).
class RegimeError : public NumericError {
public:
    using NumericError::NumericError;
};

// Series too short or band too narrow for the requested analysis.
class ResolutionError : public NumericError {
public:
    using NumericError::NumericError;
};

// No local maximum inside the requested frequency band.
class NoPeakError : public NumericError {
public:
    using NumericError::NumericError;
};

// Wavepacket amplitude at the grid boundary above tolerance.
class LeakError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace kickfid
