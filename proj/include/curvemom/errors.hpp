#pragma once

#include <stdexcept>
#include <string>

namespace curvemom {

// Base for all toolkit errors so callers can catch one type at the CLI boundary.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: out-of-range parameters, malformed configs, inconsistent grids.
struct ConfigError : Error {
    using Error::Error;
};

// Geometry constraint violations: L_straight > L_ref, collisions, overlapping wires.
struct GeometryError : Error {
    using Error::Error;
};

// Thin-wire kernel validity: segment shorter than 2x radius or longer than lambda/10.
struct KernelValidityError : Error {
    using Error::Error;
};

// Numerically singular system; message carries the condition estimate.
struct SingularSystemError : Error {
    using Error::Error;
};

// Internal inconsistency detected by a cross-check (power balance, degenerate pattern).
struct SolverError : Error {
    using Error::Error;
};

// Malformed external file (Touchstone, NEC deck, CSV); message names the line.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace curvemom
