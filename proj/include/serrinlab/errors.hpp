#pragma once

#include <stdexcept>
#include <string>

namespace serrinlab {

// Base class of every exception thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A geometric precondition failed: bad dimension, radius outside the
// admissible range for the curvature, empty annulus, degenerate sphere.
struct InadmissibleDomain : Error {
  using Error::Error;
};

// Closed-form annulus family is singular (cos(sqrt(k) R_out) = 0).
struct DegenerateAnnulus : Error {
  using Error::Error;
};

// Radial Newton solver failed after damping and continuation.
struct NonConvergence : Error {
  using Error::Error;
};

// FEM Newton solver failed; the message carries the iterate trace.
struct NewtonDivergence : Error {
  using Error::Error;
};

// Stiffness system could not be factorized.
struct SingularStiffness : Error {
  using Error::Error;
};

// Mesh generation failed (self-intersecting input, degenerate elements).
struct MeshFailure : Error {
  using Error::Error;
};

// An annulus-only check was invoked on a single-boundary problem.
struct NotAnnular : Error {
  using Error::Error;
};

// A ball-type check (single boundary component) was invoked on an annulus.
struct NotSingleBoundary : Error {
  using Error::Error;
};

// Shear-stress denominator is non-positive.
struct DegenerateDenominator : Error {
  using Error::Error;
};

// Run configuration could not be parsed or validated.
struct ConfigError : Error {
  using Error::Error;
};

// File input/output failure (mesh or report files).
struct IoError : Error {
  using Error::Error;
};

// A caller-supplied argument violates an operation precondition.
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace serrinlab
