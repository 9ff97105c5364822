#pragma once

/// \file errors.hpp
/// Exception hierarchy. All library errors derive from Error so callers can
/// catch one base type; the concrete types mirror the failure modes of the
/// individual components.

#include <stdexcept>
#include <string>

namespace cloudshape {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration file or parameter problems (bad field, missing key, bad unit).
struct ConfigError : Error {
  using Error::Error;
};

/// Requested field plane lies at or before the retarder plane.
struct UpstreamPlane : Error {
  using Error::Error;
};

/// Analytic curvature requested for a retarder order it does not cover.
struct UnsupportedOrder : Error {
  using Error::Error;
};

/// Propagation grid carries too much energy at its edges.
struct GridTooNarrow : Error {
  using Error::Error;
};

struct NonPositiveDistance : Error {
  using Error::Error;
};

/// Adaptive integrator step size underflowed before reaching the end time.
struct IntegratorFailure : Error {
  using Error::Error;
};

/// Background minus dark frame is non-positive somewhere.
struct BadReference : Error {
  using Error::Error;
};

/// Width extraction found no usable peak above the background.
struct NoSignal : Error {
  using Error::Error;
};

struct FitDiverged : Error {
  using Error::Error;
};

struct SingularJacobian : Error {
  using Error::Error;
};

/// Too few samples inside the requested fit window.
struct InsufficientData : Error {
  using Error::Error;
};

struct InvalidQuantumNumbers : Error {
  using Error::Error;
};

/// Rate matrix has no stationary distribution (zero coupling).
struct NoSteadyState : Error {
  using Error::Error;
};

struct ZeroCoupling : Error {
  using Error::Error;
};

struct UnknownFigure : Error {
  using Error::Error;
};

}  // namespace cloudshape
