#pragma once

#include <stdexcept>
#include <string>

namespace eqbk {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two grid functions were combined but live on different grids.
struct GridMismatchError : Error {
  using Error::Error;
};

/// A quadrature or end-slope precondition failed; the message suggests a remedy.
struct GridTooNarrowError : Error {
  using Error::Error;
};

struct InvalidWindowError : Error {
  using Error::Error;
};

/// Second differences of a supposedly convex grid function fell below -1e-6.
struct ConvexityViolationError : Error {
  using Error::Error;
};

/// A computed identity missed its required tolerance (signals an upstream bug).
struct ToleranceViolationError : Error {
  using Error::Error;
};

/// Gram matrix numerically singular or too ill-conditioned to factor.
struct ConditioningError : Error {
  double condition_estimate;
  ConditioningError(const std::string& msg, double cond)
      : Error(msg), condition_estimate(cond) {}
};

/// A probe point violates its admissibility condition (e.g. lies in the contact set).
struct ProbeError : Error {
  using Error::Error;
};

/// Configuration rejected; field_path names the offending entry.
struct ConfigError : Error {
  std::string field_path;
  ConfigError(const std::string& path, const std::string& msg)
      : Error(path + ": " + msg), field_path(path) {}
};

}  // namespace eqbk
