#pragma once

#include <stdexcept>
#include <string>

namespace spirallab {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Arithmetic hit an undefined value (log of 0, division by 0).
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A point lies on (or within guard distance of) a declared singular set,
// e.g. a zero of an abs/log argument where the expression is not smooth.
struct SingularPointError : Error {
  explicit SingularPointError(const std::string& what) : Error(what) {}
};

struct EigensolverFailure : Error {
  explicit EigensolverFailure(const std::string& what) : Error(what) {}
};

// The adaptive step controller could not meet the requested tolerance.
struct StepUnderflow : Error {
  explicit StepUnderflow(const std::string& what) : Error(what) {}
};

struct SamplingExhausted : Error {
  explicit SamplingExhausted(const std::string& what) : Error(what) {}
};

// Defining-function gradient too small to define a boundary normal.
struct DegenerateGradient : Error {
  explicit DegenerateGradient(const std::string& what) : Error(what) {}
};

// fwd(inv(x)) failed to return x within tolerance.
struct InverseMismatch : Error {
  explicit InverseMismatch(const std::string& what) : Error(what) {}
};

// Reverse flow escaped before reaching the requested chain time.
struct DivergedBeforeT : Error {
  explicit DivergedBeforeT(const std::string& what) : Error(what) {}
};

struct BaseMapInversionFailure : Error {
  explicit BaseMapInversionFailure(const std::string& what) : Error(what) {}
};

struct OutsideDisc : Error {
  explicit OutsideDisc(const std::string& what) : Error(what) {}
};

struct EmptyWindow : Error {
  explicit EmptyWindow(const std::string& what) : Error(what) {}
};

struct UnknownName : Error {
  explicit UnknownName(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace spirallab
