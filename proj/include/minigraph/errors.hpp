#pragma once

#include <stdexcept>
#include <string>

namespace minigraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested outside the region where a function is single-valued and smooth.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// |h'| fell below the derivative floor; the Weierstrass representation degenerates there.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A constructor or operation received parameters outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Zero-length tangent or vanishing gradient where a curvature was requested.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration or sequence extrapolation failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace minigraph
