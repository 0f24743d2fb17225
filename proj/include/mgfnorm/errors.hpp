#ifndef MGFNORM_ERRORS_HPP
#define MGFNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mgfnorm {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data violates the DataMatrix invariants (shape, n >= d + 1, finiteness).
class InvalidData : public Error {
 public:
  using Error::Error;
};

/// Sample covariance is (numerically) singular; n too small or collinear data.
class SingularCovariance : public Error {
 public:
  using Error::Error;
};

class GammaTooSmall : public Error {
 public:
  using Error::Error;
};

class BetaTooSmall : public Error {
 public:
  using Error::Error;
};

/// An exponent in a closed-form sum left the representable range.
class Overflow : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Statistic only defined for a particular dimension (Zghoul: d = 1).
class DimensionError : public Error {
 public:
  using Error::Error;
};

class SampleTooLarge : public Error {
 public:
  using Error::Error;
};

class SeriesNonConvergence : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Alternative has no moment generating function on all of R^d.
class MGFNotFinite : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (CSV, canonical strings, JSON documents).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mgfnorm

#endif  // MGFNORM_ERRORS_HPP
