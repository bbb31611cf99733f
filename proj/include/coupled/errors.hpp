#ifndef COUPLED_ERRORS_HPP
#define COUPLED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coupled {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSignChange : Error {
  using Error::Error;
};

struct MaxIterExceeded : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct EigDecompositionFailed : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct DominationViolated : Error {
  using Error::Error;
};

struct SingularH : Error {
  using Error::Error;
};

struct InvalidAlpha : Error {
  using Error::Error;
};

struct DegenerateGap : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct NoCoupledProposals : Error {
  using Error::Error;
};

struct ZeroWeights : Error {
  using Error::Error;
};

}  // namespace coupled

#endif  // COUPLED_ERRORS_HPP
