#ifndef BRIDGEHACK_ERRORS_HPP_
#define BRIDGEHACK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bridgehack {

// Base class for all domain errors raised by this library. Input validation
// failures (bad dimensions, malformed documents) throw std::invalid_argument
// instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Elementwise division hit a ~0 denominator with a nonzero numerator, so the
// hacking equation is undefined at this point.
struct DivisionSingularity : Error {
  using Error::Error;
};

// A matrix expected to be Hermitian failed the max-norm tolerance.
struct NotHermitian : Error {
  using Error::Error;
};

// An operator fell below the eigenvalue floor where an inverse square root
// (or inverse) was required.
struct RankDeficient : Error {
  using Error::Error;
};

// A stochastic-matrix construction (Bayes map, bridge) divides by a vanishing
// propagated mass.
struct Singular : Error {
  using Error::Error;
};

// KL divergence requested where the candidate coupling places mass outside
// the support of the reference.
struct SupportViolation : Error {
  using Error::Error;
};

// A state expected to be diagonal in the computational basis carries
// off-diagonal weight.
struct NotDecoherent : Error {
  using Error::Error;
};

// Subset enumeration requested beyond the exponential-cost bound.
struct DimensionTooLarge : Error {
  using Error::Error;
};

}  // namespace bridgehack

#endif  // BRIDGEHACK_ERRORS_HPP_
