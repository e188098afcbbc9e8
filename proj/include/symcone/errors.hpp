#ifndef SYMCONE_ERRORS_HPP_
#define SYMCONE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace symcone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in different algebras.
class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

// Inversion requested for an element with an eigenvalue at or below the
// singularity threshold.
class SingularElement : public Error {
 public:
  using Error::Error;
};

class NotInCone : public Error {
 public:
  using Error::Error;
};

// Shape parameter outside the range where a density exists.
class ShapeOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace symcone

#endif  // SYMCONE_ERRORS_HPP_
