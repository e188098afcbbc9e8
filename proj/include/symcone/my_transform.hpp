#ifndef SYMCONE_MY_TRANSFORM_HPP_
#define SYMCONE_MY_TRANSFORM_HPP_

#include <Eigen/Dense>

#include "symcone/jordan_algebra.hpp"

namespace symcone {

// Two points of the same open cone. The constructor rejects anything else.
class ConePair {
 public:
  ConePair(Element first, Element second);

  const Element& first() const { return first_; }
  const Element& second() const { return second_; }

 private:
  Element first_;
  Element second_;
};

// Psi(x, y) = ((x + y)^-1, x^-1 - (x + y)^-1). Psi is its own inverse.
ConePair my_map(const Element& x, const Element& y);

// (a + P(a) b^-1)^-1; equals a^-1 - (a + b)^-1 (Hua's identity).
Element hua_rhs(const Element& a, const Element& b);
// a^-1 - (a + b)^-1.
Element hua_lhs(const Element& a, const Element& b);

// |det d(Psi)| = (det u det(u + v))^(-2 dim / r).
double jacobian_det_formula(const Element& u, const Element& v);
double log_jacobian_det_formula(const Element& u, const Element& v);

struct FiniteDifferenceOptions {
  // Base step, multiplied by max(1, |coordinate|) per coordinate.
  double step = 1e-5;
  // Combine steps h and h/2 as (4 D(h/2) - D(h)) / 3.
  bool richardson = false;
};

// Central-difference matrix of (u, v) -> Psi(u, v), size 2 dim x 2 dim. Rows
// and columns are ordered (first component coords, second component coords).
// Throws NotInCone when a perturbed point leaves the cone.
Eigen::MatrixXd my_map_jacobian_numeric(const Element& u, const Element& v,
                                        const FiniteDifferenceOptions& options = {});

double jacobian_det_numeric(const Element& u, const Element& v,
                            const FiniteDifferenceOptions& options = {});

struct JacobianComparison {
  double formula = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
  bool refined = false;
};

// Compares the closed form with finite differences, retrying once with
// Richardson refinement when the first estimate misses rel_tol.
JacobianComparison compare_jacobian(const Element& u, const Element& v, double rel_tol,
                                    const FiniteDifferenceOptions& options = {});

}  // namespace symcone

#endif  // SYMCONE_MY_TRANSFORM_HPP_
