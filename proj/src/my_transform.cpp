#include "symcone/my_transform.hpp"

#include <cmath>

namespace symcone {

ConePair::ConePair(Element first, Element second)
    : first_(std::move(first)), second_(std::move(second)) {
  require_same_algebra(first_, second_);
  require_in_cone(first_, "first component");
  require_in_cone(second_, "second component");
}

ConePair my_map(const Element& x, const Element& y) {
  require_same_algebra(x, y);
  require_in_cone(x, "x");
  require_in_cone(y, "y");
  Element u = inverse(x + y);
  Element v = inverse(x) - u;
  return ConePair(std::move(u), std::move(v));
}

Element hua_rhs(const Element& a, const Element& b) {
  require_same_algebra(a, b);
  return inverse(a + quad_apply(a, inverse(b)));
}

Element hua_lhs(const Element& a, const Element& b) { return inverse(a) - inverse(a + b); }

double log_jacobian_det_formula(const Element& u, const Element& v) {
  require_same_algebra(u, v);
  require_in_cone(u, "u");
  require_in_cone(v, "v");
  const auto& alg = u.algebra();
  return -2.0 * alg.dim_over_rank() * (log_det(u) + log_det(u + v));
}

double jacobian_det_formula(const Element& u, const Element& v) {
  return std::exp(log_jacobian_det_formula(u, v));
}

namespace {

Eigen::VectorXd stacked_map(const Eigen::VectorXd& z, const AlgebraDescriptor& alg) {
  const int n = alg.dim();
  const ConePair out = my_map(Element(alg, z.head(n)), Element(alg, z.tail(n)));
  Eigen::VectorXd result(2 * n);
  result << out.first().coords(), out.second().coords();
  return result;
}

Eigen::MatrixXd central_differences(const Eigen::VectorXd& z, const AlgebraDescriptor& alg,
                                    double step) {
  const int m = static_cast<int>(z.size());
  Eigen::MatrixXd jac(m, m);
  for (int k = 0; k < m; ++k) {
    const double h = step * std::max(1.0, std::abs(z[k]));
    Eigen::VectorXd plus = z;
    Eigen::VectorXd minus = z;
    plus[k] += h;
    minus[k] -= h;
    jac.col(k) = (stacked_map(plus, alg) - stacked_map(minus, alg)) / (2.0 * h);
  }
  return jac;
}

}  // namespace

Eigen::MatrixXd my_map_jacobian_numeric(const Element& u, const Element& v,
                                        const FiniteDifferenceOptions& options) {
  require_same_algebra(u, v);
  require_in_cone(u, "u");
  require_in_cone(v, "v");
  const auto& alg = u.algebra();
  Eigen::VectorXd z(2 * alg.dim());
  z << u.coords(), v.coords();
  const Eigen::MatrixXd coarse = central_differences(z, alg, options.step);
  if (!options.richardson) return coarse;
  const Eigen::MatrixXd fine = central_differences(z, alg, 0.5 * options.step);
  return (4.0 * fine - coarse) / 3.0;
}

double jacobian_det_numeric(const Element& u, const Element& v,
                            const FiniteDifferenceOptions& options) {
  return std::abs(my_map_jacobian_numeric(u, v, options).determinant());
}

JacobianComparison compare_jacobian(const Element& u, const Element& v, double rel_tol,
                                    const FiniteDifferenceOptions& options) {
  JacobianComparison out;
  out.formula = jacobian_det_formula(u, v);
  out.numeric = jacobian_det_numeric(u, v, options);
  out.relative_error = std::abs(out.numeric - out.formula) / out.formula;
  if (out.relative_error > rel_tol && !options.richardson) {
    FiniteDifferenceOptions refined = options;
    refined.richardson = true;
    out.numeric = jacobian_det_numeric(u, v, refined);
    out.relative_error = std::abs(out.numeric - out.formula) / out.formula;
    out.refined = true;
  }
  return out;
}

}  // namespace symcone
