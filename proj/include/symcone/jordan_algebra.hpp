#ifndef SYMCONE_JORDAN_ALGEBRA_HPP_
#define SYMCONE_JORDAN_ALGEBRA_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "symcone/errors.hpp"
#include "symcone/random.hpp"

namespace symcone {

enum class AlgebraKind { SymReal, HermComplex, Lorentz };

std::string_view to_string(AlgebraKind kind);
// Accepts "sym-real", "herm-complex", "lorentz".
AlgebraKind parse_kind(std::string_view name);

// Identifies one simple Euclidean Jordan algebra. Instances are only created
// through the factories, which guarantee dim = r + d r (r - 1) / 2.
class AlgebraDescriptor {
 public:
  // Real symmetric r x r matrices, r >= 1.
  static AlgebraDescriptor sym_real(int rank);
  // Complex Hermitian r x r matrices, r >= 2.
  static AlgebraDescriptor herm_complex(int rank);
  // R^(n+1) with the Lorentz product, n >= 2.
  static AlgebraDescriptor lorentz(int n);
  // Lorentz algebra selected by its ambient dimension n + 1.
  static AlgebraDescriptor lorentz_with_dim(int dim) { return lorentz(dim - 1); }

  AlgebraKind kind() const { return kind_; }
  int rank() const { return rank_; }
  int peirce() const { return peirce_; }
  int dim() const { return dim_; }
  double dim_over_rank() const { return static_cast<double>(dim_) / rank_; }
  bool is_matrix_kind() const { return kind_ != AlgebraKind::Lorentz; }

  // e.g. "sym-real(r=2)" or "lorentz(n=3)".
  std::string label() const;

  bool operator==(const AlgebraDescriptor&) const = default;

 private:
  AlgebraDescriptor(AlgebraKind kind, int rank, int peirce, int dim)
      : kind_(kind), rank_(rank), peirce_(peirce), dim_(dim) {}

  AlgebraKind kind_;
  int rank_;
  int peirce_;
  int dim_;
};

// A point of the algebra in canonical coordinates.
//
// Matrix kinds: diagonal units E_ii (i ascending), then for each pair i < j in
// column-major order the unit (E_ij + E_ji)/sqrt(2) and, for Hermitian
// matrices, i(E_ij - E_ji)/sqrt(2) right after it. This basis is orthonormal
// for tr(xy), so inner() is the plain dot product.
//
// Lorentz: the natural coordinates (x_0, ..., x_n). Here tr(xy) = 2 x.y.
class Element {
 public:
  Element(AlgebraDescriptor algebra, Eigen::VectorXd coords);

  const AlgebraDescriptor& algebra() const { return algebra_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(double s);

  friend Element operator+(Element lhs, const Element& rhs) { return lhs += rhs; }
  friend Element operator-(Element lhs, const Element& rhs) { return lhs -= rhs; }
  friend Element operator*(double s, Element x) { return x *= s; }
  friend Element operator*(Element x, double s) { return x *= s; }
  friend Element operator-(Element x) { return x *= -1.0; }

 private:
  AlgebraDescriptor algebra_;
  Eigen::VectorXd coords_;
};

// Matrix of a linear map on the algebra, acting on coordinate vectors.
struct LinearOperator {
  AlgebraDescriptor algebra;
  Eigen::MatrixXd matrix;

  Element apply(const Element& x) const;
  // Determinant in the space of endomorphisms.
  double determinant() const;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // descending
  std::vector<Element> idempotents;

  Element reconstruct() const;
};

Element identity(const AlgebraDescriptor& alg);
Element zero(const AlgebraDescriptor& alg);
// Element with the given diagonal; matrix kinds only.
Element diagonal(const AlgebraDescriptor& alg, const std::vector<double>& values);

Element jordan_product(const Element& x, const Element& y);
Element square(const Element& x);

// L(x): y -> xy.
LinearOperator lmap(const Element& x);
// P(x) = 2 L(x)^2 - L(x^2).
LinearOperator quad_rep(const Element& x);
// P(x)y without forming the operator.
Element quad_apply(const Element& x, const Element& y);

SpectralDecomposition spectral_decomposition(const Element& x);
Eigen::VectorXd eigenvalues(const Element& x);

double trace(const Element& x);
double det(const Element& x);
// log det x for x in the open cone; throws NotInCone otherwise.
double log_det(const Element& x);
// Canonical scalar product tr(xy).
double inner(const Element& x, const Element& y);
// sqrt(inner(x, x)).
double norm(const Element& x);

// Default cutoff for |lambda_i|: 1e-12 * (1 + max |lambda_i|).
double singularity_threshold(const Eigen::VectorXd& eigenvalues);

// Sum f(lambda_i) c_i over the spectral decomposition of x.
Element spectral_map(const Element& x, const std::function<double(double)>& f);
Element inverse(const Element& x, std::optional<double> threshold = std::nullopt);
Element sqrt(const Element& x);

bool in_cone(const Element& x, double tol);
// Uses the scale-aware singularity threshold as tolerance.
bool in_cone(const Element& x);
void require_in_cone(const Element& x, std::string_view what);
void require_same_algebra(const Element& x, const Element& y);

// Dense matrix form for matrix kinds (real part only for SymReal).
Eigen::MatrixXcd to_matrix(const Element& x);
Element from_matrix(const AlgebraDescriptor& alg, const Eigen::MatrixXcd& m);

// Standard Gaussian coordinates.
Element random_element(const AlgebraDescriptor& alg, Rng& rng);
// g^2 + floor * e for Gaussian g scaled by spread; always in the open cone.
Element random_cone_point(const AlgebraDescriptor& alg, Rng& rng, double spread = 1.0,
                          double floor = 0.05);
// Cone point with eigenvalues uniform in [lo, hi] and a random Jordan frame.
Element random_cone_point_in_band(const AlgebraDescriptor& alg, Rng& rng, double lo,
                                  double hi);

}  // namespace symcone

#endif  // SYMCONE_JORDAN_ALGEBRA_HPP_
