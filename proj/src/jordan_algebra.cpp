#include "symcone/jordan_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <type_traits>

namespace symcone {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

template <typename Scalar>
using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Dense<Scalar> to_dense(const Element& x) {
  const auto& alg = x.algebra();
  const int r = alg.rank();
  const auto& c = x.coords();
  Dense<Scalar> m = Dense<Scalar>::Zero(r, r);
  for (int i = 0; i < r; ++i) m(i, i) = c[i];
  int k = r;
  for (int j = 1; j < r; ++j) {
    for (int i = 0; i < j; ++i) {
      const double re = c[k++] * kInvSqrt2;
      m(i, j) += re;
      m(j, i) += re;
      if constexpr (!std::is_same_v<Scalar, double>) {
        if (alg.kind() == AlgebraKind::HermComplex) {
          const double im = c[k++] * kInvSqrt2;
          m(i, j) += cd(0.0, im);
          m(j, i) -= cd(0.0, im);
        }
      }
    }
  }
  return m;
}

template <typename Scalar>
Element from_dense(const AlgebraDescriptor& alg, const Dense<Scalar>& m) {
  const int r = alg.rank();
  VectorXd c(alg.dim());
  for (int i = 0; i < r; ++i) c[i] = std::real(m(i, i));
  int k = r;
  for (int j = 1; j < r; ++j) {
    for (int i = 0; i < j; ++i) {
      // Average the two triangles so slightly non-Hermitian input still maps
      // to the nearest algebra element.
      Scalar lower = m(j, i);
      if constexpr (!std::is_same_v<Scalar, double>) lower = std::conj(lower);
      const Scalar upper = (m(i, j) + lower) * 0.5;
      c[k++] = std::sqrt(2.0) * std::real(upper);
      if (alg.kind() == AlgebraKind::HermComplex) c[k++] = std::sqrt(2.0) * std::imag(upper);
    }
  }
  return Element(alg, std::move(c));
}

Element lorentz_product(const Element& x, const Element& y) {
  const auto& a = x.coords();
  const auto& b = y.coords();
  VectorXd out(a.size());
  out[0] = a.dot(b);
  out.tail(a.size() - 1) = a[0] * b.tail(b.size() - 1) + b[0] * a.tail(a.size() - 1);
  return Element(x.algebra(), std::move(out));
}

template <typename Scalar>
SpectralDecomposition matrix_spectral(const Element& x) {
  const auto& alg = x.algebra();
  const int r = alg.rank();
  Eigen::SelfAdjointEigenSolver<Dense<Scalar>> solver(to_dense<Scalar>(x));
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  SpectralDecomposition out;
  out.eigenvalues.resize(r);
  out.idempotents.reserve(r);
  // Eigen sorts ascending.
  for (int i = 0; i < r; ++i) {
    const int src = r - 1 - i;
    out.eigenvalues[i] = solver.eigenvalues()[src];
    const auto v = solver.eigenvectors().col(src);
    out.idempotents.push_back(from_dense<Scalar>(alg, v * v.adjoint()));
  }
  return out;
}

SpectralDecomposition lorentz_spectral(const Element& x) {
  const auto& alg = x.algebra();
  const auto& c = x.coords();
  const int n = alg.dim() - 1;
  const double spatial = c.tail(n).norm();
  VectorXd direction = VectorXd::Zero(n);
  if (spatial == 0.0) {
    direction[0] = 1.0;
  } else {
    direction = c.tail(n) / spatial;
  }
  VectorXd plus(alg.dim());
  VectorXd minus(alg.dim());
  plus << 0.5, 0.5 * direction;
  minus << 0.5, -0.5 * direction;
  SpectralDecomposition out;
  out.eigenvalues.resize(2);
  out.eigenvalues << c[0] + spatial, c[0] - spatial;
  out.idempotents.emplace_back(alg, std::move(plus));
  out.idempotents.emplace_back(alg, std::move(minus));
  return out;
}

}  // namespace

std::string_view to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::SymReal:
      return "sym-real";
    case AlgebraKind::HermComplex:
      return "herm-complex";
    case AlgebraKind::Lorentz:
      return "lorentz";
  }
  return "unknown";
}

AlgebraKind parse_kind(std::string_view name) {
  if (name == "sym-real") return AlgebraKind::SymReal;
  if (name == "herm-complex") return AlgebraKind::HermComplex;
  if (name == "lorentz") return AlgebraKind::Lorentz;
  throw InvalidArgument("unknown algebra kind '" + std::string(name) + "'");
}

AlgebraDescriptor AlgebraDescriptor::sym_real(int rank) {
  if (rank < 1) throw InvalidArgument("sym-real requires rank >= 1");
  return AlgebraDescriptor(AlgebraKind::SymReal, rank, 1, rank * (rank + 1) / 2);
}

AlgebraDescriptor AlgebraDescriptor::herm_complex(int rank) {
  if (rank < 2) throw InvalidArgument("herm-complex requires rank >= 2");
  return AlgebraDescriptor(AlgebraKind::HermComplex, rank, 2, rank * rank);
}

AlgebraDescriptor AlgebraDescriptor::lorentz(int n) {
  if (n < 2) throw InvalidArgument("lorentz requires n >= 2 (dim >= 3)");
  return AlgebraDescriptor(AlgebraKind::Lorentz, 2, n - 1, n + 1);
}

std::string AlgebraDescriptor::label() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == AlgebraKind::Lorentz) {
    os << "(n=" << dim_ - 1 << ")";
  } else {
    os << "(r=" << rank_ << ")";
  }
  return os.str();
}

Element::Element(AlgebraDescriptor algebra, Eigen::VectorXd coords)
    : algebra_(algebra), coords_(std::move(coords)) {
  if (coords_.size() != algebra_.dim()) {
    throw InvalidArgument("element of " + algebra_.label() + " needs " +
                          std::to_string(algebra_.dim()) + " coordinates, got " +
                          std::to_string(coords_.size()));
  }
}

Element& Element::operator+=(const Element& other) {
  if (!(algebra_ == other.algebra_)) throw AlgebraMismatch("operands from different algebras");
  coords_ += other.coords_;
  return *this;
}

Element& Element::operator-=(const Element& other) {
  if (!(algebra_ == other.algebra_)) throw AlgebraMismatch("operands from different algebras");
  coords_ -= other.coords_;
  return *this;
}

Element& Element::operator*=(double s) {
  coords_ *= s;
  return *this;
}

Element LinearOperator::apply(const Element& x) const {
  if (!(x.algebra() == algebra)) throw AlgebraMismatch("operator applied to foreign element");
  return Element(algebra, matrix * x.coords());
}

double LinearOperator::determinant() const { return matrix.determinant(); }

Element SpectralDecomposition::reconstruct() const {
  Element out = zero(idempotents.front().algebra());
  for (std::size_t i = 0; i < idempotents.size(); ++i) out += eigenvalues[i] * idempotents[i];
  return out;
}

Element identity(const AlgebraDescriptor& alg) {
  VectorXd c = VectorXd::Zero(alg.dim());
  if (alg.kind() == AlgebraKind::Lorentz) {
    c[0] = 1.0;
  } else {
    c.head(alg.rank()).setOnes();
  }
  return Element(alg, std::move(c));
}

Element zero(const AlgebraDescriptor& alg) { return Element(alg, VectorXd::Zero(alg.dim())); }

Element diagonal(const AlgebraDescriptor& alg, const std::vector<double>& values) {
  if (!alg.is_matrix_kind()) throw InvalidArgument("diagonal elements need a matrix algebra");
  if (static_cast<int>(values.size()) != alg.rank()) {
    throw InvalidArgument("diagonal needs exactly rank values");
  }
  VectorXd c = VectorXd::Zero(alg.dim());
  for (int i = 0; i < alg.rank(); ++i) c[i] = values[i];
  return Element(alg, std::move(c));
}

void require_same_algebra(const Element& x, const Element& y) {
  if (!(x.algebra() == y.algebra())) {
    throw AlgebraMismatch(x.algebra().label() + " vs " + y.algebra().label());
  }
}

Element jordan_product(const Element& x, const Element& y) {
  require_same_algebra(x, y);
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::Lorentz:
      return lorentz_product(x, y);
    case AlgebraKind::SymReal: {
      const MatrixXd a = to_dense<double>(x);
      const MatrixXd b = to_dense<double>(y);
      return from_dense<double>(alg, 0.5 * (a * b + b * a));
    }
    case AlgebraKind::HermComplex: {
      const MatrixXcd a = to_dense<cd>(x);
      const MatrixXcd b = to_dense<cd>(y);
      return from_dense<cd>(alg, 0.5 * (a * b + b * a));
    }
  }
  throw Error("unreachable");
}

Element square(const Element& x) { return jordan_product(x, x); }

LinearOperator lmap(const Element& x) {
  const auto& alg = x.algebra();
  const int n = alg.dim();
  MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) {
    m.col(k) = jordan_product(x, Element(alg, VectorXd::Unit(n, k))).coords();
  }
  return {alg, std::move(m)};
}

LinearOperator quad_rep(const Element& x) {
  const MatrixXd l = lmap(x).matrix;
  MatrixXd p = 2.0 * l * l - lmap(square(x)).matrix;
  return {x.algebra(), std::move(p)};
}

Element quad_apply(const Element& x, const Element& y) {
  require_same_algebra(x, y);
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::Lorentz:
      return 2.0 * jordan_product(x, jordan_product(x, y)) - jordan_product(square(x), y);
    case AlgebraKind::SymReal: {
      const MatrixXd a = to_dense<double>(x);
      return from_dense<double>(alg, a * to_dense<double>(y) * a);
    }
    case AlgebraKind::HermComplex: {
      const MatrixXcd a = to_dense<cd>(x);
      return from_dense<cd>(alg, a * to_dense<cd>(y) * a);
    }
  }
  throw Error("unreachable");
}

SpectralDecomposition spectral_decomposition(const Element& x) {
  switch (x.algebra().kind()) {
    case AlgebraKind::Lorentz:
      return lorentz_spectral(x);
    case AlgebraKind::SymReal:
      return matrix_spectral<double>(x);
    case AlgebraKind::HermComplex:
      return matrix_spectral<cd>(x);
  }
  throw Error("unreachable");
}

Eigen::VectorXd eigenvalues(const Element& x) {
  const auto& alg = x.algebra();
  switch (alg.kind()) {
    case AlgebraKind::Lorentz: {
      const double s = x.coords().tail(alg.dim() - 1).norm();
      VectorXd out(2);
      out << x[0] + s, x[0] - s;
      return out;
    }
    case AlgebraKind::SymReal: {
      Eigen::SelfAdjointEigenSolver<MatrixXd> solver(to_dense<double>(x), Eigen::EigenvaluesOnly);
      return solver.eigenvalues().reverse();
    }
    case AlgebraKind::HermComplex: {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(to_dense<cd>(x), Eigen::EigenvaluesOnly);
      return solver.eigenvalues().reverse();
    }
  }
  throw Error("unreachable");
}

double trace(const Element& x) { return eigenvalues(x).sum(); }

double det(const Element& x) { return eigenvalues(x).prod(); }

double log_det(const Element& x) {
  const VectorXd eig = eigenvalues(x);
  if (eig.minCoeff() <= 0.0) throw NotInCone("log_det of element outside the cone");
  return eig.array().log().sum();
}

double inner(const Element& x, const Element& y) {
  require_same_algebra(x, y);
  const double dot = x.coords().dot(y.coords());
  return x.algebra().kind() == AlgebraKind::Lorentz ? 2.0 * dot : dot;
}

double norm(const Element& x) { return std::sqrt(inner(x, x)); }

double singularity_threshold(const Eigen::VectorXd& eigenvalues) {
  return 1e-12 * (1.0 + eigenvalues.cwiseAbs().maxCoeff());
}

Element spectral_map(const Element& x, const std::function<double(double)>& f) {
  const auto sd = spectral_decomposition(x);
  Element out = zero(x.algebra());
  for (int i = 0; i < sd.eigenvalues.size(); ++i) out += f(sd.eigenvalues[i]) * sd.idempotents[i];
  return out;
}

Element inverse(const Element& x, std::optional<double> threshold) {
  const auto sd = spectral_decomposition(x);
  const double cutoff = threshold.value_or(singularity_threshold(sd.eigenvalues));
  if (sd.eigenvalues.cwiseAbs().minCoeff() <= cutoff) {
    throw SingularElement("element is not invertible (min |eigenvalue| <= " +
                          std::to_string(cutoff) + ")");
  }
  Element out = zero(x.algebra());
  for (int i = 0; i < sd.eigenvalues.size(); ++i) out += (1.0 / sd.eigenvalues[i]) * sd.idempotents[i];
  return out;
}

Element sqrt(const Element& x) {
  const auto sd = spectral_decomposition(x);
  if (sd.eigenvalues.minCoeff() <= 0.0) throw NotInCone("sqrt of element outside the open cone");
  Element out = zero(x.algebra());
  for (int i = 0; i < sd.eigenvalues.size(); ++i) {
    out += std::sqrt(sd.eigenvalues[i]) * sd.idempotents[i];
  }
  return out;
}

bool in_cone(const Element& x, double tol) { return eigenvalues(x).minCoeff() > tol; }

bool in_cone(const Element& x) {
  const VectorXd eig = eigenvalues(x);
  return eig.minCoeff() > singularity_threshold(eig);
}

void require_in_cone(const Element& x, std::string_view what) {
  if (!in_cone(x)) throw NotInCone(std::string(what) + " is not in the open cone");
}

Eigen::MatrixXcd to_matrix(const Element& x) {
  if (!x.algebra().is_matrix_kind()) throw InvalidArgument("to_matrix needs a matrix algebra");
  return to_dense<cd>(x);
}

Element from_matrix(const AlgebraDescriptor& alg, const Eigen::MatrixXcd& m) {
  if (!alg.is_matrix_kind()) throw InvalidArgument("from_matrix needs a matrix algebra");
  if (m.rows() != alg.rank() || m.cols() != alg.rank()) {
    throw InvalidArgument("matrix size does not match algebra rank");
  }
  return from_dense<cd>(alg, m);
}

}  // namespace symcone
