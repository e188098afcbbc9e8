#include <cmath>

#include "doctest.h"
#include "symcone/errors.hpp"
#include "symcone/jordan_algebra.hpp"
#include "symcone/my_transform.hpp"
#include "symcone/random.hpp"

using namespace symcone;

namespace {

const AlgebraDescriptor kScalar = AlgebraDescriptor::sym_real(1);
const AlgebraDescriptor kSym2 = AlgebraDescriptor::sym_real(2);

Element scalar(double v) { return Element(kScalar, Eigen::VectorXd::Constant(1, v)); }

void check_close(const Element& x, const Element& y, double tol = 1e-12) {
  REQUIRE(x.algebra() == y.algebra());
  CHECK((x.coords() - y.coords()).norm() <= tol * (1.0 + y.coords().norm()));
}

std::vector<AlgebraDescriptor> algebras() {
  return {AlgebraDescriptor::sym_real(1), AlgebraDescriptor::sym_real(2),
          AlgebraDescriptor::sym_real(3), AlgebraDescriptor::herm_complex(2),
          AlgebraDescriptor::herm_complex(3), AlgebraDescriptor::lorentz(2),
          AlgebraDescriptor::lorentz(4)};
}

}  // namespace

TEST_CASE("my_map examples") {
  const ConePair s = my_map(scalar(1), scalar(1));
  CHECK(s.first()[0] == doctest::Approx(0.5));
  CHECK(s.second()[0] == doctest::Approx(0.5));

  for (const auto& alg : algebras()) {
    const Element e = identity(alg);
    const ConePair uv = my_map(e, e);
    check_close(uv.first(), 0.5 * e);
    check_close(uv.second(), 0.5 * e);
  }

  const ConePair d = my_map(diagonal(kSym2, {1, 2}), diagonal(kSym2, {1, 1}));
  check_close(d.first(), diagonal(kSym2, {0.5, 1.0 / 3.0}));
  check_close(d.second(), diagonal(kSym2, {0.5, 1.0 / 6.0}));

  CHECK_THROWS_AS(my_map(diagonal(kSym2, {1, -1}), identity(kSym2)), NotInCone);
  CHECK_THROWS_AS(ConePair(identity(kSym2), diagonal(kSym2, {1, -1})), NotInCone);
}

TEST_CASE("hua examples") {
  CHECK(hua_rhs(scalar(1), scalar(1))[0] == doctest::Approx(0.5));
  for (const auto& alg : algebras()) {
    check_close(hua_rhs(identity(alg), identity(alg)), 0.5 * identity(alg));
  }
  const Element a = diagonal(kSym2, {2, 1});
  const Element b = diagonal(kSym2, {1, 3});
  check_close(hua_rhs(a, b), diagonal(kSym2, {1.0 / 6.0, 0.75}));
  check_close(hua_lhs(a, b), diagonal(kSym2, {1.0 / 6.0, 0.75}));
}

TEST_CASE("involution, hua and cone closure on random pairs") {
  Rng rng = make_stream(21, 0);
  for (const auto& alg : algebras()) {
    for (int t = 0; t < 200; ++t) {
      const Element x = random_cone_point(alg, rng);
      const Element y = random_cone_point(alg, rng);
      const ConePair uv = my_map(x, y);
      CHECK(in_cone(uv.first()));
      CHECK(in_cone(uv.second()));
      const ConePair back = my_map(uv.first(), uv.second());
      check_close(back.first(), x, 1e-9);
      check_close(back.second(), y, 1e-9);
      check_close(hua_rhs(x, y), hua_lhs(x, y), 1e-8);
    }
  }
}

TEST_CASE("jacobian formula examples") {
  CHECK(jacobian_det_formula(scalar(1), scalar(1)) == doctest::Approx(0.25));
  CHECK(jacobian_det_formula(identity(kSym2), identity(kSym2)) == doctest::Approx(1.0 / 64.0));
  CHECK(jacobian_det_numeric(scalar(1), scalar(1), {1e-5, false}) ==
        doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::exp(log_jacobian_det_formula(identity(kSym2), identity(kSym2))) ==
        doctest::Approx(1.0 / 64.0));
}

TEST_CASE("scalar jacobian against the hand-derived derivative") {
  // x = 1/(u+v), y = 1/u - 1/(u+v); |det| = 1/(u^2 (u+v)^2).
  for (double u : {0.3, 1.0, 2.5}) {
    for (double v : {0.4, 1.0, 3.0}) {
      const double expected = 1.0 / (u * u * (u + v) * (u + v));
      CHECK(jacobian_det_formula(scalar(u), scalar(v)) == doctest::Approx(expected));
      CHECK(jacobian_det_numeric(scalar(u), scalar(v)) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("derivative block of the first component is -P((u+v)^-1)") {
  Rng rng = make_stream(22, 0);
  for (const auto& alg : algebras()) {
    const Element u = random_cone_point_in_band(alg, rng, 0.2, 5.0);
    const Element v = random_cone_point_in_band(alg, rng, 0.2, 5.0);
    const Eigen::MatrixXd jac = my_map_jacobian_numeric(u, v);
    const Eigen::MatrixXd block = jac.topLeftCorner(alg.dim(), alg.dim());
    const Eigen::MatrixXd expected = -quad_rep(inverse(u + v)).matrix;
    CHECK((block - expected).cwiseAbs().maxCoeff() < 1e-5 * (1.0 + expected.norm()));
  }
}

TEST_CASE("jacobian formula agrees with finite differences") {
  Rng rng = make_stream(23, 0);
  for (const auto& alg : algebras()) {
    for (int t = 0; t < 100; ++t) {
      const Element u = random_cone_point_in_band(alg, rng, 0.2, 5.0);
      const Element v = random_cone_point_in_band(alg, rng, 0.2, 5.0);
      const JacobianComparison c = compare_jacobian(u, v, 1e-4);
      CHECK(c.formula > 0.0);
      CHECK(c.relative_error < 1e-4);
    }
  }
}
