#include "spectral/triple.hpp"

#include <doctest.h>

using namespace spectral;

TEST_CASE("FiniteAlgebra construction and validation") {
  CHECK(FiniteAlgebra::commutative(3).dim_h() == 3);
  CHECK(FiniteAlgebra::commutative(2, {{0, 2}, {1}}).dim_h() == 3);
  CHECK(FiniteAlgebra::full_matrix(2).dim_h() == 2);

  CHECK_THROWS_AS(FiniteAlgebra::commutative(0), std::domain_error);
  CHECK_THROWS_AS(FiniteAlgebra::commutative(2, {{0}}), std::domain_error);
  CHECK_THROWS_AS(FiniteAlgebra::commutative(2, {{0}, {0}}), std::domain_error);
  CHECK_THROWS_AS(FiniteAlgebra::commutative(2, {{0}, {}}), std::domain_error);
  CHECK_THROWS_AS(FiniteAlgebra::commutative(2, {{0}, {5}}), std::domain_error);
}

TEST_CASE("FiniteSpectralTriple checks dimensions") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  CHECK_NOTHROW(FiniteSpectralTriple(FiniteAlgebra::commutative(3), HermitianOperator(d)));
  CHECK_THROWS_AS(
      FiniteSpectralTriple(FiniteAlgebra::commutative(2), HermitianOperator(d)),
      std::domain_error);
}

TEST_CASE("AlgebraElement accessors and self-adjointness") {
  const auto alg = FiniteAlgebra::commutative(2);
  const auto u = AlgebraElement::unit(alg);
  CHECK(u.n() == 2);
  CHECK(u.is_self_adjoint());

  const auto z = AlgebraElement::diagonal({Complex(1, 0), Complex(0, 1)});
  CHECK_FALSE(z.is_self_adjoint());
  CHECK_THROWS_AS(z.mat(), std::domain_error);

  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(2, 0);
  const auto a = AlgebraElement::matrix(m);
  CHECK_FALSE(a.is_self_adjoint());
  CHECK_THROWS_AS(a.coords(), std::domain_error);
  CHECK(AlgebraElement::unit(FiniteAlgebra::full_matrix(2)).is_self_adjoint());
}

TEST_CASE("State validation") {
  CHECK_NOTHROW(State::probability({0.5, 0.5}));
  CHECK_THROWS_AS(State::probability({0.5, 0.4}), std::domain_error);
  CHECK_THROWS_AS(State::probability({1.5, -0.5}), std::domain_error);
  CHECK_THROWS_AS(State::probability({}), std::domain_error);

  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;
  CHECK_NOTHROW(State::density(HermitianOperator(rho)));
  rho(1, 1) = 0.5;
  CHECK_THROWS_AS(State::density(HermitianOperator(rho)), std::domain_error);
  rho(0, 0) = 1.5;
  rho(1, 1) = -0.5;
  CHECK_THROWS_AS(State::density(HermitianOperator(rho)), std::domain_error);
}

TEST_CASE("represent respects slot multiplicities") {
  const auto alg = FiniteAlgebra::commutative(2, {{0, 2}, {1}});
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  FiniteSpectralTriple triple(alg, HermitianOperator(d));
  const auto a = AlgebraElement::diagonal({Complex(2, 0), Complex(5, 0)});
  const ComplexMatrix m = represent(triple, a);
  CHECK(m(0, 0) == Complex(2, 0));
  CHECK(m(1, 1) == Complex(5, 0));
  CHECK(m(2, 2) == Complex(2, 0));
  CHECK(m.cwiseAbs().sum() == doctest::Approx(9.0));

  const auto wrong = AlgebraElement::diagonal({Complex(1, 0)});
  CHECK_THROWS_AS(represent(triple, wrong), std::domain_error);
}

TEST_CASE("evaluate on both algebra kinds") {
  const auto s = State::probability({0.25, 0.75});
  const auto a = AlgebraElement::diagonal({Complex(4, 0), Complex(8, 0)});
  CHECK(evaluate(s, a).real() == doctest::Approx(7.0));

  const auto rho = bloch_pure(0.0, 0.0);  // |0><0|
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -1.0;
  CHECK(evaluate(rho, AlgebraElement::matrix(m)).real() == doctest::Approx(3.0));

  CHECK_THROWS_AS(evaluate(s, AlgebraElement::matrix(m)), std::domain_error);
}

TEST_CASE("pure states and mixing") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  FiniteSpectralTriple triple(FiniteAlgebra::commutative(3), HermitianOperator(d));
  const auto d0 = pure_state(triple, 0);
  CHECK(d0.weights() == std::vector<double>{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(pure_state(triple, 3), std::domain_error);

  const auto d1 = pure_state(triple, 1);
  const auto m = mix(0.25, d0, d1);
  CHECK(m.weights()[0] == doctest::Approx(0.25));
  CHECK(m.weights()[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(mix(1.5, d0, d1), std::domain_error);
}

TEST_CASE("bloch_pure is a rank-one density matrix") {
  const auto s = bloch_pure(1.1, 2.3);
  const ComplexMatrix& rho = s.rho();
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  // rank one: rho^2 = rho
  CHECK((rho * rho - rho).cwiseAbs().maxCoeff() < 1e-12);
}
