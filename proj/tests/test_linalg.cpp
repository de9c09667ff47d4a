#include "spectral/linalg.hpp"
#include "spectral/rng.hpp"

#include <Eigen/SVD>
#include <doctest.h>

using namespace spectral;

namespace {

ComplexMatrix random_matrix(int rows, int cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(rng.gaussian(), rng.gaussian());
  return m;
}

ComplexMatrix random_hermitian(int n, Rng& rng) {
  ComplexMatrix m = random_matrix(n, n, rng);
  return ComplexMatrix(0.5 * (m + m.adjoint()));
}

}  // namespace

TEST_CASE("operator_norm matches a full SVD") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_matrix(5, 7, rng);
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const double ref = svd.singularValues()(0);
    CHECK(operator_norm(m) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("operator_norm basics") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(operator_norm(d) == doctest::Approx(4.0));
  CHECK(operator_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK_THROWS_AS(operator_norm(ComplexMatrix(0, 0)), std::domain_error);
}

TEST_CASE("HermitianOperator validates and symmetrizes") {
  Rng rng(12);
  CHECK_THROWS_AS(HermitianOperator(random_matrix(3, 3, rng)), std::domain_error);
  CHECK_THROWS_AS(HermitianOperator(random_matrix(2, 3, rng)), std::domain_error);

  ComplexMatrix h = random_hermitian(4, rng);
  h(0, 1) += Complex(1e-15, -1e-15);  // within tolerance
  HermitianOperator op(h);
  CHECK((op.matrix() - op.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(op.dim() == 4);
}

TEST_CASE("commutator identities") {
  Rng rng(13);
  const ComplexMatrix d = random_hermitian(4, rng);
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  CHECK(commutator(d, id).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-14));

  const ComplexMatrix a = random_hermitian(4, rng);
  const ComplexMatrix k = commutator(d, a);
  // [D, a] is skew-Hermitian for Hermitian D and a
  CHECK((k + k.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(commutator(d, random_hermitian(3, rng)), std::domain_error);
}

TEST_CASE("kernel_basis finds the commutant directions") {
  // Dirac on C^3 coupling only points 2 and 3 (first point disconnected)
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(1, 2) = d(2, 1) = 1.0;

  std::vector<ComplexMatrix> images;
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(3, 3);
    e(i, i) = 1.0;
    images.push_back(d * e - e * d);
  }
  const auto kernel = kernel_basis(images);
  REQUIRE(kernel.size() == 2);
  for (const auto& v : kernel) {
    CHECK(v.norm() == doctest::Approx(1.0));
    ComplexMatrix img = ComplexMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) img += v(i) * images[i];
    CHECK(img.cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(std::abs(kernel[0].dot(kernel[1])) < 1e-10);

  // the kernel is span{(1,0,0), (0,1,1)/sqrt(2)}: check both by projection
  RealVector e1(3), s23(3);
  e1 << 1, 0, 0;
  s23 << 0, 1, 1;
  s23.normalize();
  for (const RealVector& target : {e1, s23}) {
    RealVector proj = RealVector::Zero(3);
    for (const auto& v : kernel) proj += v.dot(target) * v;
    CHECK((proj - target).norm() < 1e-10);
  }
}

TEST_CASE("kernel_basis on a connected triple is the unit direction") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 2) = d(2, 0) = 1.0;
  d(1, 2) = d(2, 1) = 2.0;
  std::vector<ComplexMatrix> images;
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(3, 3);
    e(i, i) = 1.0;
    images.push_back(d * e - e * d);
  }
  const auto kernel = kernel_basis(images);
  REQUIRE(kernel.size() == 1);
  RealVector unit(3);
  unit << 1, 1, 1;
  unit.normalize();
  CHECK(std::abs(std::abs(kernel[0].dot(unit)) - 1.0) < 1e-12);
}
