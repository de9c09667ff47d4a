#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace spectral {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// True when every entry of m is finite (no NaN/Inf in either component).
bool all_finite(const ComplexMatrix& m);

/// A square matrix validated to be Hermitian at construction and trusted
/// afterwards. Tolerance: 1e-12 relative to the largest entry magnitude.
class HermitianOperator {
public:
  explicit HermitianOperator(ComplexMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

private:
  ComplexMatrix m_;
};

/// Largest singular value of m. Computed from the eigendecomposition of
/// M†M (or MM†, whichever is smaller); fine for the dense desk-scale
/// matrices this library handles.
double operator_norm(const ComplexMatrix& m);

/// DA - AD.
ComplexMatrix commutator(const ComplexMatrix& d, const ComplexMatrix& a);
ComplexMatrix commutator(const HermitianOperator& d, const HermitianOperator& a);

/// Orthonormal basis of the kernel of a real-linear map into matrix space,
/// given as its images on the standard basis of the parameter space.
/// Singular values below 1e-10 times the largest one count as zero.
std::vector<RealVector> kernel_basis(const std::vector<ComplexMatrix>& images);

}  // namespace spectral
