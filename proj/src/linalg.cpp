#include "spectral/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace spectral {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw std::domain_error("HermitianOperator: matrix must be square and nonempty");
  if (!all_finite(m_))
    throw std::domain_error("HermitianOperator: entries must be finite");
  const double scale = 1.0 + m_.cwiseAbs().maxCoeff();
  const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * scale)
    throw std::domain_error("HermitianOperator: matrix is not Hermitian");
  // symmetrize so downstream identities hold exactly
  m_ = ((m_ + m_.adjoint()) / 2.0).eval();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw std::domain_error("operator_norm: empty matrix");
  if (!all_finite(m))
    throw std::domain_error("operator_norm: entries must be finite");
  // Gram matrix of the smaller side keeps the eigenproblem minimal.
  ComplexMatrix g;
  if (m.rows() <= m.cols())
    g = m * m.adjoint();
  else
    g = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

ComplexMatrix commutator(const ComplexMatrix& d, const ComplexMatrix& a) {
  if (d.rows() != d.cols() || a.rows() != a.cols() || d.rows() != a.rows())
    throw std::domain_error("commutator: dimension mismatch");
  return d * a - a * d;
}

ComplexMatrix commutator(const HermitianOperator& d, const HermitianOperator& a) {
  return commutator(d.matrix(), a.matrix());
}

std::vector<RealVector> kernel_basis(const std::vector<ComplexMatrix>& images) {
  const int p = static_cast<int>(images.size());
  if (p == 0) return {};
  const Eigen::Index rows = images[0].rows();
  const Eigen::Index cols = images[0].cols();
  RealMatrix stacked(2 * rows * cols, p);
  for (int k = 0; k < p; ++k) {
    if (images[k].rows() != rows || images[k].cols() != cols)
      throw std::domain_error("kernel_basis: inconsistent image shapes");
    Eigen::Index r = 0;
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) {
        stacked(r++, k) = images[k](i, j).real();
        stacked(r++, k) = images[k](i, j).imag();
      }
  }
  Eigen::JacobiSVD<RealMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double thresh = 1e-10 * smax;
  std::vector<RealVector> basis;
  for (int k = 0; k < p; ++k) {
    const double s = k < sv.size() ? sv(k) : 0.0;
    if (s <= thresh) basis.push_back(svd.matrixV().col(k));
  }
  return basis;
}

}  // namespace spectral
