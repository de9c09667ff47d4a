#include "spectral/triple.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spectral {

FiniteAlgebra FiniteAlgebra::commutative(int n) {
  std::vector<std::vector<int>> slots(n);
  for (int i = 0; i < n; ++i) slots[i] = {i};
  return commutative(n, std::move(slots));
}

FiniteAlgebra FiniteAlgebra::commutative(int n, std::vector<std::vector<int>> slots) {
  if (n <= 0) throw std::domain_error("FiniteAlgebra: n must be positive");
  if (static_cast<int>(slots.size()) != n)
    throw std::domain_error("FiniteAlgebra: one slot set per coordinate required");
  int total = 0;
  for (const auto& s : slots) {
    if (s.empty()) throw std::domain_error("FiniteAlgebra: slot sets must be nonempty");
    total += static_cast<int>(s.size());
  }
  std::vector<bool> seen(total, false);
  for (const auto& s : slots)
    for (int idx : s) {
      if (idx < 0 || idx >= total || seen[idx])
        throw std::domain_error("FiniteAlgebra: slots must partition the Hilbert space");
      seen[idx] = true;
    }
  FiniteAlgebra alg;
  alg.kind = AlgebraKind::Commutative;
  alg.n = n;
  alg.slots = std::move(slots);
  return alg;
}

FiniteAlgebra FiniteAlgebra::full_matrix(int n) {
  if (n <= 0) throw std::domain_error("FiniteAlgebra: n must be positive");
  FiniteAlgebra alg;
  alg.kind = AlgebraKind::FullMatrix;
  alg.n = n;
  return alg;
}

int FiniteAlgebra::dim_h() const {
  if (kind == AlgebraKind::FullMatrix) return n;
  int total = 0;
  for (const auto& s : slots) total += static_cast<int>(s.size());
  return total;
}

FiniteSpectralTriple::FiniteSpectralTriple(FiniteAlgebra alg, HermitianOperator d)
    : algebra(std::move(alg)), dirac(std::move(d)) {
  if (dirac.dim() != algebra.dim_h())
    throw std::domain_error("FiniteSpectralTriple: Dirac dimension must equal dim H");
}

AlgebraElement AlgebraElement::diagonal(std::vector<Complex> z) {
  if (z.empty()) throw std::domain_error("AlgebraElement: empty coordinate vector");
  for (const auto& c : z)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::domain_error("AlgebraElement: entries must be finite");
  AlgebraElement e;
  e.kind_ = AlgebraKind::Commutative;
  e.z_ = std::move(z);
  return e;
}

AlgebraElement AlgebraElement::matrix(ComplexMatrix a) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw std::domain_error("AlgebraElement: matrix must be square and nonempty");
  if (!all_finite(a)) throw std::domain_error("AlgebraElement: entries must be finite");
  AlgebraElement e;
  e.kind_ = AlgebraKind::FullMatrix;
  e.a_ = std::move(a);
  return e;
}

AlgebraElement AlgebraElement::unit(const FiniteAlgebra& alg) {
  if (alg.kind == AlgebraKind::Commutative)
    return diagonal(std::vector<Complex>(alg.n, Complex(1.0, 0.0)));
  return matrix(ComplexMatrix::Identity(alg.n, alg.n));
}

AlgebraElement AlgebraElement::zero(const FiniteAlgebra& alg) {
  if (alg.kind == AlgebraKind::Commutative)
    return diagonal(std::vector<Complex>(alg.n, Complex(0.0, 0.0)));
  return matrix(ComplexMatrix::Zero(alg.n, alg.n));
}

int AlgebraElement::n() const {
  return kind_ == AlgebraKind::Commutative ? static_cast<int>(z_.size())
                                           : static_cast<int>(a_.rows());
}

const std::vector<Complex>& AlgebraElement::coords() const {
  if (kind_ != AlgebraKind::Commutative)
    throw std::domain_error("AlgebraElement: not a diagonal element");
  return z_;
}

const ComplexMatrix& AlgebraElement::mat() const {
  if (kind_ != AlgebraKind::FullMatrix)
    throw std::domain_error("AlgebraElement: not a matrix element");
  return a_;
}

bool AlgebraElement::is_self_adjoint(double tol) const {
  if (kind_ == AlgebraKind::Commutative) {
    for (const auto& c : z_)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }
  const double scale = 1.0 + a_.cwiseAbs().maxCoeff();
  return (a_ - a_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

State State::probability(std::vector<double> weights) {
  if (weights.empty()) throw std::domain_error("State: empty weight vector");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < -1e-12)
      throw std::domain_error("State: weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::domain_error("State: weights must sum to 1");
  for (double& w : weights) w = std::max(w, 0.0);
  State s;
  s.kind_ = AlgebraKind::Commutative;
  s.w_ = std::move(weights);
  return s;
}

State State::density(HermitianOperator rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::domain_error("State: density matrix must be positive semidefinite");
  if (std::abs(rho.matrix().trace().real() - 1.0) > 1e-12)
    throw std::domain_error("State: density matrix must have unit trace");
  State s;
  s.kind_ = AlgebraKind::FullMatrix;
  s.rho_ = std::move(rho);
  return s;
}

int State::n() const {
  return kind_ == AlgebraKind::Commutative ? static_cast<int>(w_.size()) : rho_->dim();
}

const std::vector<double>& State::weights() const {
  if (kind_ != AlgebraKind::Commutative)
    throw std::domain_error("State: not a probability state");
  return w_;
}

const ComplexMatrix& State::rho() const {
  if (kind_ != AlgebraKind::FullMatrix)
    throw std::domain_error("State: not a density-matrix state");
  return rho_->matrix();
}

ComplexMatrix represent(const FiniteSpectralTriple& triple, const AlgebraElement& a) {
  const FiniteAlgebra& alg = triple.algebra;
  if (a.kind() != alg.kind || a.n() != alg.n)
    throw std::domain_error("represent: element does not belong to the algebra");
  if (alg.kind == AlgebraKind::FullMatrix) return a.mat();
  ComplexMatrix m = ComplexMatrix::Zero(alg.dim_h(), alg.dim_h());
  for (int i = 0; i < alg.n; ++i)
    for (int slot : alg.slots[i]) m(slot, slot) = a.coords()[i];
  return m;
}

Complex evaluate(const State& state, const AlgebraElement& a) {
  if (state.kind() != a.kind() || state.n() != a.n())
    throw std::domain_error("evaluate: state and element do not share an algebra");
  if (state.kind() == AlgebraKind::Commutative) {
    Complex acc(0.0, 0.0);
    for (int i = 0; i < state.n(); ++i) acc += state.weights()[i] * a.coords()[i];
    return acc;
  }
  return (state.rho() * a.mat()).trace();
}

State pure_state(const FiniteSpectralTriple& triple, int i) {
  if (triple.algebra.kind != AlgebraKind::Commutative)
    throw std::domain_error("pure_state: use bloch_pure for matrix algebras");
  if (i < 0 || i >= triple.algebra.n)
    throw std::domain_error("pure_state: index out of range");
  std::vector<double> w(triple.algebra.n, 0.0);
  w[i] = 1.0;
  return State::probability(std::move(w));
}

State bloch_pure(double theta, double phi) {
  const double x = std::sin(theta) * std::cos(phi);
  const double y = std::sin(theta) * std::sin(phi);
  const double z = std::cos(theta);
  ComplexMatrix rho(2, 2);
  rho(0, 0) = Complex(0.5 * (1.0 + z), 0.0);
  rho(1, 1) = Complex(0.5 * (1.0 - z), 0.0);
  rho(0, 1) = Complex(0.5 * x, -0.5 * y);
  rho(1, 0) = Complex(0.5 * x, 0.5 * y);
  return State::density(HermitianOperator(std::move(rho)));
}

State mix(double lam, const State& s1, const State& s2) {
  if (s1.kind() != s2.kind() || s1.n() != s2.n())
    throw std::domain_error("mix: states do not share an algebra");
  if (lam < -1e-12 || lam > 1.0 + 1e-12)
    throw std::domain_error("mix: lambda must lie in [0,1]");
  lam = std::clamp(lam, 0.0, 1.0);
  if (s1.kind() == AlgebraKind::Commutative) {
    std::vector<double> w(s1.n());
    for (int i = 0; i < s1.n(); ++i)
      w[i] = lam * s1.weights()[i] + (1.0 - lam) * s2.weights()[i];
    return State::probability(std::move(w));
  }
  ComplexMatrix rho = lam * s1.rho() + (1.0 - lam) * s2.rho();
  return State::density(HermitianOperator(std::move(rho)));
}

}  // namespace spectral
