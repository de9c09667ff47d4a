#pragma once

#include "spectral/linalg.hpp"

#include <optional>
#include <vector>

namespace spectral {

enum class AlgebraKind { Commutative, FullMatrix };

/// Either the commutative algebra C^n acting diagonally (each coordinate
/// occupying a set of Hilbert-space slots) or a single full matrix block
/// M_n(C) in the identity representation.
struct FiniteAlgebra {
  AlgebraKind kind;
  int n;  // coordinate count (Commutative) or block size (FullMatrix)
  std::vector<std::vector<int>> slots;  // Commutative only, 0-based

  static FiniteAlgebra commutative(int n);  // unit multiplicities
  static FiniteAlgebra commutative(int n, std::vector<std::vector<int>> slots);
  static FiniteAlgebra full_matrix(int n);

  int dim_h() const;
  bool operator==(const FiniteAlgebra&) const = default;
};

struct FiniteSpectralTriple {
  FiniteAlgebra algebra;
  HermitianOperator dirac;

  FiniteSpectralTriple(FiniteAlgebra alg, HermitianOperator d);
  int dim_h() const { return algebra.dim_h(); }
};

/// An algebra element: a coordinate vector for the commutative case, a full
/// matrix for the matrix case. Self-adjointness is tracked lazily.
class AlgebraElement {
public:
  static AlgebraElement diagonal(std::vector<Complex> z);
  static AlgebraElement matrix(ComplexMatrix a);
  static AlgebraElement unit(const FiniteAlgebra& alg);
  static AlgebraElement zero(const FiniteAlgebra& alg);

  AlgebraKind kind() const { return kind_; }
  int n() const;
  const std::vector<Complex>& coords() const;
  const ComplexMatrix& mat() const;
  bool is_self_adjoint(double tol = 1e-12) const;

private:
  AlgebraElement() = default;
  AlgebraKind kind_ = AlgebraKind::Commutative;
  std::vector<Complex> z_;
  ComplexMatrix a_;
};

/// A state: probability weights over the n pure states (commutative case)
/// or a density matrix (matrix case). Validated on construction.
class State {
public:
  static State probability(std::vector<double> weights);
  static State density(HermitianOperator rho);

  AlgebraKind kind() const { return kind_; }
  int n() const;
  const std::vector<double>& weights() const;
  const ComplexMatrix& rho() const;

private:
  State() = default;
  AlgebraKind kind_ = AlgebraKind::Commutative;
  std::vector<double> w_;
  std::optional<HermitianOperator> rho_;
};

/// Representation of an algebra element on the triple's Hilbert space.
ComplexMatrix represent(const FiniteSpectralTriple& triple, const AlgebraElement& a);

/// phi(a): weighted coordinate sum (commutative) or trace(rho a) (matrix).
Complex evaluate(const State& state, const AlgebraElement& a);

/// The i-th pure state delta_i of a commutative algebra (0-based).
State pure_state(const FiniteSpectralTriple& triple, int i);

/// Rank-1 density matrix at Bloch angles (theta, phi) on M_2(C).
State bloch_pure(double theta, double phi);

/// Convex combination lam*s1 + (1-lam)*s2 of two states of the same kind.
State mix(double lam, const State& s1, const State& s2);

}  // namespace spectral
