#pragma once

#include "spectral/triple.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectral {

struct SolverOptions {
  double tol = 1e-6;        // absolute tolerance on the distance value
  long max_iter = 50000;    // cap on subgradient iterations + polish evals
  double polish_tol = 1e-9; // parameter-space tolerance of the final polish
};

/// Thrown when the distance solver exhausts its iteration budget. Carries
/// the best certified lower bound reached so far.
struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(std::string msg, double best, long iters)
      : std::runtime_error(std::move(msg)), best_value(best), iterations(iters) {}
  double best_value;
  long iterations;
};

struct DistanceResult {
  double value = 0.0;  // +infinity when the states are metrically disconnected
  std::optional<AlgebraElement> witness;  // absent when infinite
  long iterations = 0;
  double certified_gap = 0.0;

  bool is_infinite() const { return std::isinf(value); }
};

/// Symmetric pairwise-distance matrix with zero diagonal; +infinity entries
/// mark disconnected pairs. The triangle inequality is validated on all
/// finite triples at construction.
class CostMatrix {
public:
  explicit CostMatrix(RealMatrix entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const RealMatrix& entries() const { return entries_; }
  bool has_infinite() const;

private:
  RealMatrix entries_;
};

/// Spectral distance between two states: the supremum of |phi(a) - psi(a)|
/// over self-adjoint algebra elements with commutator norm at most 1.
///
/// The unit direction is gauged away, metric disconnection is detected
/// algebraically from the kernel of z -> [D, pi(z)] before any iteration,
/// and the remaining problem is solved as the equivalent min-norm convex
/// program on the hyperplane (phi - psi)(z) = 1.
DistanceResult spectral_distance(const FiniteSpectralTriple& triple, const State& phi,
                                 const State& psi, const SolverOptions& opts = {});

/// Pairwise spectral distances between the pure states of a commutative
/// triple. Unordered pairs are computed once (possibly concurrently).
CostMatrix cost_matrix(const FiniteSpectralTriple& triple, const SolverOptions& opts = {});

/// Pairwise spectral distances between explicitly listed pure states of a
/// matrix-algebra triple. Each state must be rank one.
CostMatrix sampled_cost_matrix(const FiniteSpectralTriple& triple,
                               const std::vector<State>& pure_states,
                               const SolverOptions& opts = {});

namespace detail {
/// Self-adjoint basis of the algebra's real parameter space: coordinate
/// indicators (commutative) or Hermitian matrix units (full matrix).
std::vector<AlgebraElement> self_adjoint_basis(const FiniteAlgebra& alg);
AlgebraElement element_from_params(const FiniteAlgebra& alg, const RealVector& z);
int param_count(const FiniteAlgebra& alg);
}  // namespace detail

}  // namespace spectral
