#pragma once

#include "spectral/metric.hpp"
#include "spectral/rng.hpp"
#include "spectral/transport.hpp"
#include "spectral/triple.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace spectral {

/// Couplings of the three-point triple's Dirac operator.
struct C3Params {
  double alpha = 1.0;
  double beta = 1.0;
};

/// The C^3 triple on C^3: diagonal representation, Dirac with entries
/// alpha at (1,3)/(3,1) and beta at (2,3)/(3,2).
FiniteSpectralTriple c3_triple(const C3Params& p);

/// Same triple with alpha = 0: the first point is metrically disconnected.
/// Kept separate so C3Params can insist on positive couplings.
FiniteSpectralTriple c3_triple_alpha_zero(double beta);

/// Closed forms for states differing by (lam1, lam2) on the first two
/// weights, same sign: returns (W, d) = (|L1|/a + |L2|/b, sqrt(L1^2/a^2 + L2^2/b^2)).
std::pair<double, double> prop1_closed_forms(const C3Params& p, double lam1, double lam2);

struct ComparisonReport {
  double alpha = 0.0, beta = 0.0;
  double lam1 = 0.0, lam2 = 0.0;
  double d_value = 0.0, w_value = 0.0;
  double gap = 0.0;  // w_value - d_value
  std::optional<double> closed_form_d, closed_form_w;
  bool pass_w = true, pass_d = true, pass_hypotenuse = true;

  bool pass() const { return pass_w && pass_d && pass_hypotenuse; }
};

/// Default same-sign difference grid: (L1, L2) in {0, 0.05, ..., 0.45}^2.
std::vector<std::pair<double, double>> default_lambda_grid();

/// Checks the closed forms against the numerical solvers on each grid pair.
std::vector<ComparisonReport> verify_prop1(
    const C3Params& p, const std::vector<std::pair<double, double>>& grid,
    double tol = 1e-4, const SolverOptions& opts = {});

struct InequalityReport {
  long trials = 0;
  std::uint64_t seed = 0;
  long violations = 0;
  double max_gap = 0.0;    // largest w - d observed
  double min_slack = 0.0;  // smallest w - d observed
  std::vector<double> worst_phi, worst_psi;  // pair attaining min_slack

  bool pass() const { return violations == 0; }
};

/// Random state pairs on a commutative triple (uniform on the simplex via
/// normalized exponentials), asserting d <= W + 1e-6 on each.
InequalityReport verify_inequality(const FiniteSpectralTriple& triple, long trials,
                                   std::uint64_t seed, const SolverOptions& opts = {});

struct M2ProbeResult {
  double d = 0.0;
  double w_grid = 0.0;
  int support_size = 0;
};

/// Compares the spectral distance on (M_2, C^2, D) against a discretized
/// Wasserstein distance. The commutator kernel always contains the Dirac
/// Bloch axis, so finite distances live on states of equal axis component;
/// the probe therefore samples N points on the great circle orthogonal to
/// that axis (plus the exact eigen-atoms of both states) and picks the
/// cheapest representing measures supported there via a small LP. Any valid
/// measure pair upper-bounds the spectral distance, so w_grid >= d always,
/// and the gap shrinks as N grows.
M2ProbeResult m2_equality_probe(const HermitianOperator& dirac, const State& rho1,
                                const State& rho2, int n_samples,
                                const SolverOptions& opts = {});

/// Uniform random state on the simplex of a commutative algebra.
State random_simplex_state(int n, Rng& rng);

/// Commutative triple with unit multiplicities and a dense random
/// Hermitian Dirac operator.
FiniteSpectralTriple random_commutative_triple(int n, Rng& rng);

/// Bloch 3-vector of a 2x2 Hermitian matrix h = c0*I + bloch.sigma.
RealVector bloch_vector(const ComplexMatrix& h);

/// Pure M_2 state with the given Bloch 3-vector (must be unit length).
State bloch_state(const RealVector& b);

}  // namespace spectral
