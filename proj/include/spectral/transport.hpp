#pragma once

#include "spectral/metric.hpp"
#include "spectral/triple.hpp"

#include <optional>

namespace spectral {

struct TransportPlan {
  RealMatrix pi;  // n x n nonnegative, row sums mu, column sums nu
  RealVector mu;
  RealVector nu;
};

struct DualPotential {
  RealVector f;  // f_i - f_j <= c_ij on finite-cost pairs; min f = 0
};

struct PrimalResult {
  double value = 0.0;  // +infinity when every feasible plan crosses an
                       // infinite-cost edge
  TransportPlan plan;
};

struct DualResult {
  double value = 0.0;
  DualPotential potential;
};

/// Minimal transport cost between mu and nu under the given cost matrix,
/// solved by the transportation simplex. Infinite-cost cells are excluded
/// from optimal plans exactly (big-M with a rerouting bound); the result is
/// +infinity iff no feasible plan avoids them.
PrimalResult wasserstein_primal(const CostMatrix& cost, const RealVector& mu,
                                const RealVector& nu);

/// Kantorovich dual: max sum f_i (mu_i - nu_i) over 1-Lipschitz potentials.
/// Requires all costs finite; equals the primal value on finite spaces.
DualResult kantorovich_dual(const CostMatrix& cost, const RealVector& mu,
                            const RealVector& nu);

struct SpectralWassersteinResult {
  double value = 0.0;
  TransportPlan plan;
  std::optional<DualPotential> potential;  // absent when the cost has infinities
};

/// Wasserstein-1 distance with cost the pure-state spectral distances of a
/// commutative triple.
SpectralWassersteinResult spectral_wasserstein(const FiniteSpectralTriple& triple,
                                               const State& phi, const State& psi,
                                               const SolverOptions& opts = {});

}  // namespace spectral
