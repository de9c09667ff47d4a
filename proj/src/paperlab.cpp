#include "spectral/paperlab.hpp"

#include "spectral/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spectral {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteSpectralTriple make_c3(double alpha, double beta) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 2) = d(2, 0) = Complex(alpha, 0.0);
  d(1, 2) = d(2, 1) = Complex(beta, 0.0);
  return FiniteSpectralTriple(FiniteAlgebra::commutative(3),
                              HermitianOperator(std::move(d)));
}
}  // namespace

FiniteSpectralTriple c3_triple(const C3Params& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw std::domain_error("c3_triple: couplings must be positive");
  return make_c3(p.alpha, p.beta);
}

FiniteSpectralTriple c3_triple_alpha_zero(double beta) {
  if (!(beta > 0.0)) throw std::domain_error("c3_triple_alpha_zero: beta must be positive");
  return make_c3(0.0, beta);
}

std::pair<double, double> prop1_closed_forms(const C3Params& p, double lam1, double lam2) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw std::domain_error("prop1_closed_forms: couplings must be positive");
  if (lam1 * lam2 < 0.0)
    throw std::domain_error(
        "prop1_closed_forms: differences must have the same sign (hypothesis)");
  const double w = std::abs(lam1) / p.alpha + std::abs(lam2) / p.beta;
  const double d = std::sqrt(lam1 * lam1 / (p.alpha * p.alpha) +
                             lam2 * lam2 / (p.beta * p.beta));
  return {w, d};
}

std::vector<std::pair<double, double>> default_lambda_grid() {
  std::vector<std::pair<double, double>> grid;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) grid.emplace_back(0.05 * i, 0.05 * j);
  return grid;
}

std::vector<ComparisonReport> verify_prop1(const C3Params& p,
                                           const std::vector<std::pair<double, double>>& grid,
                                           double tol, const SolverOptions& opts) {
  const FiniteSpectralTriple triple = c3_triple(p);
  std::vector<ComparisonReport> reports;
  reports.reserve(grid.size());
  for (const auto& [lam1, lam2] : grid) {
    if (lam1 * lam2 < 0.0)
      throw std::domain_error("verify_prop1: grid must be same-sign");
    // Base state keeps every grid point inside the simplex.
    const State psi = State::probability({0.05, 0.05, 0.9});
    const State phi =
        State::probability({0.05 + lam1, 0.05 + lam2, 0.9 - lam1 - lam2});

    ComparisonReport rep;
    rep.alpha = p.alpha;
    rep.beta = p.beta;
    rep.lam1 = lam1;
    rep.lam2 = lam2;
    const auto [w_closed, d_closed] = prop1_closed_forms(p, lam1, lam2);
    rep.closed_form_w = w_closed;
    rep.closed_form_d = d_closed;
    rep.w_value = spectral_wasserstein(triple, phi, psi, opts).value;
    rep.d_value = spectral_distance(triple, phi, psi, opts).value;
    rep.gap = rep.w_value - rep.d_value;
    rep.pass_w = std::abs(rep.w_value - w_closed) <= tol;
    rep.pass_d = std::abs(rep.d_value - d_closed) <= tol;
    const double legs = lam1 * lam1 / (p.alpha * p.alpha) +
                        lam2 * lam2 / (p.beta * p.beta);
    rep.pass_hypotenuse = std::abs(rep.d_value * rep.d_value - legs) <= tol;
    reports.push_back(std::move(rep));
  }
  return reports;
}

State random_simplex_state(int n, Rng& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = rng.exponential();
    sum += x;
  }
  for (double& x : w) x /= sum;
  // renormalize exactly enough for the 1e-12 constructor gate
  double s2 = 0.0;
  for (double x : w) s2 += x;
  w.back() += 1.0 - s2;
  return State::probability(std::move(w));
}

FiniteSpectralTriple random_commutative_triple(int n, Rng& rng) {
  ComplexMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = Complex(rng.gaussian(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = Complex(rng.gaussian(), rng.gaussian());
      d(j, i) = std::conj(d(i, j));
    }
  }
  return FiniteSpectralTriple(FiniteAlgebra::commutative(n),
                              HermitianOperator(std::move(d)));
}

InequalityReport verify_inequality(const FiniteSpectralTriple& triple, long trials,
                                   std::uint64_t seed, const SolverOptions& opts) {
  if (triple.algebra.kind != AlgebraKind::Commutative)
    throw std::domain_error("verify_inequality: requires a commutative triple");
  const int n = triple.algebra.n;
  Rng rng(seed);
  const CostMatrix cost = cost_matrix(triple, opts);

  InequalityReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.max_gap = -kInf;
  rep.min_slack = kInf;
  for (long t = 0; t < trials; ++t) {
    const State phi = random_simplex_state(n, rng);
    const State psi = random_simplex_state(n, rng);
    RealVector mu(n), nu(n);
    for (int i = 0; i < n; ++i) {
      mu(i) = phi.weights()[i];
      nu(i) = psi.weights()[i];
    }
    const double w = wasserstein_primal(cost, mu, nu).value;
    const double d = spectral_distance(triple, phi, psi, opts).value;
    const double slack = w - d;
    if (!(d <= w + 1e-6)) ++rep.violations;
    rep.max_gap = std::max(rep.max_gap, slack);
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.worst_phi = phi.weights();
      rep.worst_psi = psi.weights();
    }
  }
  return rep;
}

RealVector bloch_vector(const ComplexMatrix& h) {
  if (h.rows() != 2 || h.cols() != 2)
    throw std::domain_error("bloch_vector: requires a 2x2 matrix");
  // h = c0 I + b.sigma  =>  h10 = bx + i by, h00 - h11 = 2 bz
  RealVector b(3);
  b(0) = h(1, 0).real();
  b(1) = h(1, 0).imag();
  b(2) = 0.5 * (h(0, 0) - h(1, 1)).real();
  return b;
}

State bloch_state(const RealVector& b) {
  if (b.size() != 3 || std::abs(b.norm() - 1.0) > 1e-10)
    throw std::domain_error("bloch_state: Bloch vector must be unit length");
  ComplexMatrix rho(2, 2);
  rho(0, 0) = Complex(0.5 * (1.0 + b(2)), 0.0);
  rho(1, 1) = Complex(0.5 * (1.0 - b(2)), 0.0);
  rho(0, 1) = Complex(0.5 * b(0), -0.5 * b(1));
  rho(1, 0) = Complex(0.5 * b(0), 0.5 * b(1));
  return State::density(HermitianOperator(std::move(rho)));
}

M2ProbeResult m2_equality_probe(const HermitianOperator& dirac, const State& rho1,
                                const State& rho2, int n_samples,
                                const SolverOptions& opts) {
  if (dirac.dim() != 2) throw std::domain_error("m2_equality_probe: Dirac must be 2x2");
  if (n_samples < 8) throw std::domain_error("m2_equality_probe: need at least 8 samples");
  if (rho1.kind() != AlgebraKind::FullMatrix || rho2.kind() != AlgebraKind::FullMatrix ||
      rho1.n() != 2 || rho2.n() != 2)
    throw std::domain_error("m2_equality_probe: states must be 2x2 density matrices");

  const FiniteSpectralTriple triple(FiniteAlgebra::full_matrix(2), dirac);
  M2ProbeResult res;
  res.d = spectral_distance(triple, rho1, rho2, opts).value;

  // rho = (1/2)(I + b.sigma); Bloch vector is twice the traceless part.
  const RealVector b1 = bloch_vector(2.0 * rho1.rho() - ComplexMatrix::Identity(2, 2));
  const RealVector b2 = bloch_vector(2.0 * rho2.rho() - ComplexMatrix::Identity(2, 2));
  if ((b1 - b2).norm() < 1e-12) {
    res.w_grid = 0.0;
    return res;
  }

  const RealVector axis = bloch_vector(dirac.matrix());
  if (axis.norm() < 1e-12) {
    // D commutes with everything: no finite-cost transport at all.
    res.w_grid = kInf;
    return res;
  }
  const RealVector dz = axis / axis.norm();
  RealVector e1 = std::abs(dz(0)) < 0.9 ? RealVector(RealVector::Unit(3, 0))
                                        : RealVector(RealVector::Unit(3, 1));
  e1 = (e1 - dz * dz.dot(e1)).normalized();
  RealVector e2(3);
  e2 << dz(1) * e1(2) - dz(2) * e1(1), dz(2) * e1(0) - dz(0) * e1(2),
      dz(0) * e1(1) - dz(1) * e1(0);

  // Support: the finite-distance great circle plus the eigen-atoms of both
  // states (the latter make the measure constraints feasible at every N).
  std::vector<RealVector> support;
  support.reserve(n_samples + 4);
  for (int k = 0; k < n_samples; ++k) {
    const double th = 2.0 * M_PI * k / n_samples;
    support.push_back(std::cos(th) * e1 + std::sin(th) * e2);
  }
  auto add_atoms = [&](const RealVector& b) {
    RealVector dir = b.norm() > 1e-12 ? RealVector(b.normalized()) : e1;
    support.push_back(dir);
    support.push_back(-dir);
  };
  add_atoms(b1);
  add_atoms(b2);
  const int k_support = static_cast<int>(support.size());
  res.support_size = k_support;

  std::vector<State> pure;
  pure.reserve(k_support);
  for (const auto& s : support) pure.push_back(bloch_state(s));
  const CostMatrix cost = sampled_cost_matrix(triple, pure, opts);

  // Cheapest transport between representing measures supported on the
  // sample: min sum c_kl pi_kl with total mass 1 and Bloch barycenters
  // matching b1 (rows) and b2 (columns). Infinite-cost pairs are excluded.
  std::vector<std::pair<int, int>> vars;
  for (int k = 0; k < k_support; ++k)
    for (int l = 0; l < k_support; ++l)
      if (std::isfinite(cost(k, l))) vars.emplace_back(k, l);

  const int n_vars = static_cast<int>(vars.size());
  RealMatrix a = RealMatrix::Zero(7, n_vars);
  RealVector rhs(7), obj(n_vars);
  rhs << 1.0, b1(0), b1(1), b1(2), b2(0), b2(1), b2(2);
  for (int v = 0; v < n_vars; ++v) {
    const auto [k, l] = vars[v];
    obj(v) = cost(k, l);
    a(0, v) = 1.0;
    for (int q = 0; q < 3; ++q) {
      a(1 + q, v) = support[k](q);
      a(4 + q, v) = support[l](q);
    }
  }
  const LpResult lp = solve_lp(a, rhs, obj);
  res.w_grid = lp.feasible ? lp.value : kInf;
  return res;
}

}  // namespace spectral
