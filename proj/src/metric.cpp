#include "spectral/metric.hpp"

#include "spectral/parallel.hpp"
#include "spectral/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spectral {

namespace detail {

int param_count(const FiniteAlgebra& alg) {
  return alg.kind == AlgebraKind::Commutative ? alg.n : alg.n * alg.n;
}

std::vector<AlgebraElement> self_adjoint_basis(const FiniteAlgebra& alg) {
  std::vector<AlgebraElement> basis;
  if (alg.kind == AlgebraKind::Commutative) {
    for (int i = 0; i < alg.n; ++i) {
      std::vector<Complex> z(alg.n, Complex(0.0, 0.0));
      z[i] = Complex(1.0, 0.0);
      basis.push_back(AlgebraElement::diagonal(std::move(z)));
    }
    return basis;
  }
  const int n = alg.n;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(i, i) = Complex(1.0, 0.0);
    basis.push_back(AlgebraElement::matrix(std::move(m)));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix re = ComplexMatrix::Zero(n, n);
      re(i, j) = re(j, i) = Complex(1.0, 0.0);
      basis.push_back(AlgebraElement::matrix(std::move(re)));
      ComplexMatrix im = ComplexMatrix::Zero(n, n);
      im(i, j) = Complex(0.0, 1.0);
      im(j, i) = Complex(0.0, -1.0);
      basis.push_back(AlgebraElement::matrix(std::move(im)));
    }
  return basis;
}

AlgebraElement element_from_params(const FiniteAlgebra& alg, const RealVector& z) {
  if (z.size() != param_count(alg))
    throw std::domain_error("element_from_params: wrong parameter count");
  if (alg.kind == AlgebraKind::Commutative) {
    std::vector<Complex> coords(alg.n);
    for (int i = 0; i < alg.n; ++i) coords[i] = Complex(z(i), 0.0);
    return AlgebraElement::diagonal(std::move(coords));
  }
  const int n = alg.n;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) m(i, i) = Complex(z(k++), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double re = z(k++);
      const double im = z(k++);
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  return AlgebraElement::matrix(std::move(m));
}

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Norm of a skew-Hermitian matrix via the Hermitian matrix iM; optionally
// reports the top eigenpair for subgradient evaluation.
double skew_norm(const ComplexMatrix& m, ComplexVector* top = nullptr,
                 double* top_sign = nullptr) {
  ComplexMatrix h = Complex(0.0, 1.0) * m;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      h, top ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  Eigen::Index lo, hi;
  ev.minCoeff(&lo);
  ev.maxCoeff(&hi);
  const Eigen::Index arg = std::abs(ev(lo)) > std::abs(ev(hi)) ? lo : hi;
  if (top) {
    *top = es.eigenvectors().col(arg);
    *top_sign = ev(arg) >= 0.0 ? 1.0 : -1.0;
  }
  return std::abs(ev(arg));
}

struct ReducedProblem {
  ComplexMatrix m0;                 // image of the feasible base point
  std::vector<ComplexMatrix> dirs;  // images of the tangent basis vectors
  long evals = 0;

  ComplexMatrix image(const RealVector& y) const {
    ComplexMatrix m = m0;
    for (int j = 0; j < y.size(); ++j) m += y(j) * dirs[j];
    return m;
  }
  double norm_at(const RealVector& y) {
    ++evals;
    return skew_norm(image(y));
  }
  RealVector subgradient(const RealVector& y) {
    ++evals;
    ComplexVector w;
    double sign = 1.0;
    skew_norm(image(y), &w, &sign);
    RealVector g(y.size());
    for (int j = 0; j < y.size(); ++j) {
      const Complex val = (w.adjoint() * (Complex(0.0, 1.0) * dirs[j]) * w)(0);
      g(j) = sign * val.real();
    }
    return g;
  }
};

}  // namespace

CostMatrix::CostMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n == 0 || entries_.cols() != n)
    throw std::domain_error("CostMatrix: must be square and nonempty");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(entries_(i, i)) > 1e-12)
      throw std::domain_error("CostMatrix: diagonal must be zero");
    entries_(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = entries_(i, j);
      const double b = entries_(j, i);
      if (std::isnan(a) || std::isnan(b))
        throw std::domain_error("CostMatrix: NaN entry");
      if (std::isinf(a) != std::isinf(b) ||
          (!std::isinf(a) && std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))))
        throw std::domain_error("CostMatrix: matrix must be symmetric");
      if (a < 0.0 || b < 0.0)
        throw std::domain_error("CostMatrix: entries must be nonnegative");
      entries_(j, i) = entries_(i, j);  // exact symmetry
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double ij = entries_(i, j), jk = entries_(j, k), ik = entries_(i, k);
        if (std::isinf(ij) || std::isinf(jk) || std::isinf(ik)) continue;
        if (ik > ij + jk + 1e-8)
          throw std::domain_error("CostMatrix: triangle inequality violated");
      }
}

bool CostMatrix::has_infinite() const {
  for (Eigen::Index i = 0; i < entries_.rows(); ++i)
    for (Eigen::Index j = 0; j < entries_.cols(); ++j)
      if (std::isinf(entries_(i, j))) return true;
  return false;
}

DistanceResult spectral_distance(const FiniteSpectralTriple& triple, const State& phi,
                                 const State& psi, const SolverOptions& opts) {
  const FiniteAlgebra& alg = triple.algebra;
  if (phi.kind() != alg.kind || psi.kind() != alg.kind || phi.n() != alg.n ||
      psi.n() != alg.n)
    throw std::domain_error("spectral_distance: states do not live on the triple");

  const auto basis = detail::self_adjoint_basis(alg);
  const int p = static_cast<int>(basis.size());
  std::vector<ComplexMatrix> images(p);
  RealVector c(p);
  for (int k = 0; k < p; ++k) {
    images[k] = commutator(triple.dirac.matrix(), represent(triple, basis[k]));
    c(k) = (evaluate(phi, basis[k]) - evaluate(psi, basis[k])).real();
  }

  const double cnorm = c.norm();
  DistanceResult res;
  if (cnorm < 1e-14) {
    res.value = 0.0;
    res.witness = AlgebraElement::zero(alg);
    return res;
  }

  // Metric disconnection: c must vanish on the kernel of z -> [D, pi(z)]
  // (the unit direction is always in the kernel and c is zero there).
  const auto kernel = kernel_basis(images);
  for (const auto& v : kernel) {
    if (std::abs(c.dot(v)) > 1e-9 * cnorm) {
      res.value = kInf;
      return res;
    }
  }

  // Reduce to the tangent space of {c(z) = 1} modulo the kernel.
  RealMatrix rows(kernel.size() + 1, p);
  for (std::size_t r = 0; r < kernel.size(); ++r) rows.row(r) = kernel[r].transpose();
  rows.row(kernel.size()) = (c / cnorm).transpose();
  Eigen::JacobiSVD<RealMatrix> svd(rows, Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > 1e-12 * smax) ++rank;
  const int m = p - rank;

  const RealVector z0 = c / (cnorm * cnorm);
  ReducedProblem prob;
  prob.m0 = ComplexMatrix::Zero(triple.dim_h(), triple.dim_h());
  for (int k = 0; k < p; ++k) prob.m0 += z0(k) * images[k];
  prob.dirs.reserve(m);
  for (int j = 0; j < m; ++j) {
    const RealVector t = svd.matrixV().col(rank + j);
    ComplexMatrix f = ComplexMatrix::Zero(triple.dim_h(), triple.dim_h());
    for (int k = 0; k < p; ++k) f += t(k) * images[k];
    prob.dirs.push_back(std::move(f));
  }

  RealVector y = RealVector::Zero(m);
  double best = prob.norm_at(y);
  RealVector ybest = y;

  if (m > 0) {
    // Phase 1: projected subgradient with diminishing steps.
    RealVector g0 = prob.subgradient(y);
    const double s0 = std::max(1e-3, 0.5 * best / (g0.norm() + 1e-12));
    // Enough to land in the right basin; the compass polish finishes the job.
    const long n1 = std::min<long>(60L * m + 40, opts.max_iter / 2);
    for (long t = 1; t <= n1 && prob.evals < opts.max_iter; ++t) {
      RealVector g = prob.subgradient(y);
      const double gn = g.norm();
      if (gn < 1e-14) break;
      y -= (s0 / std::sqrt(static_cast<double>(t))) * (g / gn);
      const double val = prob.norm_at(y);
      if (val < best) {
        best = val;
        ybest = y;
      }
    }

    // Phase 2: compass polish. Coordinate directions plus pairwise
    // diagonals and the current subgradient direction.
    std::vector<RealVector> dirs;
    for (int j = 0; j < m; ++j) {
      RealVector e = RealVector::Zero(m);
      e(j) = 1.0;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
    if (m >= 2 && m <= 4) {
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          for (double sj : {1.0, -1.0}) {
            RealVector e = RealVector::Zero(m);
            e(i) = 1.0 / std::sqrt(2.0);
            e(j) = sj / std::sqrt(2.0);
            dirs.push_back(e);
            dirs.push_back(-e);
          }
    }

    Rng poll(0x9e3779b97f4a7c15ULL);
    double h = std::max(s0 / 4.0, 16.0 * opts.polish_tol);
    const double h_cap = 4.0 * h;
    y = ybest;
    double cur = best;
    while (h > opts.polish_tol && prob.evals < opts.max_iter) {
      RealVector g = prob.subgradient(y);
      const double gn = g.norm();
      double best_step = cur;
      RealVector ystep;
      auto consider = [&](const RealVector& cand) {
        const double val = prob.norm_at(cand);
        if (val < best_step) {
          best_step = val;
          ystep = cand;
        }
      };
      if (gn > 1e-14) consider(y - h * (g / gn));
      for (const auto& d : dirs) consider(y + h * d);
      // The fixed directions can all fail inside a narrow nonsmooth valley;
      // fresh randomized polls (deterministically seeded) escape those stalls.
      if (m >= 2 && !(best_step < cur - 1e-16 * (1.0 + cur))) {
        for (int r = 0; r < 8 * m && prob.evals < opts.max_iter; ++r) {
          RealVector d(m);
          for (int j = 0; j < m; ++j) d(j) = poll.gaussian();
          d.normalize();
          consider(y + h * d);
          consider(y - h * d);
        }
      }
      if (best_step < cur - 1e-16 * (1.0 + cur)) {
        y = ystep;
        cur = best_step;
        h = std::min(1.6 * h, h_cap);
      } else {
        h *= 0.5;
      }
    }
    if (cur < best) {
      best = cur;
      ybest = y;
    }
    if (h > opts.polish_tol)
      throw NonConvergenceError("spectral_distance: iteration budget exhausted",
                                best > 1e-12 ? 1.0 / best : kInf, prob.evals);
  }

  if (best < 1e-12) {
    // Should have been caught by the kernel test.
    res.value = kInf;
    res.iterations = prob.evals;
    return res;
  }

  RealVector zstar = z0;
  for (int j = 0; j < m; ++j) zstar += ybest(j) * svd.matrixV().col(rank + j);
  res.value = 1.0 / best;
  res.iterations = prob.evals;
  AlgebraElement witness = detail::element_from_params(alg, (zstar / best).eval());
  const double attained =
      std::abs((evaluate(phi, witness) - evaluate(psi, witness)).real());
  res.certified_gap = std::max(0.0, res.value - attained);
  res.witness = std::move(witness);
  return res;
}

namespace {

CostMatrix pairwise_matrix(int n, const std::vector<State>& states,
                           const FiniteSpectralTriple& triple, const SolverOptions& opts) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  RealMatrix entries = RealMatrix::Zero(n, n);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    try {
      const DistanceResult r = spectral_distance(triple, states[i], states[j], opts);
      entries(i, j) = entries(j, i) = r.value;
    } catch (const NonConvergenceError& e) {
      std::ostringstream msg;
      msg << "cost matrix: solver did not converge on pure-state pair (" << i << ", "
          << j << "): " << e.what();
      throw NonConvergenceError(msg.str(), e.best_value, e.iterations);
    }
  });
  return CostMatrix(std::move(entries));
}

}  // namespace

CostMatrix cost_matrix(const FiniteSpectralTriple& triple, const SolverOptions& opts) {
  if (triple.algebra.kind != AlgebraKind::Commutative)
    throw std::domain_error("cost_matrix: requires a commutative algebra");
  const int n = triple.algebra.n;
  std::vector<State> pures;
  pures.reserve(n);
  for (int i = 0; i < n; ++i) pures.push_back(pure_state(triple, i));
  return pairwise_matrix(n, pures, triple, opts);
}

CostMatrix sampled_cost_matrix(const FiniteSpectralTriple& triple,
                               const std::vector<State>& pure_states,
                               const SolverOptions& opts) {
  if (triple.algebra.kind != AlgebraKind::FullMatrix)
    throw std::domain_error("sampled_cost_matrix: requires a matrix algebra");
  if (pure_states.empty())
    throw std::domain_error("sampled_cost_matrix: empty state list");
  for (const auto& s : pure_states) {
    if (s.kind() != AlgebraKind::FullMatrix || s.n() != triple.algebra.n)
      throw std::domain_error("sampled_cost_matrix: state does not live on the triple");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s.rho(), Eigen::EigenvaluesOnly);
    RealVector ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size());
    if (ev(ev.size() - 1) < 1.0 - 1e-10)
      throw std::domain_error("sampled_cost_matrix: state is not rank one");
  }
  return pairwise_matrix(static_cast<int>(pure_states.size()), pure_states, triple, opts);
}

}  // namespace spectral
