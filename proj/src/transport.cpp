#include "spectral/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

namespace spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_marginal(const RealVector& w, const char* name) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w(i)) || w(i) < -1e-12)
      throw std::domain_error(std::string("wasserstein: negative or non-finite ") + name);
    sum += w(i);
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::domain_error(std::string("wasserstein: ") + name + " must sum to 1");
}

struct SimplexOutcome {
  RealMatrix plan;          // full-size plan
  double value = 0.0;       // +inf when forbidden mass is unavoidable
  std::vector<int> rows, cols;  // support indices
  RealVector u, v;          // node potentials on the support (working costs)
  bool all_finite_cost = true;
};

// Transportation simplex on the positive-support subproblem. Infinite costs
// become a big-M that any rerouting through finite edges undercuts, so
// optimal plans avoid them exactly whenever that is feasible.
SimplexOutcome transport_simplex(const CostMatrix& cost, const RealVector& mu,
                                 const RealVector& nu) {
  const int full = cost.size();
  if (mu.size() != full || nu.size() != full)
    throw std::domain_error("wasserstein: marginal length must match the cost matrix");
  check_marginal(mu, "mu");
  check_marginal(nu, "nu");

  std::vector<int> rows, cols;
  for (int i = 0; i < full; ++i)
    if (mu(i) >= 1e-15) rows.push_back(i);
  for (int j = 0; j < full; ++j)
    if (nu(j) >= 1e-15) cols.push_back(j);
  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(cols.size());

  double max_finite = 0.0;
  bool any_inf = false;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b) {
      const double c = cost(rows[a], cols[b]);
      if (std::isinf(c))
        any_inf = true;
      else
        max_finite = std::max(max_finite, c);
    }
  const double big = (m + n + 1) * (max_finite + 1.0);
  RealMatrix c(m, n);
  std::vector<std::vector<bool>> forbidden(m, std::vector<bool>(n, false));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b) {
      const double cc = cost(rows[a], cols[b]);
      forbidden[a][b] = std::isinf(cc);
      c(a, b) = forbidden[a][b] ? big : cc;
    }

  // Epsilon cascade on supplies: guides pivoting away from degeneracy; the
  // final flows are recomputed from the true marginals on the final tree.
  double min_pos = 1.0;
  for (int a = 0; a < m; ++a) min_pos = std::min(min_pos, mu(rows[a]));
  for (int b = 0; b < n; ++b) min_pos = std::min(min_pos, nu(cols[b]));
  const double eps = 1e-9 * min_pos / (m + n + 1);
  std::vector<double> s(m), d(n);
  double extra = 0.0;
  for (int a = 0; a < m; ++a) {
    s[a] = mu(rows[a]) + eps * (a + 1);
    extra += eps * (a + 1);
  }
  for (int b = 0; b < n; ++b) d[b] = nu(cols[b]);
  d[n - 1] += extra;

  struct Cell {
    int a, b;
    double flow;
  };
  std::vector<Cell> basis;
  std::vector<std::vector<int>> basic_at(m, std::vector<int>(n, -1));

  // Northwest-corner start.
  {
    auto ss = s;
    auto dd = d;
    int a = 0, b = 0;
    for (;;) {
      const double x = std::min(ss[a], dd[b]);
      basic_at[a][b] = static_cast<int>(basis.size());
      basis.push_back({a, b, x});
      ss[a] -= x;
      dd[b] -= x;
      if (a == m - 1 && b == n - 1) break;
      if (ss[a] <= 1e-18 && a < m - 1)
        ++a;
      else
        ++b;
    }
  }

  const int nodes = m + n;  // rows 0..m-1, cols m..m+n-1
  RealVector u(m), v(n);
  std::vector<std::vector<int>> adj(nodes);  // indices into basis

  auto rebuild_adjacency = [&] {
    for (auto& lst : adj) lst.clear();
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
      adj[basis[k].a].push_back(k);
      adj[m + basis[k].b].push_back(k);
    }
  };

  auto compute_potentials = [&] {
    rebuild_adjacency();
    std::vector<bool> seen(nodes, false);
    std::deque<int> queue{0};
    u(0) = 0.0;
    seen[0] = true;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      for (int k : adj[node]) {
        const Cell& cell = basis[k];
        const int other = node < m ? m + cell.b : cell.a;
        if (seen[other]) continue;
        seen[other] = true;
        if (other >= m)
          v(other - m) = c(cell.a, cell.b) - u(cell.a);
        else
          u(other) = c(cell.a, cell.b) - v(cell.b);
        queue.push_back(other);
      }
    }
  };

  const long pivot_cap = 200000;
  for (long pivot = 0;; ++pivot) {
    if (pivot >= pivot_cap)
      throw std::runtime_error("wasserstein: transportation simplex failed to terminate");
    compute_potentials();

    // Bland: first cell (row-major) with a negative reduced cost enters.
    int ea = -1, eb = -1;
    for (int a = 0; a < m && ea < 0; ++a)
      for (int b = 0; b < n; ++b) {
        if (basic_at[a][b] >= 0) continue;
        if (c(a, b) - u(a) - v(b) < -1e-11 * (1.0 + std::abs(c(a, b)))) {
          ea = a;
          eb = b;
          break;
        }
      }
    if (ea < 0) break;  // optimal

    // Unique tree path from row node ea to column node eb.
    std::vector<int> parent_edge(nodes, -1), parent_node(nodes, -1);
    std::vector<bool> seen(nodes, false);
    std::deque<int> queue{ea};
    seen[ea] = true;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      if (node == m + eb) break;
      for (int k : adj[node]) {
        const int other = node < m ? m + basis[k].b : basis[k].a;
        if (seen[other]) continue;
        seen[other] = true;
        parent_edge[other] = k;
        parent_node[other] = node;
        queue.push_back(other);
      }
    }

    // Cycle: entering cell (+), then alternating signs back along the path.
    std::vector<int> path_cells;
    for (int node = m + eb; node != ea; node = parent_node[node])
      path_cells.push_back(parent_edge[node]);

    double theta = kInf;
    int leaving = -1;
    for (std::size_t t = 0; t < path_cells.size(); ++t) {
      if (t % 2 != 0) continue;  // minus positions
      const Cell& cell = basis[path_cells[t]];
      if (cell.flow < theta - 1e-18) {
        theta = cell.flow;
        leaving = path_cells[t];
      }
    }
    if (leaving < 0)
      throw std::runtime_error("wasserstein: degenerate pivot cycle");

    for (std::size_t t = 0; t < path_cells.size(); ++t) {
      Cell& cell = basis[path_cells[t]];
      cell.flow += (t % 2 == 0) ? -theta : theta;
    }
    Cell& out = basis[leaving];
    basic_at[out.a][out.b] = -1;
    out = {ea, eb, theta};
    basic_at[ea][eb] = leaving;
  }

  // Recompute flows on the final tree from the unperturbed marginals.
  {
    rebuild_adjacency();
    std::vector<double> residual(nodes);
    for (int a = 0; a < m; ++a) residual[a] = mu(rows[a]);
    for (int b = 0; b < n; ++b) residual[m + b] = nu(cols[b]);
    std::vector<int> degree(nodes);
    std::vector<bool> edge_done(basis.size(), false);
    for (int node = 0; node < nodes; ++node)
      degree[node] = static_cast<int>(adj[node].size());
    std::deque<int> leaves;
    for (int node = 0; node < nodes; ++node)
      if (degree[node] == 1) leaves.push_back(node);
    while (!leaves.empty()) {
      const int node = leaves.front();
      leaves.pop_front();
      int edge = -1;
      for (int k : adj[node])
        if (!edge_done[k]) edge = k;
      if (edge < 0) continue;  // last node of the tree
      Cell& cell = basis[edge];
      cell.flow = residual[node];
      if (cell.flow < -1e-9)
        throw std::runtime_error("wasserstein: tree flow went negative");
      cell.flow = std::max(cell.flow, 0.0);
      const int other = node < m ? m + cell.b : cell.a;
      residual[other] -= residual[node];
      residual[node] = 0.0;
      edge_done[edge] = true;
      if (--degree[other] == 1) leaves.push_back(other);
      degree[node] = 0;
    }
  }

  SimplexOutcome out;
  out.plan = RealMatrix::Zero(full, full);
  out.value = 0.0;
  out.all_finite_cost = !any_inf;
  bool uses_forbidden = false;
  for (const Cell& cell : basis) {
    out.plan(rows[cell.a], cols[cell.b]) = cell.flow;
    if (forbidden[cell.a][cell.b]) {
      if (cell.flow > 1e-10) uses_forbidden = true;  // zero-flow basics are fine
    } else {
      out.value += cell.flow * cost(rows[cell.a], cols[cell.b]);
    }
  }
  if (uses_forbidden) out.value = kInf;
  out.rows = std::move(rows);
  out.cols = std::move(cols);
  out.u = u;
  out.v = v;
  return out;
}

}  // namespace

PrimalResult wasserstein_primal(const CostMatrix& cost, const RealVector& mu,
                                const RealVector& nu) {
  SimplexOutcome out = transport_simplex(cost, mu, nu);
  PrimalResult res;
  res.value = out.value;
  res.plan = TransportPlan{std::move(out.plan), mu, nu};
  return res;
}

DualResult kantorovich_dual(const CostMatrix& cost, const RealVector& mu,
                            const RealVector& nu) {
  if (cost.has_infinite())
    throw std::invalid_argument(
        "kantorovich_dual: infinite cost entries unsupported (use the primal)");
  SimplexOutcome out = transport_simplex(cost, mu, nu);

  // c-transform of the column potentials; with a metric cost this is
  // automatically 1-Lipschitz and attains the optimal dual value.
  const int full = cost.size();
  RealVector f(full);
  for (int i = 0; i < full; ++i) {
    double best = kInf;
    for (std::size_t b = 0; b < out.cols.size(); ++b)
      best = std::min(best, cost(i, out.cols[b]) - out.v(static_cast<int>(b)));
    f(i) = best;
  }
  f.array() -= f.minCoeff();

  DualResult res;
  res.value = f.dot(mu - nu);
  res.potential = DualPotential{std::move(f)};
  return res;
}

SpectralWassersteinResult spectral_wasserstein(const FiniteSpectralTriple& triple,
                                               const State& phi, const State& psi,
                                               const SolverOptions& opts) {
  if (triple.algebra.kind != AlgebraKind::Commutative)
    throw std::domain_error("spectral_wasserstein: requires a commutative algebra");
  if (phi.kind() != AlgebraKind::Commutative || psi.kind() != AlgebraKind::Commutative ||
      phi.n() != triple.algebra.n || psi.n() != triple.algebra.n)
    throw std::domain_error("spectral_wasserstein: states do not live on the triple");

  const CostMatrix cost = cost_matrix(triple, opts);
  RealVector mu(phi.n()), nu(psi.n());
  for (int i = 0; i < phi.n(); ++i) {
    mu(i) = phi.weights()[i];
    nu(i) = psi.weights()[i];
  }
  PrimalResult primal = wasserstein_primal(cost, mu, nu);
  SpectralWassersteinResult res;
  res.value = primal.value;
  res.plan = std::move(primal.plan);
  if (!cost.has_infinite())
    res.potential = kantorovich_dual(cost, mu, nu).potential;
  return res;
}

}  // namespace spectral
