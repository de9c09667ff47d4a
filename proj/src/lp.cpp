#include "spectral/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spectral {

namespace {

// Tableau simplex with Bland's rule. `tab` is rows x (total + 1) with the
// rhs in the last column, `basis[r]` the basic column of row r. Only the
// first `active` columns may enter; `cost` covers all columns.
void run_simplex(RealMatrix& tab, std::vector<int>& basis, const RealVector& cost,
                 int active, long max_pivots) {
  const int rows = static_cast<int>(tab.rows());
  const int total = static_cast<int>(tab.cols()) - 1;
  RealVector reduced = cost;
  for (int r = 0; r < rows; ++r)
    if (cost(basis[r]) != 0.0) reduced -= cost(basis[r]) * tab.row(r).head(total);

  for (long pivot = 0; pivot < max_pivots; ++pivot) {
    int enter = -1;
    for (int j = 0; j < active; ++j)
      if (reduced(j) < -1e-9) {
        enter = j;
        break;
      }
    if (enter < 0) return;

    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double a = tab(r, enter);
      if (a <= 1e-11) continue;
      const double ratio = tab(r, total) / a;
      if (leave < 0 || ratio < best_ratio - 1e-13 ||
          (ratio < best_ratio + 1e-13 && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw std::runtime_error("solve_lp: unbounded problem");

    tab.row(leave) /= tab(leave, enter);
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double a = tab(r, enter);
      if (a != 0.0) tab.row(r) -= a * tab.row(leave);
    }
    reduced -= reduced(enter) * tab.row(leave).head(total);
    reduced(enter) = 0.0;
    basis[leave] = enter;
  }
  throw std::runtime_error("solve_lp: pivot limit exceeded");
}

}  // namespace

LpResult solve_lp(const RealMatrix& a, const RealVector& b, const RealVector& c) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  if (b.size() != rows || c.size() != cols)
    throw std::domain_error("solve_lp: inconsistent dimensions");

  // Phase 1 tableau [A | I | b], rhs made nonnegative first.
  RealMatrix tab(rows, cols + rows + 1);
  for (int r = 0; r < rows; ++r) {
    const double sign = b(r) < 0.0 ? -1.0 : 1.0;
    tab.block(r, 0, 1, cols) = sign * a.row(r);
    tab(r, cols + rows) = sign * b(r);
    for (int k = 0; k < rows; ++k) tab(r, cols + k) = (r == k) ? 1.0 : 0.0;
  }

  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = cols + r;
  RealVector phase1_cost = RealVector::Zero(cols + rows);
  phase1_cost.tail(rows).setOnes();
  run_simplex(tab, basis, phase1_cost, cols + rows, 200000);

  double infeas = 0.0;
  for (int r = 0; r < rows; ++r)
    if (basis[r] >= cols) infeas += tab(r, cols + rows);
  if (infeas > 1e-8) return {};

  // Drive zero-level artificials out of the basis where a structural pivot
  // exists; rows with none are redundant and stay pinned at level zero.
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < cols) continue;
    int enter = -1;
    for (int j = 0; j < cols; ++j)
      if (std::abs(tab(r, j)) > 1e-9) {
        enter = j;
        break;
      }
    if (enter < 0) continue;
    tab.row(r) /= tab(r, enter);
    for (int r2 = 0; r2 < rows; ++r2) {
      if (r2 == r) continue;
      const double v = tab(r2, enter);
      if (v != 0.0) tab.row(r2) -= v * tab.row(r);
    }
    basis[r] = enter;
  }

  // Phase 2: artificial columns can no longer enter.
  RealVector phase2_cost = RealVector::Zero(cols + rows);
  phase2_cost.head(cols) = c;
  run_simplex(tab, basis, phase2_cost, cols, 200000);

  LpResult res;
  res.feasible = true;
  res.x = RealVector::Zero(cols);
  for (int r = 0; r < rows; ++r)
    if (basis[r] < cols) res.x(basis[r]) = std::max(tab(r, cols + rows), 0.0);
  res.value = c.dot(res.x);
  return res;
}

}  // namespace spectral
