#pragma once

#include "spectral/linalg.hpp"

namespace spectral {

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  RealVector x;
};

/// Minimizes c.x subject to A x = b, x >= 0 with a dense two-phase primal
/// simplex (Bland's rule). Intended for small constraint counts with
/// possibly many columns.
LpResult solve_lp(const RealMatrix& a, const RealVector& b, const RealVector& c);

}  // namespace spectral
