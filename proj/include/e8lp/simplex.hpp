#pragma once

// Dense two-phase simplex for  min cᵀx  subject to  Ax = b, x ≥ 0. Uses
// Dantzig pricing, with Bland's rule for both the entering and the leaving
// variable whenever the method stalls on degenerate pivots.

#include <vector>

namespace e8lp::lp {

using Scalar = long double;

struct SimplexProblem {
  std::vector<std::vector<Scalar>> a;  // m rows of n entries
  std::vector<Scalar> b;               // m
  std::vector<Scalar> c;               // n
};

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::infeasible;
  std::vector<Scalar> x;     // n
  std::vector<Scalar> dual;  // m, with Aᵀy ≤ c and bᵀy = cᵀx at the optimum
  Scalar objective = 0;
  int iterations = 0;
};

struct SimplexOptions {
  Scalar pivot_tol = 1e-12L;
  Scalar cost_tol = 1e-13L;
  Scalar feasibility_tol = 1e-11L;
  int max_iterations = 200000;
  int degenerate_switch = 50;  // consecutive degenerate pivots before Bland's rule
};

/// Throws NumericalStall when the iteration cap is reached.
SimplexResult solve_simplex(const SimplexProblem& p, const SimplexOptions& options = {});

}  // namespace e8lp::lp
