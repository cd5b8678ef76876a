#include "e8lp/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "e8lp/errors.hpp"

namespace e8lp::lp {

namespace {

// Tableau with m constraint rows plus an objective row; column n_total holds the rhs.
// Columns: n structural, then m artificials.
class Tableau {
 public:
  Tableau(const SimplexProblem& p, const SimplexOptions& o)
      : m_(static_cast<int>(p.b.size())), n_(static_cast<int>(p.c.size())), opt_(o) {
    width_ = n_ + m_ + 1;
    t_.assign(static_cast<std::size_t>(m_ + 1) * width_, 0);
    sign_.assign(m_, 1);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      if (static_cast<int>(p.a[i].size()) != n_) throw std::invalid_argument("ragged constraint matrix");
      sign_[i] = p.b[i] < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j) at(i, j) = sign_[i] * p.a[i][j];
      at(i, n_ + i) = 1;
      rhs(i) = sign_[i] * p.b[i];
      basis_[i] = n_ + i;
    }
  }

  Scalar& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  Scalar& rhs(int i) { return at(i, width_ - 1); }
  Scalar& cost(int j) { return at(m_, j); }

  // Sets the objective row to reduced costs of `c` (length n + m) for the current basis.
  void price(const std::vector<Scalar>& c) {
    for (int j = 0; j < width_; ++j) cost(j) = j < width_ - 1 ? c[j] : 0;
    for (int i = 0; i < m_; ++i) {
      const Scalar cb = c[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j < width_; ++j) cost(j) -= cb * at(i, j);
    }
  }

  void pivot(int r, int s) {
    const Scalar inv = 1 / at(r, s);
    for (int j = 0; j < width_; ++j) at(r, j) *= inv;
    at(r, s) = 1;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const Scalar f = at(i, s);
      if (f == 0) continue;
      Scalar* row = &at(i, 0);
      const Scalar* prow = &at(r, 0);
      for (int j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[s] = 0;
    }
    basis_[r] = s;
  }

  // Dantzig pricing; after a run of degenerate pivots switches to Bland's rule
  // until the objective moves again, which rules out cycling. Returns false if
  // unbounded.
  bool run(int allowed, int& iterations) {
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate >= opt_.degenerate_switch;
      int s = -1;
      for (int j = 0; j < allowed; ++j) {
        if (cost(j) >= -opt_.cost_tol) continue;
        if (s < 0 || (!bland && cost(j) < cost(s))) s = j;
        if (bland) break;
      }
      if (s < 0) return true;
      int r = -1;
      Scalar best = 0;
      for (int i = 0; i < m_; ++i) {
        const Scalar a = at(i, s);
        if (a <= opt_.pivot_tol) continue;
        const Scalar ratio = rhs(i) / a;
        if (r < 0 || ratio < best - opt_.pivot_tol ||
            (std::abs(ratio - best) <= opt_.pivot_tol && (bland ? basis_[i] < basis_[r] : a > at(r, s)))) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      degenerate = best <= opt_.pivot_tol ? degenerate + 1 : 0;
      pivot(r, s);
      if (++iterations >= opt_.max_iterations)
        throw NumericalStall("simplex reached " + std::to_string(iterations) + " iterations");
    }
  }

  // Pivots artificials out of the basis where a structural column allows it.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int best = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > opt_.pivot_tol && (best < 0 || std::abs(at(i, j)) > std::abs(at(i, best)))) best = j;
      if (best >= 0) pivot(i, best);
    }
  }

  int m_, n_, width_;
  SimplexOptions opt_;
  std::vector<Scalar> t_;
  std::vector<int> sign_;
  std::vector<int> basis_;
};

}  // namespace

SimplexResult solve_simplex(const SimplexProblem& p, const SimplexOptions& options) {
  if (p.a.size() != p.b.size()) throw std::invalid_argument("row count mismatch");
  Tableau t(p, options);
  const int m = t.m_, n = t.n_;
  SimplexResult out;

  std::vector<Scalar> phase1(n + m, 0);
  for (int i = 0; i < m; ++i) phase1[n + i] = 1;
  t.price(phase1);
  t.run(n, out.iterations);
  if (-t.rhs(m) > options.feasibility_tol) {
    out.status = SimplexStatus::infeasible;
    return out;
  }
  t.drive_out_artificials();

  std::vector<Scalar> phase2(n + m, 0);
  for (int j = 0; j < n; ++j) phase2[j] = p.c[j];
  t.price(phase2);
  if (!t.run(n, out.iterations)) {
    out.status = SimplexStatus::unbounded;
    return out;
  }
  out.status = SimplexStatus::optimal;
  out.x.assign(n, 0);
  for (int i = 0; i < m; ++i)
    if (t.basis_[i] < n) out.x[t.basis_[i]] = t.rhs(i);
  out.objective = -t.rhs(m);
  // The reduced cost of artificial i is −y_i in the sign-flipped system.
  out.dual.resize(m);
  for (int i = 0; i < m; ++i) out.dual[i] = -t.cost(n + i) * t.sign_[i];
  return out;
}

}  // namespace e8lp::lp
