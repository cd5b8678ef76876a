#include "e8lp/lp_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <optional>
#include <string>

#include "e8lp/errors.hpp"
#include "e8lp/lattice.hpp"
#include "e8lp/radial_fourier.hpp"
#include "e8lp/simplex.hpp"

namespace e8lp::lp {

namespace {

constexpr Scalar kPi = 3.141592653589793238462643383279502884L;

// Checks b̂_k = (−1)^k b_k for k ≤ 6 against the quadrature transform, once per dimension.
void validate_eigen_signs(int n) {
  static std::mutex mu;
  static std::set<int> done;
  std::lock_guard<std::mutex> lock(mu);
  if (done.count(n)) return;
  const radial::RadialTransform oracle(n);
  oracle.self_check(1e-8);
  const EigenBasis basis(n, 7);
  std::vector<std::vector<double>> samples(7, std::vector<double>(oracle.nodes().size()));
  for (std::size_t i = 0; i < oracle.nodes().size(); ++i) {
    const auto v = basis.values(oracle.nodes()[i]);
    for (int k = 0; k < 7; ++k) samples[k][i] = static_cast<double>(v[k]);
  }
  for (int j = 0; j < 20; ++j) {
    const double rho = 0.1 + 0.15 * j;
    const auto v = basis.values(rho);
    for (int k = 0; k < 7; ++k) {
      const double want = EigenBasis::eigen_sign(k) * static_cast<double>(v[k]);
      const double got = oracle.apply(samples[k], rho);
      if (!(std::abs(got - want) < 1e-8))
        throw OracleDiverged("eigenbasis element " + std::to_string(k) + " in dimension " + std::to_string(n) +
                             " misses its eigenvalue by " + std::to_string(std::abs(got - want)));
    }
  }
  done.insert(n);
}

Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// n points from a with first step h0, geometric ratio fitted so the last point is a + span.
std::vector<Scalar> geometric_grid(Scalar a, Scalar h0, Scalar span, int n) {
  std::vector<Scalar> g(n);
  if (h0 * (n - 1) >= span) {
    for (int i = 0; i < n; ++i) g[i] = a + span * i / (n - 1);
    return g;
  }
  Scalar lo = 1, hi = 2;
  auto reach = [&](Scalar q) { return h0 * (std::pow(q, n - 1) - 1) / (q - 1); };
  while (reach(hi) < span) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / 2;
    (reach(mid) < span ? lo : hi) = mid;
  }
  Scalar x = a, h = h0;
  for (int i = 0; i < n; ++i) {
    g[i] = x;
    x += h;
    h *= hi;
  }
  g[n - 1] = a + span;
  return g;
}

// Radial volume factor: a dip of f̂ at ρ enters f(0) = ∫f̂ with weight ~ρ^{n-1}.
Scalar volume_weight(int n, Scalar x) { return x > 1 ? std::pow(x, n - 1) : 1; }

struct Violation {
  Scalar where;
  Scalar amount;  // negative when violated
};

// Local minima of g over the grid, each refined by golden-section search between
// its grid neighbours, so dips narrower than the grid spacing are still seen.
template <class F>
std::vector<Violation> refined_minima(const F& g, const std::vector<Scalar>& x) {
  std::vector<Scalar> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = g(x[i]);
  std::vector<Violation> out;
  const Scalar phi = (std::sqrt(5.0L) - 1) / 2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool left = i == 0 || v[i] <= v[i - 1];
    const bool right = i + 1 == x.size() || v[i] <= v[i + 1];
    if (!left || !right) continue;
    if (i == 0 || i + 1 == x.size()) {
      out.push_back({x[i], v[i]});
      continue;
    }
    Scalar a = x[i - 1], b = x[i + 1];
    Scalar c = b - phi * (b - a), d = a + phi * (b - a);
    Scalar gc = g(c), gd = g(d);
    for (int it = 0; it < 60; ++it) {
      if (gc < gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - phi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + phi * (b - a);
        gd = g(d);
      }
    }
    const Scalar m = gc < gd ? c : d;
    out.push_back({m, std::min({gc, gd, v[i]})});
  }
  return out;
}

struct FineGrids {
  std::vector<Scalar> f, fhat;
};

FineGrids fine_grids(double r, int points, double span) {
  return {geometric_grid(r, static_cast<Scalar>(r) / 2000, span, points), [&] {
            std::vector<Scalar> g(points);
            for (int i = 0; i < points; ++i) g[i] = static_cast<Scalar>(span) * i / (points - 1);
            return g;
          }()};
}

}  // namespace

EigenBasis::EigenBasis(int n, int degree) : n_(n), degree_(degree), alpha_(n / 2.0 - 1) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  norm_.resize(degree);
  // L_k^α(0) = C(k+α, k)
  Scalar l0 = 1;
  for (int k = 0; k < degree; ++k) {
    if (k > 0) l0 *= (k + static_cast<Scalar>(alpha_)) / k;
    norm_[k] = 1 / l0;
  }
}

std::vector<Scalar> EigenBasis::values(Scalar r) const {
  const Scalar x = 2 * kPi * r * r;
  const Scalar a = alpha_;
  const Scalar g = std::exp(-x / 2);
  std::vector<Scalar> out(degree_);
  Scalar prev = 1, cur = 1 + a - x;
  out[0] = g * norm_[0];
  if (degree_ > 1) out[1] = g * cur * norm_[1];
  for (int k = 1; k + 1 < degree_; ++k) {
    const Scalar next = ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1);
    prev = cur;
    cur = next;
    out[k + 1] = g * cur * norm_[k + 1];
  }
  return out;
}

EigenBasis eigenbasis(int n, int degree) { return EigenBasis(n, degree); }

Scalar RadialFunction::eval(Scalar r, const EigenBasis& basis) const { return dot(coeffs, basis.values(r)); }

Scalar RadialFunction::eval_hat(Scalar r, const EigenBasis& basis) const {
  const auto v = basis.values(r);
  Scalar s = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += EigenBasis::eigen_sign(static_cast<int>(k)) * coeffs[k] * v[k];
  return s;
}

Grids default_grids(double r, int points, double span) {
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  if (points < 2) throw std::invalid_argument("need at least two grid points");
  Grids g;
  g.f_grid = geometric_grid(r, static_cast<Scalar>(r) / 200, span, points);
  g.fhat_grid.resize(points);
  for (int i = 0; i < points; ++i) g.fhat_grid[i] = static_cast<Scalar>(span) * i / (points - 1);
  return g;
}

LPResult assemble_and_solve(int n, double r, int degree, const Grids& grids) {
  if (n < 1 || degree < 1) throw std::invalid_argument("dimension and degree must be positive");
  validate_eigen_signs(n);
  const EigenBasis basis(n, degree);
  // Primal: min Σa_k  s.t.  f̂(0) = Σ(−1)^k a_k = 1, −f(x_i) ≥ 0, f̂(y_j) ≥ 0.
  // Solved through its dual in standard form:
  //   min −λ⁺ + λ⁻  s.t.  Σ_i w_i A_i + (λ⁺ − λ⁻)e = c,  w, λ± ≥ 0,
  // whose simplex multipliers are −a.
  std::vector<std::vector<Scalar>> rows;
  rows.reserve(grids.f_grid.size() + grids.fhat_grid.size());
  for (Scalar x : grids.f_grid) {
    if (x < static_cast<Scalar>(r) * (1 - 1e-12L)) continue;
    auto v = basis.values(x);
    for (auto& e : v) e = -e;
    rows.push_back(std::move(v));
  }
  for (Scalar y : grids.fhat_grid) {
    auto v = basis.values(y);
    for (int k = 0; k < degree; ++k) v[k] *= EigenBasis::eigen_sign(k);
    rows.push_back(std::move(v));
  }
  // Each row only fixes a sign, so it can be scaled freely; unit max-norm keeps
  // far-out rows visible to the pivot tolerances.
  for (auto& row : rows) {
    Scalar big = 0;
    for (Scalar e : row) big = std::max(big, std::abs(e));
    if (big > 0)
      for (Scalar& e : row) e /= big;
  }
  const int m = static_cast<int>(rows.size());
  SimplexProblem p;
  p.a.assign(degree, std::vector<Scalar>(m + 2));
  p.b.assign(degree, 1);  // c_k = b_k(0) = 1
  p.c.assign(m + 2, 0);
  for (int k = 0; k < degree; ++k) {
    for (int i = 0; i < m; ++i) p.a[k][i] = rows[i][k];
    p.a[k][m] = EigenBasis::eigen_sign(k);
    p.a[k][m + 1] = -EigenBasis::eigen_sign(k);
  }
  p.c[m] = -1;
  p.c[m + 1] = 1;

  const SimplexResult s = solve_simplex(p);
  LPResult out;
  out.iterations = s.iterations;
  out.function.n = n;
  if (s.status == SimplexStatus::unbounded || s.status == SimplexStatus::infeasible) {
    // Unbounded dual: the sampled constraints admit no function with f̂(0) = 1.
    // Infeasible dual: f(0) is unbounded below, which never happens for sane grids.
    if (s.status == SimplexStatus::infeasible) throw NumericalStall("dual LP infeasible at r = " + std::to_string(r));
    out.feasible = false;
    out.min_f0 = INFINITY;
    return out;
  }
  out.function.coeffs.resize(degree);
  for (int k = 0; k < degree; ++k) out.function.coeffs[k] = -s.dual[k];
  out.min_f0 = static_cast<double>(-s.objective);
  out.feasible = out.min_f0 <= 1;
  return out;
}

int default_degree(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (n <= 4) return 12;
  if (n <= 16) return 40;
  return 60;
}

void certify(BoundCertificate& c, const EigenBasis& basis, int fine_points, double span) {
  RadialFunction f{c.n, std::vector<Scalar>(c.coeffs.begin(), c.coeffs.end())};
  const FineGrids g = fine_grids(c.r, fine_points, span);
  Scalar mf = INFINITY, mh = INFINITY;
  for (const auto& m : refined_minima([&](Scalar x) { return -f.eval(x, basis) * volume_weight(c.n, x); }, g.f))
    mf = std::min(mf, m.amount);
  for (const auto& m : refined_minima([&](Scalar y) { return f.eval_hat(y, basis) * volume_weight(c.n, y); }, g.fhat))
    mh = std::min(mh, m.amount);
  c.margin_f = static_cast<double>(mf);
  c.margin_fhat = static_cast<double>(mh);
  c.density_bound = lattice::ball_volume(c.n, c.r / 2);
}

namespace {

// Cutting-plane certification at a fixed radius. Sampled solutions dip below zero
// between grid points; each round adds the local minima of the violations on the
// fine grid as new sample points. Cuts persist across radii.
class Certifier {
 public:
  Certifier(int n, int degree, const OptimizeOptions& o, int& solves)
      : n_(n), degree_(degree), opt_(o), basis_(n, degree), solves_(solves) {}

  // Certificate at r, or nullopt when the sampled LP is infeasible there. `worst`
  // receives the remaining violation when the cut budget runs out.
  std::optional<BoundCertificate> at(double r, double& worst) {
    worst = 0;
    const int fine = opt_.grid_points * opt_.fine_factor;
    for (int round = 0; round <= opt_.max_cuts; ++round) {
      Grids g = default_grids(r, opt_.grid_points, opt_.span);
      for (Scalar x : f_cuts_)
        if (x >= r) g.f_grid.push_back(x);
      g.fhat_grid.insert(g.fhat_grid.end(), fhat_cuts_.begin(), fhat_cuts_.end());
      ++solves_;
      const LPResult lp = assemble_and_solve(n_, r, degree_, g);
      if (!lp.feasible) return std::nullopt;
      BoundCertificate c;
      c.n = n_;
      c.r = r;
      c.degree = degree_;
      c.coeffs.assign(lp.function.coeffs.begin(), lp.function.coeffs.end());
      certify(c, basis_, fine, opt_.span);
      if (c.valid()) return c;
      worst = std::max(-c.margin_f, -c.margin_fhat);
      const RadialFunction f{n_, lp.function.coeffs};
      const FineGrids fg = fine_grids(r, fine, opt_.span);
      const int n = n_;
      const EigenBasis& b = basis_;
      for (const auto& m : refined_minima([&](Scalar x) { return -f.eval(x, b) * volume_weight(n, x); }, fg.f))
        if (m.amount < -c.tolerance) f_cuts_.push_back(m.where);
      for (const auto& m : refined_minima([&](Scalar y) { return f.eval_hat(y, b) * volume_weight(n, y); }, fg.fhat))
        if (m.amount < -c.tolerance) fhat_cuts_.push_back(m.where);
    }
    return std::nullopt;
  }

 private:
  int n_, degree_;
  OptimizeOptions opt_;
  EigenBasis basis_;
  int& solves_;
  std::vector<Scalar> f_cuts_, fhat_cuts_;
};

}  // namespace

OptimizeResult optimize_r(int n, int degree, const OptimizeOptions& options) {
  if (degree < 12) throw std::invalid_argument("degree must be at least 12");
  if (!(options.tol > 0)) throw std::invalid_argument("tolerance must be positive");
  OptimizeResult out;
  auto feasible = [&](double r) {
    ++out.lp_solves;
    return assemble_and_solve(n, r, degree, default_grids(r, options.grid_points, options.span)).feasible;
  };
  double lo = 0.5, hi = 1.0;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 1.25;
    if (hi > 100) throw NumericalStall("no feasible radius below 100");
  }
  if (hi == 1.0)
    while (lo > 1e-3 && feasible(lo)) {
      hi = lo;
      lo /= 2;
    }
  while (hi - lo > options.tol * hi) {
    const double mid = (lo + hi) / 2;
    (feasible(mid) ? hi : lo) = mid;
  }
  out.r_star = hi;

  // Certify at r_star; on failure inflate r by a factor driven by the remaining
  // violation, then tighten again between the last failure and the certified radius.
  Certifier certifier(n, degree, options, out.lp_solves);
  double failed = hi, worst = 0, step = 0;
  std::optional<BoundCertificate> cert = certifier.at(hi, worst);
  double r = hi;
  for (int k = 0; !cert; ++k) {
    if (k > 60) throw NumericalStall("certification did not converge");
    if (worst == 0) failed = r;  // infeasible rather than out of cuts
    step = std::max({2 * step, 10 * worst, options.tol});
    r = hi * (1 + step);
    cert = certifier.at(r, worst);
  }
  if (r > hi) {
    double good = r;
    while (good - failed > options.tol * good) {
      const double mid = (failed + good) / 2;
      if (auto c = certifier.at(mid, worst)) {
        cert = c;
        good = mid;
      } else {
        failed = mid;
      }
    }
  }
  out.certificate = *cert;
  return out;
}

double bound_from_certificate(const BoundCertificate& c) {
  if (c.n < 1 || !(c.r > 0)) throw InvalidCertificate("certificate has no dimension or radius");
  if (!c.valid())
    throw InvalidCertificate("sign margins violated: f " + std::to_string(c.margin_f) + ", f_hat " +
                             std::to_string(c.margin_fhat));
  return lattice::ball_volume(c.n, c.r / 2);
}

}  // namespace e8lp::lp
