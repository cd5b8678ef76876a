#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "e8lp/errors.hpp"
#include "e8lp/lp_bounds.hpp"
#include "e8lp/radial_fourier.hpp"
#include "e8lp/reference.hpp"
#include "e8lp/simplex.hpp"

using namespace e8lp;
using namespace e8lp::lp;

namespace {

const double pi = std::acos(-1.0);

// Explicit sum L_k^a(x) = Σ_i (-1)^i C(k+a, k-i) x^i / i!.
double laguerre_sum(int k, double a, double x) {
  double s = 0;
  for (int i = 0; i <= k; ++i) {
    const double binom = std::tgamma(k + a + 1) / (std::tgamma(k - i + 1) * std::tgamma(a + i + 1));
    s += (i % 2 ? -1 : 1) * binom * std::pow(x, i) / std::tgamma(i + 1);
  }
  return s;
}

double checked_bound(int n, double r) {
  BoundCertificate c;
  c.n = n;
  c.r = r;
  return bound_from_certificate(c);
}

}  // namespace

TEST_CASE("simplex: small optimum with duals") {
  // min -x - 2y  s.t.  x + y + s1 = 4,  x + 3y + s2 = 6.
  SimplexProblem p{{{1, 1, 1, 0}, {1, 3, 0, 1}}, {4, 6}, {-1, -2, 0, 0}};
  const SimplexResult r = solve_simplex(p);
  REQUIRE(r.status == SimplexStatus::optimal);
  CHECK(double(r.objective) == doctest::Approx(-5));
  CHECK(double(r.x[0]) == doctest::Approx(3));
  CHECK(double(r.x[1]) == doctest::Approx(1));
  const Scalar dual_objective = r.dual[0] * p.b[0] + r.dual[1] * p.b[1];
  CHECK(double(dual_objective) == doctest::Approx(-5));
  for (int j = 0; j < 4; ++j) CHECK(double(r.dual[0] * p.a[0][j] + r.dual[1] * p.a[1][j] - p.c[j]) <= 1e-12);
}

TEST_CASE("simplex: infeasible, unbounded and negative right-hand sides") {
  SimplexProblem infeasible{{{1, 1}}, {-1}, {1, 1}};
  CHECK(solve_simplex(infeasible).status == SimplexStatus::infeasible);
  SimplexProblem unbounded{{{1, -1}}, {1}, {0, -1}};
  CHECK(solve_simplex(unbounded).status == SimplexStatus::unbounded);
  // x - y = -2 with min x + y has optimum y = 2.
  SimplexProblem flipped{{{1, -1}}, {-2}, {1, 1}};
  const SimplexResult r = solve_simplex(flipped);
  REQUIRE(r.status == SimplexStatus::optimal);
  CHECK(double(r.objective) == doctest::Approx(2));
}

TEST_CASE("simplex: cycling example terminates") {
  // Classic degenerate problem on which textbook Dantzig pricing cycles.
  SimplexProblem p{{{0.25, -8, -1, 9, 1, 0, 0}, {0.5, -12, -0.5, 3, 0, 1, 0}, {0, 0, 1, 0, 0, 0, 1}},
                   {0, 0, 1},
                   {-0.75, 20, -0.5, 6, 0, 0, 0}};
  SimplexOptions o;
  o.degenerate_switch = 2;
  const SimplexResult r = solve_simplex(p, o);
  REQUIRE(r.status == SimplexStatus::optimal);
  CHECK(double(r.objective) == doctest::Approx(-1.25));
  SimplexOptions capped;
  capped.max_iterations = 1;
  CHECK_THROWS_AS(solve_simplex(p, capped), NumericalStall);
}

TEST_CASE("eigenbasis values match the explicit Laguerre sum") {
  for (int n : {1, 2, 4, 8, 24}) {
    const EigenBasis basis(n, 7);
    const double a = n / 2.0 - 1;
    for (double r : {0.0, 0.3, 1.0, 1.7, 2.5}) {
      const auto v = basis.values(r);
      for (int k = 0; k < 7; ++k) {
        const double expect = laguerre_sum(k, a, 2 * pi * r * r) * std::exp(-pi * r * r) / laguerre_sum(k, a, 0);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(r);
        CHECK(double(v[k]) == doctest::Approx(expect).epsilon(1e-10).scale(1));
      }
    }
  }
}

TEST_CASE("eigenbasis is an eigenbasis of the Fourier transform") {
  for (int n : {1, 4, 8, 24}) {
    const radial::RadialTransform t(n);
    t.self_check(1e-8);
    const EigenBasis basis(n, 7);
    for (int k = 0; k <= 6; ++k) {
      auto bk = [&](double r) { return double(basis.values(r)[k]); };
      for (int j = 0; j < 20; ++j) {
        const double rho = 0.1 + 0.15 * j;
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(rho);
        CHECK(std::abs(t.apply(bk, rho) - EigenBasis::eigen_sign(k) * bk(rho)) < 1e-8);
      }
    }
  }
}

TEST_CASE("feasibility at known radii") {
  const LPResult one = assemble_and_solve(1, 1.0, 12, default_grids(1.0));
  CHECK(one.feasible);
  CHECK(one.min_f0 <= 1 + 1e-9);

  const double r8 = std::sqrt(2.0) * (1 + 1e-3);
  const LPResult e8 = assemble_and_solve(8, r8, 40, default_grids(r8));
  CHECK(e8.feasible);
  const EigenBasis basis(8, 40);
  CHECK(double(e8.function.eval_hat(0, basis)) == doctest::Approx(1));
  CHECK(double(e8.function.eval(0, basis)) <= 1 + 1e-9);

  const LPResult small = assemble_and_solve(8, 1.2, 40, default_grids(1.2));
  CHECK_FALSE(small.feasible);
  CHECK(small.min_f0 > 1);
}

TEST_CASE("density bound from a certificate") {
  CHECK(checked_bound(8, std::sqrt(2.0)) == doctest::Approx(std::pow(pi, 4) / 384).epsilon(1e-14));
  CHECK(checked_bound(1, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(checked_bound(24, 2.0) == doctest::Approx(std::pow(pi, 12) / 479001600.0).epsilon(1e-14));
  BoundCertificate bad;
  bad.n = 8;
  bad.r = std::sqrt(2.0);
  bad.margin_f = -1e-3;
  CHECK_FALSE(bad.valid());
  CHECK_THROWS_AS(bound_from_certificate(bad), InvalidCertificate);
}

TEST_CASE("optimized bounds in low dimensions") {
  for (int n : {1, 2, 3}) {
    const OptimizeResult r = optimize_r(n, default_degree(n));
    CAPTURE(n);
    CHECK(r.certificate.valid());
    CHECK(r.certificate.density_bound >= reference::record_density(n));
    CHECK(std::abs(r.certificate.density_bound / reference::lp_bound(n) - 1) < 0.005);
    CHECK(bound_from_certificate(r.certificate) == doctest::Approx(r.certificate.density_bound));
  }
}

TEST_CASE("raising the degree does not weaken the bound") {
  const double low = optimize_r(4, 12).certificate.density_bound;
  const double mid = optimize_r(4, 16).certificate.density_bound;
  const double high = optimize_r(4, 24).certificate.density_bound;
  CHECK(mid <= low * (1 + 1e-4));
  CHECK(high <= mid * (1 + 1e-4));
  CHECK(high >= reference::record_density(4));
}

TEST_CASE("argument checks") {
  CHECK_THROWS(EigenBasis(0, 5));
  CHECK_THROWS(EigenBasis(8, 0));
  CHECK_THROWS(optimize_r(4, 8));
  CHECK(default_degree(3) == 12);
  CHECK(default_degree(16) == 40);
  CHECK(default_degree(24) == 60);
}
