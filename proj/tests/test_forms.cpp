#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "e8lp/errors.hpp"
#include "e8lp/forms.hpp"
#include "e8lp/lattice.hpp"

using namespace e8lp;
using namespace e8lp::forms;
namespace mp = boost::multiprecision;

namespace {

std::int64_t sigma_brute(int power, std::int64_t m) {
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= m; ++d)
    if (m % d == 0) {
      std::int64_t p = 1;
      for (int i = 0; i < power; ++i) p *= d;
      s += p;
    }
  return s;
}

// Σ_{j=0}^{m} C(m+1, j) B_j = 0.
std::vector<Rational> bernoulli_table(int n) {
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rational acc = 0;
    Integer binom = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      acc += Rational(binom) * b[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b[m] = -acc / Rational(m + 1);
  }
  return b;
}

// Number of x in ℤ^n with |x|² = k, by walking the box.
std::int64_t r_brute(int n, int k) {
  const int lim = static_cast<int>(std::sqrt(k)) + 1;
  std::vector<int> x(n, -lim);
  std::int64_t count = 0;
  while (true) {
    int s = 0;
    for (int v : x) s += v * v;
    if (s == k) ++count;
    int p = 0;
    while (p < n && ++x[p] > lim) x[p++] = -lim;
    if (p == n) break;
  }
  return count;
}

// q ∏ (1 − q^n)^24 by repeated multiplication of integer polynomials.
std::vector<Integer> delta_product(int order) {
  std::vector<Integer> p(order + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= order; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (int e = order; e >= n; --e) p[e] -= p[e - n];
  std::vector<Integer> d(order + 1, 0);
  for (int e = 1; e <= order; ++e) d[e] = p[e - 1];
  return d;
}

double err(const Complex& a, const Complex& b) { return abs(a - b).convert_to<double>(); }

}  // namespace

TEST_CASE("divisor sums") {
  CHECK(divisor_sigma(3, 1) == 1);
  CHECK(divisor_sigma(3, 2) == 9);
  CHECK(divisor_sigma(3, 3) == 28);
  for (int p = 0; p <= 5; ++p)
    for (int m = 1; m <= 60; ++m) CHECK(divisor_sigma(p, m) == sigma_brute(p, m));
}

TEST_CASE("bernoulli numbers and eisenstein constants") {
  const auto table = bernoulli_table(20);
  for (int k = 0; k <= 20; ++k) CHECK(bernoulli(k) == table[k]);
  CHECK(bernoulli(12) == Rational(-691, 2730));
  CHECK(eisenstein_constant(2) == -24);
  CHECK(eisenstein_constant(4) == 240);
  CHECK(eisenstein_constant(6) == -504);
  CHECK(eisenstein_constant(12) == Rational(65520, 691));
  CHECK_THROWS_AS(eisenstein_constant(3), InvalidWeight);
  CHECK_THROWS_AS(eisenstein_qseries(0, 4), InvalidWeight);
}

TEST_CASE("eisenstein series") {
  const QSeries e4 = eisenstein_qseries(4, 3);
  CHECK(e4.coeffs() == std::vector<Rational>{1, 240, 2160, 6720});
  const QSeries e2 = eisenstein_qseries(2, 2);
  CHECK(e2.coeffs() == std::vector<Rational>{1, -24, -72});
  const QSeries e6 = eisenstein_qseries(6, 1);
  CHECK(e6.coeffs() == std::vector<Rational>{1, -504});
  const QSeries e4_long = eisenstein_qseries(4, 40);
  for (int m = 1; m <= 40; ++m) CHECK(e4_long.coeff(m) == 240 * sigma_brute(3, m));
  // E4² = E8 (one-dimensional space of weight 8).
  const QSeries e8 = eisenstein_qseries(8, 30);
  CHECK(e4_long.truncated(30) * e4_long.truncated(30) == e8);
  // E4·E6 = E10.
  CHECK(eisenstein_qseries(4, 25) * eisenstein_qseries(6, 25) == eisenstein_qseries(10, 25));
}

TEST_CASE("theta series of the integers") {
  CHECK(theta_z_qseries(1).coeffs() == std::vector<Rational>{1, 2});
  CHECK(theta_z_qseries(4).coeffs() == std::vector<Rational>{1, 2, 0, 0, 2});
  CHECK(theta_z_qseries(9).nome_div() == 2);
  const QSeries t4 = theta_z_qseries(9).pow(4);
  CHECK(t4.coeff(2) == 24);
  for (int k = 0; k <= 9; ++k) CHECK(t4.coeff(k) == r_brute(4, k));
  CHECK(t4.translate().coeffs() == std::vector<Rational>{1, -8, 24, -32, 24, -48, 96, -64, 24, -104});
  CHECK(t4.translate().translate() == t4);
  const QSeries t2 = theta2_pow4(12);
  CHECK(t2.min_exp() == 1);
  CHECK(t2.coeff(1) == 16);
  CHECK(t2.coeff(2) == 0);
}

TEST_CASE("theta powers match lattice enumeration of Z^n") {
  for (int n = 1; n <= 4; ++n) {
    const int k = 8;
    const QSeries power = theta_z_qseries(k).pow(n);
    const auto tc = lattice::enumerate_vectors(lattice::integer_lattice(n), Rational(k));
    for (int m = 0; m <= k; ++m) CHECK(power.coeff(m) == Rational(tc.count(Rational(m))));
  }
}

TEST_CASE("series arithmetic") {
  const QSeries d = discriminant_like(6);
  CHECK(d.min_exp() == 1);
  CHECK(d.coeff(1) == -1728);
  CHECK(d.coeff(2) == 41472);
  CHECK((-d).coeff(2) == -41472);

  // (1 − q)⁻¹ = Σ qⁿ, known to the same relative order.
  const QSeries one_minus_q(1, 0, {Rational(1), Rational(-1), Rational(0), Rational(0)});
  const QSeries inv = one_minus_q.inverse();
  CHECK(inv.coeffs() == std::vector<Rational>{1, 1, 1, 1});
  CHECK(inv.order() == 3);
  CHECK(one_minus_q / one_minus_q == QSeries::constant(1, 3));

  // Orders follow the leading exponents.
  const QSeries a(1, 2, {Rational(1), Rational(3), Rational(5)});  // order 4
  const QSeries b(1, -1, {Rational(2), Rational(1)});              // order 0
  CHECK((a * b).min_exp() == 1);
  CHECK((a * b).order() == 2);
  CHECK((a / b).min_exp() == 3);
  CHECK((a / b).order() == 4);
  CHECK((a + b).order() == 0);

  // Promotion doubles exponents.
  const QSeries p = a.promoted();
  CHECK(p.nome_div() == 2);
  CHECK(p.min_exp() == 4);
  CHECK(p.order() == 9);
  CHECK(p.coeff(6) == 3);
  CHECK(p.coeff(5) == 0);
  CHECK((a * theta_z_qseries(9)).nome_div() == 2);

  CHECK_THROWS_AS(QSeries::zero(1, 5).inverse(), DivideByZeroSeries);
  CHECK_THROWS_AS(a.with_pi_power(1) + a, IncompatibleSeries);
  CHECK_THROWS_AS(a.coeff(5), OrderUnderflow);
  CHECK_THROWS_AS(a.truncated(7), OrderUnderflow);
  CHECK((a - a).is_zero());
  CHECK((a.with_pi_power(1) * b.with_pi_power(2)).pi_power() == 3);
}

TEST_CASE("leech theta series") {
  const int order = 10;
  const QSeries leech = leech_theta(order);
  CHECK(leech.coeff(0) == 1);
  CHECK(leech.coeff(1) == 0);
  CHECK(leech.coeff(2) == 196560);
  // Independent route: E4³ − 720Δ with Δ from the product formula.
  const auto delta = delta_product(order);
  const QSeries e4c = eisenstein_qseries(4, order).pow(3);
  for (int m = 0; m <= order; ++m) CHECK(leech.coeff(m) == e4c.coeff(m) - 720 * Rational(delta[m]));
  CHECK(leech.coeff(3) == 16773120);
}

TEST_CASE("phi as a depth two quasiform") {
  const QuasiForm phi = phi_quasiform(12);
  CHECK(phi.depth() == 2);
  CHECK(phi.weight == 0);
  for (const auto& part : phi.parts) {
    CHECK(part.pi_power() == 1);
    CHECK(part.min_exp() == -1);
  }
  const QSeries collapsed = phi.collapse();
  CHECK(collapsed.min_exp() == 1);
  CHECK(collapsed.coeff(1) == -240);
  CHECK(collapsed.pi_power() == 1);
  // Same as expanding the closed form directly.
  const QSeries e2 = eisenstein_qseries(2, 12), e4 = eisenstein_qseries(4, 12), e6 = eisenstein_qseries(6, 12);
  const QSeries direct = Rational(4, 5) * ((e2 * e4 - e6).pow(2) / (e6 * e6 - e4.pow(3)));
  const int common = std::min(direct.order(), collapsed.order());
  for (int m = 1; m <= common; ++m) CHECK(collapsed.coeff(m) == direct.coeff(m));
}

TEST_CASE("psi as a level two form") {
  const QSeries psi = psi_qseries(16);
  CHECK(psi.nome_div() == 2);
  CHECK(psi.pi_power() == -1);
  CHECK(psi.min_exp() == -2);
  CHECK(psi.coeff(-2) == Rational(-1, 60));
  CHECK(psi.coeff(-1) == 0);
  CHECK(psi.coeff(0) == Rational(-12, 5));
  // Odd exponents of ψ and ψ|_T differ only by sign.
  const QSeries diff = psi - psi.translate();
  for (int e = diff.min_exp(); e <= diff.order(); ++e)
    if (e % 2 == 0) CHECK(diff.coeff(e) == 0);
}

TEST_CASE("evaluation at z = i") {
  PrecisionScope scope(128);
  const FormEvaluator ev(64, 128);
  const Complex i(Real(0), Real(1));
  // E4(i) = 3Γ(1/4)⁸/(2π)⁶.
  const double e4_i = 3 * std::pow(std::tgamma(0.25), 8) / std::pow(2 * M_PI, 6);
  CHECK(ev.eisenstein_direct(4, i).re.convert_to<double>() == doctest::Approx(e4_i).epsilon(1e-14));
  CHECK(std::abs(ev.eisenstein_direct(4, i).re.convert_to<double>() - 1.4557) < 1e-4);
  CHECK(err(ev.eisenstein_direct(4, i), ev.eisenstein_transformed(4, i)) < 1e-30);
  CHECK(abs(ev.eisenstein_direct(6, i)) < Real("1e-30"));
  CHECK(mp::abs(ev.eisenstein_direct(2, i).re - 3 / real_pi()) < Real("1e-30"));
  // Θ_ℤ(i) = π^{1/4}/Γ(3/4).
  const double th_i = std::pow(M_PI, 0.25) / std::tgamma(0.75);
  CHECK(ev.theta3_direct(i).re.convert_to<double>() == doctest::Approx(th_i).epsilon(1e-14));
  CHECK(err(ev.theta3_direct(i), ev.theta3_transformed(i)) < 1e-30);
  CHECK(abs(eval_qseries(QSeries::constant(1, 5), i).value - Complex(Real(1))) < Real("1e-30"));
}

TEST_CASE("dual-path agreement on the overlap band") {
  PrecisionScope scope(128);
  const FormEvaluator ev(64, 128);
  double worst = 0;
  for (int j = 0; j < 50; ++j) {
    const Real t = Real("0.7") + Real("0.8") * j / 49;
    const Complex z(Real(0), t);
    for (int k : {2, 4, 6}) worst = std::max(worst, err(ev.eisenstein_direct(k, z), ev.eisenstein_transformed(k, z)));
    const ThetaFourth d = ev.theta_direct(z), tr = ev.theta_transformed(z);
    worst = std::max({worst, err(d.t2, tr.t2), err(d.t3, tr.t3), err(d.t4, tr.t4)});
    worst = std::max(worst, err(ev.theta3_direct(z), ev.theta3_transformed(z)));
  }
  CHECK(worst < 1e-20);
  // Off the axis as well.
  for (const auto& z : default_sample_points()) {
    CHECK(err(ev.eisenstein_direct(2, z), ev.eisenstein_transformed(2, z)) < 1e-20);
    const ThetaFourth d = ev.theta_direct(z), tr = ev.theta_transformed(z);
    CHECK(err(d.t4, tr.t4) < 1e-20);
    CHECK(err(d.t2, tr.t2) < 1e-20);
  }
}

TEST_CASE("stable evaluation entry points") {
  const Real t("1.3");
  const Complex a = eval_eisenstein_stable(2, t, Which::at_i_over_t);
  const Complex b = eval_eisenstein_stable(2, t, Which::at_it);
  // E2(i/t) = −t²E2(it) + 6t/π.
  CHECK(abs(a - (Complex(-t * t) * b + Complex(6 * t / real_pi()))) < Real("1e-25"));
  CHECK(abs(eval_theta_stable(Theta::theta4, Complex(Real(0), Real(40))) - Complex(Real(1))) < Real("1e-25"));
  const Complex big(Real(0), Real(6));
  const Complex diff = eval_theta_stable(Theta::theta3, big) - eval_theta_stable(Theta::theta4, big);
  const Complex q2 = exp_i_pi_times(big);
  CHECK(abs(diff - Complex(Real(16)) * q2) < 100 * mp::pow(abs(q2), 3));
}

TEST_CASE("phi parts agree with the collapsed series") {
  PrecisionScope scope(128);
  const FormEvaluator ev(64, 128);
  const NumericSeries collapsed = to_numeric(phi_quasiform(64).collapse());
  for (const char* p : {"1.2i", "2i", "0.3+1.1i", "1.5i"}) {
    const Complex z = parse_point(p);
    CHECK(err(ev.phi(z), eval_qseries(collapsed, z).value) < 1e-25);
  }
}

TEST_CASE("ring closure under evaluation") {
  PrecisionScope scope(128);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> x(-0.5, 0.5), y(1.0, 2.0);
  const NumericSeries e4 = to_numeric(eisenstein_qseries(4, 64));
  const NumericSeries e6 = to_numeric(eisenstein_qseries(6, 64));
  const NumericSeries e10 = to_numeric(eisenstein_qseries(10, 64));
  for (int k = 0; k < 10; ++k) {
    const Complex z(Real(x(rng)), Real(y(rng)));
    const auto a = eval_qseries(e4, z), b = eval_qseries(e6, z), c = eval_qseries(e10, z);
    CHECK(abs(a.value * b.value - c.value) < 10 * (a.tail + b.tail + c.tail) + Real("1e-30"));
  }
}

TEST_CASE("order doubling stability") {
  PrecisionScope scope(128);
  const FormEvaluator lo(64, 128), hi(128, 128);
  for (const auto& z : default_sample_points()) {
    CHECK(err(lo.psi(z), hi.psi(z)) < 1e-25);
    CHECK(err(lo.phi(z), hi.phi(z)) < 1e-25);
  }
}

TEST_CASE("tail check") {
  PrecisionScope scope(128);
  const NumericSeries e4 = to_numeric(eisenstein_qseries(4, 8));
  CHECK_THROWS_AS(eval_qseries(e4, Complex(Real(0), Real("0.2")), Real("1e-30")), TailTooLarge);
  CHECK_NOTHROW(eval_qseries(e4, Complex(Real(0), Real(5)), Real("1e-30")));
}

TEST_CASE("point parsing") {
  auto near = [](const Complex& z, double re, double im) {
    return std::abs(z.re.convert_to<double>() - re) < 1e-15 && std::abs(z.im.convert_to<double>() - im) < 1e-15;
  };
  CHECK(near(parse_point("2i"), 0, 2));
  CHECK(near(parse_point("3i/2"), 0, 1.5));
  CHECK(near(parse_point("i"), 0, 1));
  CHECK(near(parse_point("0.5+1i"), 0.5, 1));
  CHECK(near(parse_point("-0.3+1.3i"), -0.3, 1.3));
  CHECK(near(parse_point(" 0.25 + 0.9i"), 0.25, 0.9));
  CHECK(parse_points("2i,3i/2").size() == 2);
  CHECK(default_sample_points().size() == 10);
}

TEST_CASE("identity report") {
  const IdentityReport r = verify_identities(20, default_sample_points(), 128);
  REQUIRE(r.checks.size() == 4);
  for (const auto& c : r.checks) {
    INFO(c.name << ": " << c.residual << " " << c.detail);
    CHECK(c.passed);
  }
  CHECK(r.checks[2].residual < 1e-25);
  CHECK(r.checks[3].residual < 1e-20);
}
