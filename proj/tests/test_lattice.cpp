#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "e8lp/errors.hpp"
#include "e8lp/lattice.hpp"

using namespace e8lp;
using namespace e8lp::lattice;
namespace mp = boost::multiprecision;

namespace {

std::uint64_t sigma3(std::uint64_t m) {
  std::uint64_t s = 0;
  for (std::uint64_t d = 1; d <= m; ++d)
    if (m % d == 0) s += d * d * d;
  return s;
}

// E8 in the coordinates D8 ∪ (D8 + ½·1): integer or half-integer vectors with
// even coordinate sum. Counts norms up to 4 by walking the box |x_i| ≤ 2.
std::map<int, std::uint64_t> brute_force_e8_counts(int max_norm) {
  std::map<int, std::uint64_t> counts;
  // Work in doubled coordinates y = 2x, so |x|² = |y|²/4.
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> vals;
    for (int y = -4; y <= 4; ++y)
      if ((y & 1) == parity) vals.push_back(y);
    std::vector<int> idx(8, 0);
    const int k = static_cast<int>(vals.size());
    while (true) {
      int norm4 = 0, sum2 = 0;
      for (int i = 0; i < 8; ++i) {
        norm4 += vals[idx[i]] * vals[idx[i]];
        sum2 += vals[idx[i]];
      }
      // Coordinate sum even  <=>  sum2 ≡ 0 mod 4.
      if (((sum2 % 4) + 4) % 4 == 0 && norm4 <= 4 * max_norm) ++counts[norm4 / 4];
      int p = 0;
      while (p < 8 && ++idx[p] == k) idx[p++] = 0;
      if (p == 8) break;
    }
  }
  return counts;
}

Real max_abs_diff(const std::vector<std::vector<Real>>& a, const GramMatrix& g) {
  Real worst = 0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) worst = mp::max(worst, Real(mp::abs(a[i][j] - to_real(g(i, j)))));
  return worst;
}

}  // namespace

TEST_CASE("e8 gram entries follow the Dynkin diagram") {
  const GramMatrix g = e8_gram();
  CHECK(g.dim() == 8);
  CHECK(g(0, 0) == 2);
  CHECK(g(0, 1) == -1);
  CHECK(g(0, 2) == 0);
  CHECK(g(2, 4) == -1);
  CHECK(g(3, 4) == 0);
  CHECK(g.determinant() == 1);
  CHECK(g.is_even());
  CHECK(g.is_positive_definite());
}

TEST_CASE("characteristic polynomials") {
  const std::vector<Rational> e8_expected = {1, -16, 105, -364, 714, -784, 440, -96, 1};
  CHECK(characteristic_polynomial(e8_gram()) == e8_expected);
  CHECK(characteristic_polynomial(GramMatrix::identity(2)) == std::vector<Rational>{1, -2, 1});
  const Rational twos[] = {2, 2};
  CHECK(characteristic_polynomial(GramMatrix::diagonal(twos)) == std::vector<Rational>{1, -4, 4});
}

TEST_CASE("gram validation") {
  CHECK_THROWS_AS(GramMatrix({{Rational(1), Rational(2)}, {Rational(3), Rational(1)}}), std::invalid_argument);
  const Rational neg[] = {1, -1};
  CHECK_THROWS_AS(basis_from_gram(GramMatrix::diagonal(neg)), NotPositiveDefinite);
  CHECK_FALSE(GramMatrix::diagonal(neg).is_positive_definite());
}

TEST_CASE("basis from gram") {
  PrecisionScope scope(128);
  const LatticeBasis z3 = basis_from_gram(GramMatrix::identity(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(z3.rows[i][j] == (i == j ? 1 : 0));

  const LatticeBasis e8 = basis_from_gram(e8_gram());
  CHECK(mp::abs(e8.gram()[0][0] - 2) < Real("1e-30"));
  CHECK(max_abs_diff(e8.gram(), e8_gram()) < Real("1e-30"));
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) CHECK(e8.rows[i][j] == 0);

  const Rational four[] = {4};
  const LatticeBasis one = basis_from_gram(GramMatrix::diagonal(four));
  CHECK(mp::abs(one.rows[0][0] - 2) < Real("1e-30"));
}

TEST_CASE("dual basis and covolume") {
  PrecisionScope scope(128);
  const LatticeBasis z2 = integer_lattice(2);
  const LatticeBasis z2d = dual_basis(z2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(mp::abs(z2d.rows[i][j] - (i == j ? 1 : 0)) < Real("1e-30"));

  const Rational four[] = {4};
  const LatticeBasis two = basis_from_gram(GramMatrix::diagonal(four));
  CHECK(mp::abs(dual_basis(two).rows[0][0] - Real("0.5")) < Real("1e-30"));

  const LatticeBasis e8 = basis_from_gram(e8_gram());
  const LatticeBasis e8d = dual_basis(e8);
  CHECK(mp::abs(covolume(e8) - 1) < Real("1e-30"));
  CHECK(mp::abs(covolume(e8d) - 1) < Real("1e-30"));
  // Integral unimodular: every dual vector has integral inner products with the lattice.
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      Real dot = 0;
      for (int k = 0; k < 8; ++k) dot += e8d.rows[i][k] * e8.rows[j][k];
      CHECK(mp::abs(dot - mp::round(dot)) < Real("1e-30"));
      CHECK(mp::abs(dot - (i == j ? 1 : 0)) < Real("1e-30"));
    }
  // Dual basis vectors also lie in E8: their coordinates in the E8 basis are integers.
  const GramMatrix dual_gram = *e8d.source_gram;
  CHECK(dual_gram.is_integral());
  CHECK(dual_gram.is_even());

  const Rational three[] = {9};
  CHECK(mp::abs(covolume(basis_from_gram(GramMatrix::diagonal(three))) - 3) < Real("1e-30"));
  CHECK_THROWS_AS(dual_basis(LatticeBasis{{{Real(1), Real(2)}, {Real(2), Real(4)}}, std::nullopt, 128}), SingularBasis);
}

TEST_CASE("covolume squared equals det gram for random positive definite forms") {
  PrecisionScope scope(128);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    // G = AᵀA + I with small integer A is positive definite.
    std::vector<std::vector<int>> a(n, std::vector<int>(n));
    for (auto& row : a)
      for (auto& x : row) x = dist(rng);
    std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) e[i][j] += a[k][i] * a[k][j];
        if (i == j) e[i][j] += 1;
      }
    const GramMatrix g(e);
    const LatticeBasis b = basis_from_gram(g);
    const Real vol = covolume(b);
    CHECK(mp::abs(vol * vol - to_real(g.determinant())) < Real("1e-25") * to_real(g.determinant()));

    // Double dual spans the same lattice: change of basis is the identity here.
    const LatticeBasis dd = dual_basis(dual_basis(b));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(mp::abs(dd.rows[i][j] - b.rows[i][j]) < Real("1e-25"));
  }
}

TEST_CASE("enumeration of small lattices") {
  const ThetaCounts z2 = enumerate_vectors(integer_lattice(2), Rational(1));
  CHECK(z2.counts.size() == 2);
  CHECK(z2.count(0) == 1);
  CHECK(z2.count(1) == 4);

  const LatticeBasis e8 = basis_from_gram(e8_gram());
  const ThetaCounts t2 = enumerate_vectors(e8, Rational(2));
  CHECK(t2.count(0) == 1);
  CHECK(t2.count(2) == 240);
  CHECK(t2.counts.size() == 2);

  const ThetaCounts t4 = enumerate_vectors(e8, Rational(4));
  CHECK(t4.count(4) == 240 * sigma3(2));
  CHECK(t4.count(4) == 2160);
  CHECK(*t4.minimal_norm() == 2);

  // Independent construction of E8 (D8 plus its half-integer coset).
  const auto brute = brute_force_e8_counts(4);
  CHECK(brute.at(0) == 1);
  CHECK(brute.at(2) == t4.count(2));
  CHECK(brute.at(4) == t4.count(4));
  CHECK(brute.count(1) == 0);
  CHECK(brute.count(3) == 0);
}

TEST_CASE("theta counts are symmetric and even for E8") {
  const ThetaCounts tc = enumerate_vectors(basis_from_gram(e8_gram()), Rational(12));
  CHECK(tc.count(0) == 1);
  for (const auto& [norm, c] : tc.counts) {
    if (norm == 0) continue;
    CHECK(c % 2 == 0);
    CHECK(mp::denominator(norm) == 1);
    CHECK(mp::numerator(norm) % 2 == 0);
    CHECK(c == 240 * sigma3(static_cast<std::uint64_t>(mp::numerator(norm).convert_to<long>() / 2)));
  }
}

TEST_CASE("enumeration budget and non-exact path") {
  CHECK_THROWS_AS(enumerate_vectors(basis_from_gram(e8_gram()), Rational(8), 1000), BudgetExceeded);
  LatticeBasis raw = integer_lattice(3);
  raw.source_gram.reset();
  const ThetaCounts tc = enumerate_vectors(raw, Rational(2));
  CHECK(tc.count(1) == 6);
  CHECK(tc.count(2) == 12);
  CHECK_THROWS_AS(enumerate_vectors(raw, Rational(-1)), std::invalid_argument);
}

TEST_CASE("ball volumes and densities") {
  CHECK(ball_volume(2, 1.0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(ball_volume(8, std::sqrt(2.0) / 2) == doctest::Approx(std::pow(M_PI, 4) / 384).epsilon(1e-14));
  CHECK(ball_volume(24, 1.0) == doctest::Approx(std::pow(M_PI, 12) / 479001600.0).epsilon(1e-13));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(4 * M_PI / 3).epsilon(1e-14));

  CHECK(packing_density(1, 1, 1, 1).density == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(packing_density(8, std::sqrt(2.0), 1, 1).density - 0.253669507) < 1e-9);
  CHECK(std::abs(packing_density(24, 2, 1, 1).density - 0.0019295743) < 1e-9);
  CHECK_THROWS_AS(packing_density(8, 0, 1, 1), std::invalid_argument);

  CHECK(greedy_lower_bound(1) == 0.5);
  CHECK(greedy_lower_bound(8) == 1.0 / 256);
  CHECK(greedy_lower_bound(24) == std::ldexp(1.0, -24));

  PrecisionScope scope(200);
  const Real v = ball_volume(8, mp::sqrt(Real(2)) / 2);
  CHECK(mp::abs(v - mp::pow(real_pi(), 4) / 384) < Real("1e-55"));
}

TEST_CASE("packing density is invariant under scaling") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 12;
    const double len = u(rng), vol = u(rng), s = u(rng);
    const double d1 = packing_density(n, len, vol).density;
    const double d2 = packing_density(n, len * s, vol * std::pow(s, n)).density;
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
  }
}

TEST_CASE("poisson summation with a gaussian") {
  PrecisionScope scope(128);
  const std::vector<Real> zero1{Real(0)};
  CHECK(poisson_verify(integer_lattice(1), zero1, 6.0) < Real("1e-10"));
  const std::vector<Real> half{Real("0.5")};
  CHECK(poisson_verify(integer_lattice(1), half, 6.0) < Real("1e-10"));
  const std::vector<Real> zero8(8, Real(0));
  CHECK(poisson_verify(basis_from_gram(e8_gram()), zero8, 6.0) < Real("1e-10"));

  // Skewed 2D lattice, translated.
  const GramMatrix g({{Rational(2), Rational(1)}, {Rational(1), Rational(3)}});
  const std::vector<Real> t{Real("0.3"), Real("-0.17")};
  CHECK(poisson_verify(basis_from_gram(g), t, 6.0) < Real("1e-10"));

  // Residual decreases as the truncation radius grows.
  const Real r3 = poisson_verify(integer_lattice(2), std::vector<Real>{Real("0.25"), Real(0)}, 1.0);
  const Real r4 = poisson_verify(integer_lattice(2), std::vector<Real>{Real("0.25"), Real(0)}, 2.0);
  const Real r6 = poisson_verify(integer_lattice(2), std::vector<Real>{Real("0.25"), Real(0)}, 3.0);
  CHECK(r4 < r3);
  CHECK(r6 < r4);
}
