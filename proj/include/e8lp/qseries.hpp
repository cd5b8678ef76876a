#pragma once

// Truncated Laurent series in a nome q_ν = e^{2πiz/ν} with exact rational
// coefficients and a global factor π^pi_power.

#include <cstdint>
#include <vector>

#include "e8lp/numeric.hpp"

namespace e8lp::forms {

class QSeries {
 public:
  /// Zero series known up to `order`.
  static QSeries zero(int nome_div, int order, int pi_power = 0);
  /// Constant series c, known up to `order`.
  static QSeries constant(const Rational& c, int order, int nome_div = 1);
  /// Coefficients for exponents min_exp .. min_exp + coeffs.size() - 1; order is
  /// the last of these exponents.
  QSeries(int nome_div, int min_exp, std::vector<Rational> coeffs, int pi_power = 0);

  int nome_div() const { return nome_div_; }
  /// Exponent of the leading nonzero coefficient (order + 1 for a zero series).
  int min_exp() const { return min_exp_; }
  /// Highest exponent whose coefficient is known.
  int order() const { return order_; }
  int pi_power() const { return pi_power_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Coefficient of q_ν^e; zero below min_exp. Throws OrderUnderflow above order.
  Rational coeff(int e) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  /// Same series written in the nome q₂ (exponents doubled).
  QSeries promoted() const;
  QSeries truncated(int order) const;
  QSeries with_pi_power(int k) const;
  /// f(z) ↦ f(z+1).
  QSeries translate() const;
  QSeries pow(int k) const;
  QSeries inverse() const;

  QSeries& operator*=(const Rational& c);
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend QSeries operator/(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const Rational& c, QSeries a) { return a *= c; }
  friend bool operator==(const QSeries&, const QSeries&) = default;

 private:
  QSeries() = default;
  void normalize();

  int nome_div_ = 1;
  int min_exp_ = 0;
  int order_ = 0;
  int pi_power_ = 0;
  std::vector<Rational> coeffs_;
};

// Coefficient generators.
Integer divisor_sigma(int power, std::int64_t m);
/// B_k with B_1 = -1/2.
Rational bernoulli(int k);
/// 2/ζ(1-k) = -2k/B_k for even k ≥ 2.
Rational eisenstein_constant(int k);

QSeries eisenstein_qseries(int k, int order);
/// Θ_ℤ = Σ q₂^{n²}.
QSeries theta_z_qseries(int order);
/// Θ_ℤ⁴, its translate, and their difference (nome q₂).
QSeries theta3_pow4(int order);
QSeries theta4_pow4(int order);
QSeries theta2_pow4(int order);
/// E6² − E4³ = −1728q + ….
QSeries discriminant_like(int order);
/// (7/12)E4³ + (5/12)E6².
QSeries leech_theta(int order);

/// Coefficients converted to working precision, for repeated evaluation.
struct NumericSeries {
  int nome_div = 1;
  int min_exp = 0;
  int order = 0;
  int pi_power = 0;
  std::vector<Real> coeffs;  // exponent min_exp + i, π power already applied
  unsigned bits = kDefaultPrecisionBits;
};
NumericSeries to_numeric(const QSeries& s);

struct SeriesValue {
  Complex value;
  Real tail;  // heuristic bound on the truncated remainder
};

/// Evaluate at z in the upper half plane. `rel_tol` ≤ 0 means no tail check;
/// otherwise TailTooLarge is thrown when tail > rel_tol·max(1, |value|).
SeriesValue eval_qseries(const NumericSeries& s, const Complex& z, const Real& rel_tol = Real(0));
SeriesValue eval_qseries(const QSeries& s, const Complex& z, const Real& rel_tol = Real(0));

/// Real-axis shortcut: value at z = it, written in terms of the real nome.
struct RealSeriesValue {
  Real value;
  Real tail;
};
RealSeriesValue eval_imag_axis(const NumericSeries& s, const Real& t, const Real& rel_tol = Real(0));
/// Same, given the nome x = e^{-2πt/ν} directly.
RealSeriesValue eval_at_nome(const NumericSeries& s, const Real& x, const Real& rel_tol = Real(0));

}  // namespace e8lp::forms
