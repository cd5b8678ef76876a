#pragma once

// Scalar types shared by every module: exact rationals (GMP), working-precision
// reals (MPFR), and a minimal complex type over the working-precision reals.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <utility>
#include <vector>

namespace e8lp {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 128;

/// Decimal digits requested from MPFR for a given binary precision.
unsigned digits10_for_bits(unsigned bits);

/// RAII guard that sets the precision used for newly created `Real` values.
/// Values keep the precision they were created with.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
  unsigned saved_digits10_;
};

/// Copy at the current default precision. Arithmetic keeps the larger operand
/// precision, so inputs created in a lower-precision context are lifted first.
Real promote(const Real& x);

Real real_pi();
Real pi_power(int k);
Real to_real(const Rational& q);
/// 2^-bits at the current precision.
Real epsilon_for_bits(unsigned bits);

std::string to_decimal(const Real& x, int digits = 40);
std::string to_string(const Rational& q);  // "p/q" or "p"

/// Complex number over `Real`. Only the handful of operations needed for
/// evaluating q-series off the imaginary axis.
struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex operator-(const Complex& a);
Real abs(const Complex& z);
Complex promote(const Complex& z);
Complex exp_i_pi_times(const Complex& z);  // e^{πiz}
Complex cpow(Complex z, int k);
Complex cexp(const Complex& z);

/// Gauss–Legendre rule on [-1, 1] at the current precision.
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
GaussRule gauss_legendre(int n);

/// Same rule in double precision, used by the double-precision oracles.
struct GaussRuleD {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRuleD gauss_legendre_d(int n);

}  // namespace e8lp
