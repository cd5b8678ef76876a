#include "e8lp/numeric.hpp"

#include <cmath>
#include <sstream>

namespace e8lp {

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits)
    : bits_(bits), saved_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

namespace {
[[maybe_unused]] const bool kDefaultPrecisionSet = [] {
  Real::default_precision(digits10_for_bits(kDefaultPrecisionBits));
  return true;
}();
}  // namespace

Real promote(const Real& x) { return Real(x, Real::default_precision()); }

Complex promote(const Complex& z) { return Complex(promote(z.re), promote(z.im)); }

Real real_pi() {
  Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p;
}

Real pi_power(int k) {
  Real p = real_pi();
  return boost::multiprecision::pow(p, k);
}

Real to_real(const Rational& q) {
  Real num(boost::multiprecision::numerator(q));
  Real den(boost::multiprecision::denominator(q));
  return num / den;
}

Real epsilon_for_bits(unsigned bits) { return boost::multiprecision::ldexp(Real(1), -static_cast<int>(bits)); }

std::string to_decimal(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return q.str();
}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = o.re * o.re + o.im * o.im;
  Real r = (re * o.re + im * o.im) / d;
  Real i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }

Real abs(const Complex& z) { return boost::multiprecision::hypot(z.re, z.im); }

Complex cexp(const Complex& z) {
  Real m = boost::multiprecision::exp(z.re);
  return Complex(m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im));
}

Complex exp_i_pi_times(const Complex& z) {
  // πi(x + iy) = -πy + iπx
  Real p = real_pi();
  return cexp(Complex(-p * z.im, p * z.re));
}

Complex cpow(Complex z, int k) {
  if (k < 0) return Complex(Real(1)) / cpow(std::move(z), -k);
  Complex result(Real(1));
  while (k > 0) {
    if (k & 1) result *= z;
    z *= z;
    k >>= 1;
  }
  return result;
}

namespace {

// Newton iteration on P_n with the three-term recurrence; T is Real or double.
template <class T, class CosFn>
void legendre_rule(int n, std::vector<T>& nodes, std::vector<T>& weights, const T& pi, const T& tol, CosFn cos_fn) {
  nodes.assign(n, T(0));
  weights.assign(n, T(0));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    T x = cos_fn(pi * (T(i) + T(0.75)) / (T(n) + T(0.5)));
    T dp = T(0);
    for (int iter = 0; iter < 100; ++iter) {
      T p0 = T(1);
      T p1 = x;
      for (int k = 2; k <= n; ++k) {
        T p2 = ((T(2 * k - 1)) * x * p1 - T(k - 1) * p0) / T(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = T(1);
      dp = T(n) * (x * p1 - p0) / (x * x - T(1));
      T dx = p1 / dp;
      x -= dx;
      if (dx < T(0) ? -dx < tol : dx < tol) {
        // one more pass keeps dp consistent with the converged node
        p0 = T(1);
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          T p2 = ((T(2 * k - 1)) * x * p1 - T(k - 1) * p0) / T(k);
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = T(1);
        dp = T(n) * (x * p1 - p0) / (x * x - T(1));
        break;
      }
    }
    T w = T(2) / ((T(1) - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

}  // namespace

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  Real tol = boost::multiprecision::ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.3219) + 4);
  legendre_rule<Real>(n, rule.nodes, rule.weights, real_pi(), tol,
                      [](const Real& v) { return Real(boost::multiprecision::cos(v)); });
  return rule;
}

GaussRuleD gauss_legendre_d(int n) {
  GaussRuleD rule;
  legendre_rule<double>(n, rule.nodes, rule.weights, M_PI, 1e-15, [](double v) { return std::cos(v); });
  return rule;
}

}  // namespace e8lp
