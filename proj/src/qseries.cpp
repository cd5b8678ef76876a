#include "e8lp/qseries.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "e8lp/errors.hpp"

namespace e8lp::forms {

namespace mp = boost::multiprecision;

namespace {

int parity(int e) { return ((e % 2) + 2) % 2; }

void align(QSeries& a, QSeries& b) {
  if (a.nome_div() == b.nome_div()) return;
  if (a.nome_div() == 1) a = a.promoted();
  if (b.nome_div() == 1) b = b.promoted();
}

}  // namespace

QSeries QSeries::zero(int nome_div, int order, int pi_power) {
  QSeries s;
  s.nome_div_ = nome_div;
  s.order_ = order;
  s.min_exp_ = order + 1;
  s.pi_power_ = pi_power;
  return s;
}

QSeries QSeries::constant(const Rational& c, int order, int nome_div) {
  std::vector<Rational> coeffs(std::max(order + 1, 1), Rational(0));
  coeffs[0] = c;
  QSeries s(nome_div, 0, std::move(coeffs));
  return s.truncated(order);
}

QSeries::QSeries(int nome_div, int min_exp, std::vector<Rational> coeffs, int pi_power)
    : nome_div_(nome_div), min_exp_(min_exp), pi_power_(pi_power), coeffs_(std::move(coeffs)) {
  if (nome_div != 1 && nome_div != 2) throw std::invalid_argument("nome_div must be 1 or 2");
  order_ = min_exp_ + static_cast<int>(coeffs_.size()) - 1;
  normalize();
}

void QSeries::normalize() {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    min_exp_ = order_ + 1;
    return;
  }
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
  min_exp_ += static_cast<int>(lead);
}

Rational QSeries::coeff(int e) const {
  if (e > order_)
    throw OrderUnderflow("coefficient of exponent " + std::to_string(e) + " beyond order " + std::to_string(order_));
  if (e < min_exp_) return Rational(0);
  return coeffs_[e - min_exp_];
}

QSeries QSeries::promoted() const {
  if (nome_div_ == 2) return *this;
  QSeries s;
  s.nome_div_ = 2;
  s.pi_power_ = pi_power_;
  s.order_ = 2 * order_ + 1;
  if (is_zero()) {
    s.min_exp_ = s.order_ + 1;
    return s;
  }
  s.min_exp_ = 2 * min_exp_;
  s.coeffs_.assign(2 * coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s.coeffs_[2 * i] = coeffs_[i];
  return s;
}

QSeries QSeries::truncated(int order) const {
  if (order > order_) throw OrderUnderflow("cannot extend a series beyond its known order");
  QSeries s = *this;
  s.order_ = order;
  if (order < min_exp_) {
    s.coeffs_.clear();
    s.min_exp_ = order + 1;
  } else {
    s.coeffs_.resize(order - min_exp_ + 1);
  }
  return s;
}

QSeries QSeries::with_pi_power(int k) const {
  QSeries s = *this;
  s.pi_power_ = k;
  return s;
}

QSeries QSeries::translate() const {
  if (nome_div_ == 1) return *this;
  QSeries s = *this;
  for (std::size_t i = 0; i < s.coeffs_.size(); ++i)
    if (parity(min_exp_ + static_cast<int>(i))) s.coeffs_[i] = -s.coeffs_[i];
  return s;
}

QSeries& QSeries::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  if (c == 0) *this = zero(nome_div_, order_, pi_power_);
  return *this;
}

QSeries operator+(const QSeries& a0, const QSeries& b0) {
  QSeries a = a0, b = b0;
  align(a, b);
  if (a.is_zero() && a.pi_power_ != b.pi_power_) a.pi_power_ = b.pi_power_;
  if (b.is_zero() && a.pi_power_ != b.pi_power_) b.pi_power_ = a.pi_power_;
  if (a.pi_power_ != b.pi_power_)
    throw IncompatibleSeries("adding series with pi powers " + std::to_string(a.pi_power_) + " and " +
                             std::to_string(b.pi_power_));
  const int order = std::min(a.order_, b.order_);
  const int lo = std::min(a.min_exp_, b.min_exp_);
  if (order < lo) return QSeries::zero(a.nome_div_, order, a.pi_power_);
  std::vector<Rational> c(order - lo + 1, Rational(0));
  for (int e = lo; e <= order; ++e) {
    if (e >= a.min_exp_) c[e - lo] += a.coeffs_[e - a.min_exp_];
    if (e >= b.min_exp_) c[e - lo] += b.coeffs_[e - b.min_exp_];
  }
  QSeries s(a.nome_div_, lo, std::move(c), a.pi_power_);
  return s;
}

QSeries operator-(const QSeries& a) {
  QSeries s = a;
  for (auto& x : s.coeffs_) x = -x;
  return s;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a0, const QSeries& b0) {
  QSeries a = a0, b = b0;
  align(a, b);
  const int lo = a.min_exp_ + b.min_exp_;
  const int order = lo + std::min(a.order_ - a.min_exp_, b.order_ - b.min_exp_);
  const int pi = a.pi_power_ + b.pi_power_;
  if (a.is_zero() || b.is_zero()) return QSeries::zero(a.nome_div_, order, pi);
  const int len = order - lo + 1;
  std::vector<Rational> c(len, Rational(0));
  Rational tmp;
  for (int i = 0; i < len && i < static_cast<int>(a.coeffs_.size()); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (int j = 0; i + j < len && j < static_cast<int>(b.coeffs_.size()); ++j) {
      if (b.coeffs_[j] == 0) continue;
      tmp = a.coeffs_[i] * b.coeffs_[j];
      c[i + j] += tmp;
    }
  }
  return QSeries(a.nome_div_, lo, std::move(c), pi);
}

QSeries QSeries::inverse() const {
  if (is_zero()) throw DivideByZeroSeries("series is zero up to its order");
  const int len = order_ - min_exp_ + 1;
  std::vector<Rational> d(len, Rational(0));
  const Rational inv_lead = 1 / coeffs_[0];
  d[0] = inv_lead;
  for (int k = 1; k < len; ++k) {
    Rational acc = 0;
    for (int j = 1; j <= k; ++j)
      if (coeffs_[j] != 0) acc += coeffs_[j] * d[k - j];
    d[k] = -acc * inv_lead;
  }
  return QSeries(nome_div_, -min_exp_, std::move(d), -pi_power_);
}

QSeries operator/(const QSeries& a0, const QSeries& b0) {
  QSeries a = a0, b = b0;
  align(a, b);
  return a * b.inverse();
}

QSeries QSeries::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  QSeries result = QSeries::constant(Rational(1), order_ - min_exp_, nome_div_);
  if (is_zero() && k > 0) return zero(nome_div_, k * (order_ + 1) - 1, k * pi_power_);
  QSeries base = *this;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Integer divisor_sigma(int power, std::int64_t m) {
  if (power < 0 || m < 1) throw std::invalid_argument("divisor_sigma needs power >= 0 and m >= 1");
  Integer sum = 0;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    sum += mp::pow(Integer(d), static_cast<unsigned>(power));
    const std::int64_t e = m / d;
    if (e != d) sum += mp::pow(Integer(e), static_cast<unsigned>(power));
  }
  return sum;
}

Rational bernoulli(int k) {
  if (k < 0) throw std::invalid_argument("bernoulli index must be nonnegative");
  if (k == 1) return Rational(-1, 2);
  // Akiyama–Tanigawa.
  std::vector<Rational> a(k + 1);
  for (int m = 0; m <= k; ++m) {
    a[m] = Rational(1, m + 1);
    for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
  }
  return a[0];
}

Rational eisenstein_constant(int k) {
  if (k < 2 || k % 2) throw InvalidWeight("Eisenstein weight must be even and at least 2, got " + std::to_string(k));
  return Rational(-2 * k) / bernoulli(k);
}

QSeries eisenstein_qseries(int k, int order) {
  const Rational c = eisenstein_constant(k);
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  std::vector<Rational> coeffs(order + 1);
  coeffs[0] = 1;
  for (int m = 1; m <= order; ++m) coeffs[m] = c * Rational(divisor_sigma(k - 1, m));
  return QSeries(1, 0, std::move(coeffs));
}

QSeries theta_z_qseries(int order) {
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  std::vector<Rational> coeffs(order + 1, Rational(0));
  coeffs[0] = 1;
  for (int n = 1; n * n <= order; ++n) coeffs[n * n] = 2;
  return QSeries(2, 0, std::move(coeffs));
}

QSeries theta3_pow4(int order) { return theta_z_qseries(order).pow(4); }
QSeries theta4_pow4(int order) { return theta3_pow4(order).translate(); }
QSeries theta2_pow4(int order) {
  const QSeries t3 = theta3_pow4(order);
  return t3 - t3.translate();
}

QSeries discriminant_like(int order) {
  const QSeries e4 = eisenstein_qseries(4, order);
  const QSeries e6 = eisenstein_qseries(6, order);
  return e6 * e6 - e4.pow(3);
}

QSeries leech_theta(int order) {
  const QSeries e4 = eisenstein_qseries(4, order);
  const QSeries e6 = eisenstein_qseries(6, order);
  return Rational(7, 12) * e4.pow(3) + Rational(5, 12) * (e6 * e6);
}

NumericSeries to_numeric(const QSeries& s) {
  NumericSeries n;
  n.nome_div = s.nome_div();
  n.min_exp = s.min_exp();
  n.order = s.order();
  n.pi_power = s.pi_power();
  n.bits = static_cast<unsigned>(Real::default_precision() * 3.3219280948873623);
  const Real scale = pi_power(s.pi_power());
  n.coeffs.reserve(s.coeffs().size());
  for (const auto& c : s.coeffs()) n.coeffs.push_back(to_real(c) * scale);
  return n;
}

namespace {

Real tail_estimate(const NumericSeries& s, const Real& abs_q) {
  if (s.coeffs.empty()) return Real(0);
  if (abs_q >= 1) return Real(std::numeric_limits<double>::infinity());
  // Largest coefficient in the last quarter of the kept range (sparse series
  // such as Θ_ℤ have long runs of zeros), continued geometrically.
  const std::size_t k = s.coeffs.size();
  const std::size_t window = std::max<std::size_t>(2, k / 4);
  Real c = 0;
  for (std::size_t i = k > window ? k - window : 0; i < k; ++i) c = mp::max(c, Real(mp::abs(s.coeffs[i])));
  return 2 * c * mp::pow(abs_q, s.order + 1) / (1 - abs_q);
}

void check_tail(const Real& tail, const Real& magnitude, const Real& rel_tol) {
  if (rel_tol <= 0) return;
  const Real scale = mp::max(Real(1), magnitude);
  if (tail > rel_tol * scale)
    throw TailTooLarge("series tail " + to_decimal(tail, 6) + " exceeds tolerance " + to_decimal(rel_tol * scale, 6));
}

}  // namespace

SeriesValue eval_qseries(const NumericSeries& s, const Complex& z_in, const Real& rel_tol) {
  const Complex z = promote(z_in);
  if (z.im <= 0) throw std::invalid_argument("evaluation point must lie in the upper half plane");
  const Complex q = exp_i_pi_times(Complex(2 * z.re / s.nome_div, 2 * z.im / s.nome_div));
  SeriesValue out;
  if (s.coeffs.empty()) {
    out.value = Complex(Real(0));
    out.tail = tail_estimate(s, abs(q));
    return out;
  }
  Complex acc(s.coeffs.back());
  for (std::size_t i = s.coeffs.size() - 1; i-- > 0;) {
    acc *= q;
    acc.re += s.coeffs[i];
  }
  out.value = acc * cpow(q, s.min_exp);
  out.tail = tail_estimate(s, abs(q));
  check_tail(out.tail, abs(out.value), rel_tol);
  return out;
}

SeriesValue eval_qseries(const QSeries& s, const Complex& z, const Real& rel_tol) {
  return eval_qseries(to_numeric(s), z, rel_tol);
}

RealSeriesValue eval_at_nome(const NumericSeries& s, const Real& x_in, const Real& rel_tol) {
  const Real x = promote(x_in);
  RealSeriesValue out;
  out.tail = tail_estimate(s, mp::abs(x));
  if (s.coeffs.empty()) {
    out.value = 0;
    return out;
  }
  Real acc = s.coeffs.back();
  for (std::size_t i = s.coeffs.size() - 1; i-- > 0;) {
    acc *= x;
    acc += s.coeffs[i];
  }
  out.value = acc * mp::pow(x, s.min_exp);
  check_tail(out.tail, mp::abs(out.value), rel_tol);
  return out;
}

RealSeriesValue eval_imag_axis(const NumericSeries& s, const Real& t, const Real& rel_tol) {
  if (t <= 0) throw std::invalid_argument("t must be positive");
  const Real x = mp::exp(-2 * real_pi() * promote(t) / s.nome_div);
  return eval_at_nome(s, x, rel_tol);
}

}  // namespace e8lp::forms
