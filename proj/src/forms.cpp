#include "e8lp/forms.hpp"

#include <cmath>
#include <sstream>

#include "e8lp/errors.hpp"
#include "e8lp/lattice.hpp"

namespace e8lp::forms {

namespace mp = boost::multiprecision;

namespace {

Complex csqrt(const Complex& w) {
  const Real r = abs(w);
  Real re = mp::sqrt((r + w.re) / 2);
  Real im = mp::sqrt(mp::max(Real(0), Real((r - w.re) / 2)));
  if (w.im < 0) im = -im;
  return Complex(re, im);
}

Complex neg_inv(const Complex& z) { return -(Complex(Real(1)) / promote(z)); }

Complex i_times(const Complex& z) { return Complex(-z.im, z.re); }

Complex scale(const Complex& z, const Real& s) { return Complex(z.re * s, z.im * s); }

// -6iu/π
Complex e2_shift(const Complex& u) { return scale(i_times(u), -6 / real_pi()); }

bool prefer_direct(const Complex& z) {
  const Complex u = neg_inv(z);
  return z.im >= u.im;
}

}  // namespace

int QuasiForm::depth() const {
  for (int j = 2; j >= 0; --j)
    if (!parts[j].is_zero()) return j;
  return 0;
}

QSeries QuasiForm::collapse() const {
  int order = parts[0].order();
  for (const auto& p : parts) order = std::max(order, p.order());
  const QSeries e2 = eisenstein_qseries(2, std::max(order, 0) + 4);
  QSeries sum = parts[0];
  sum = sum + parts[1] * e2;
  sum = sum + parts[2] * e2 * e2;
  return sum;
}

QuasiForm phi_quasiform(int order) {
  if (order < 4) throw std::invalid_argument("phi needs order >= 4");
  const QSeries e4 = eisenstein_qseries(4, order);
  const QSeries e6 = eisenstein_qseries(6, order);
  const QSeries inv_delta = discriminant_like(order).inverse();
  QuasiForm q;
  q.weight = 0;
  q.parts[2] = (Rational(4, 5) * (e4 * e4 * inv_delta)).with_pi_power(1);
  q.parts[1] = (Rational(-8, 5) * (e4 * e6 * inv_delta)).with_pi_power(1);
  q.parts[0] = (Rational(4, 5) * (e6 * e6 * inv_delta)).with_pi_power(1);
  return q;
}

namespace {

// -32 a(5b² − 5ab + 2a²) / (15π b² c²), the common shape of ψ and ψ̃.
QSeries psi_shape(const QSeries& a, const QSeries& b, const QSeries& c) {
  const QSeries b2 = b * b;
  const QSeries num = a * (Rational(5) * b2 - Rational(5) * (a * b) + Rational(2) * (a * a));
  const QSeries den = b2 * c * c;
  return (Rational(-32, 15) * (num / den)).with_pi_power(-1);
}

}  // namespace

QSeries psi_qseries(int order) {
  if (order < 4) throw std::invalid_argument("psi needs order >= 4");
  const QSeries t3 = theta3_pow4(order);
  const QSeries t4 = t3.translate();
  return psi_shape(t4, t3, t3 - t4);
}

QSeries psi_tilde_qseries(int order) {
  if (order < 4) throw std::invalid_argument("psi needs order >= 4");
  const QSeries t3 = theta3_pow4(order);
  const QSeries t4 = t3.translate();
  return psi_shape(t3 - t4, t3, t4);
}

FormEvaluator::FormEvaluator(int order, unsigned bits) : order_(order), bits_(bits) {
  PrecisionScope scope(bits);
  rel_tol_ = mp::ldexp(Real(1), -static_cast<int>(bits) + 24);
  e2_ = to_numeric(eisenstein_qseries(2, order));
  e4_ = to_numeric(eisenstein_qseries(4, order));
  e6_ = to_numeric(eisenstein_qseries(6, order));
  const QSeries t3 = theta3_pow4(order);
  th3_ = to_numeric(t3);
  th4_ = to_numeric(t3.translate());
  th2_ = to_numeric(t3 - t3.translate());
  theta_ = to_numeric(theta_z_qseries(order));
  const QuasiForm phi = phi_quasiform(order);
  phi0_ = to_numeric(phi.parts[0]);
  phi1_ = to_numeric(phi.parts[1]);
  phi2_ = to_numeric(phi.parts[2]);
}

const NumericSeries& FormEvaluator::series(const std::string& name) const {
  if (name == "E2") return e2_;
  if (name == "E4") return e4_;
  if (name == "E6") return e6_;
  if (name == "theta3_4") return th3_;
  if (name == "theta4_4") return th4_;
  if (name == "theta2_4") return th2_;
  if (name == "theta") return theta_;
  if (name == "phi0") return phi0_;
  if (name == "phi1") return phi1_;
  if (name == "phi2") return phi2_;
  throw std::invalid_argument("unknown series " + name);
}

Complex FormEvaluator::eisenstein_direct(int k, const Complex& z) const {
  switch (k) {
    case 2: return eval_qseries(e2_, z, rel_tol_).value;
    case 4: return eval_qseries(e4_, z, rel_tol_).value;
    case 6: return eval_qseries(e6_, z, rel_tol_).value;
    default: throw InvalidWeight("stable evaluation supports E2, E4, E6 only");
  }
}

Complex FormEvaluator::eisenstein_transformed(int k, const Complex& z) const {
  const Complex u = neg_inv(z);
  const Complex v = eisenstein_direct(k, u);
  if (k == 2) return cpow(u, 2) * v + e2_shift(u);
  return cpow(u, k) * v;
}

Complex FormEvaluator::eisenstein(int k, const Complex& z) const {
  return prefer_direct(z) ? eisenstein_direct(k, z) : eisenstein_transformed(k, z);
}

ThetaFourth FormEvaluator::theta_direct(const Complex& z) const {
  return {eval_qseries(th2_, z, rel_tol_).value, eval_qseries(th3_, z, rel_tol_).value,
          eval_qseries(th4_, z, rel_tol_).value};
}

ThetaFourth FormEvaluator::theta_transformed(const Complex& z) const {
  const Complex u = neg_inv(z);
  const ThetaFourth at_u = theta_direct(u);
  const Complex m = -cpow(u, 2);
  return {m * at_u.t4, m * at_u.t3, m * at_u.t2};
}

ThetaFourth FormEvaluator::theta(const Complex& z) const {
  return prefer_direct(z) ? theta_direct(z) : theta_transformed(z);
}

Complex FormEvaluator::theta3_direct(const Complex& z) const { return eval_qseries(theta_, z, rel_tol_).value; }

Complex FormEvaluator::theta3_transformed(const Complex& z) const {
  const Complex u = neg_inv(z);
  return csqrt(-i_times(u)) * theta3_direct(u);
}

Complex FormEvaluator::phi(const Complex& z) const {
  if (prefer_direct(z)) {
    const Complex e2 = eval_qseries(e2_, z, rel_tol_).value;
    return eval_qseries(phi0_, z, rel_tol_).value +
           e2 * (eval_qseries(phi1_, z, rel_tol_).value + e2 * eval_qseries(phi2_, z, rel_tol_).value);
  }
  const Complex u = neg_inv(z);
  const Complex u2 = cpow(u, 2);
  const Complex e2 = u2 * eval_qseries(e2_, u, rel_tol_).value + e2_shift(u);
  const Complex c0 = eval_qseries(phi0_, u, rel_tol_).value;
  const Complex c1 = eval_qseries(phi1_, u, rel_tol_).value / u2;
  const Complex c2 = eval_qseries(phi2_, u, rel_tol_).value / (u2 * u2);
  return c0 + e2 * (c1 + e2 * c2);
}

Complex FormEvaluator::psi_from(const ThetaFourth& th) const {
  const Complex& a = th.t4;
  const Complex& b = th.t3;
  const Complex& c = th.t2;
  const Complex b2 = b * b;
  const Complex num = a * (scale(b2, Real(5)) - scale(a * b, Real(5)) + scale(a * a, Real(2)));
  const Complex den = b2 * c * c;
  return scale(num / den, Real(-32) / (15 * real_pi()));
}

Complex FormEvaluator::psi(const Complex& z) const { return psi_from(theta(z)); }

Real FormEvaluator::eisenstein_it(int k, const Real& t) const {
  return eisenstein(k, Complex(Real(0), t)).re;
}

Real FormEvaluator::phi_it(const Real& t) const { return phi(Complex(Real(0), t)).re; }

Real FormEvaluator::psi_it(const Real& t) const { return psi(Complex(Real(0), t)).re; }

Complex eval_eisenstein_stable(int k, const Real& t, Which which, unsigned bits, int order) {
  if (t <= 0) throw std::invalid_argument("t must be positive");
  PrecisionScope scope(bits);
  const FormEvaluator ev(order, bits);
  const Real y = which == Which::at_it ? promote(t) : Real(1 / promote(t));
  return ev.eisenstein(k, Complex(Real(0), y));
}

Complex eval_theta_stable(Theta variant, const Complex& z, unsigned bits, int order) {
  if (z.im <= 0) throw std::invalid_argument("evaluation point must lie in the upper half plane");
  PrecisionScope scope(bits);
  const FormEvaluator ev(order, bits);
  const ThetaFourth th = ev.theta(promote(z));
  switch (variant) {
    case Theta::theta2: return th.t2;
    case Theta::theta3: return th.t3;
    case Theta::theta4: return th.t4;
  }
  return th.t3;
}

bool IdentityReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

Complex parse_point(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty point");
  // Split off an optional "/d" divisor applying to the whole expression.
  double divisor = 1;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    divisor = std::stod(s.substr(slash + 1));
    s = s.substr(0, slash);
  }
  double re = 0, im = 0;
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  std::string re_part, im_part = s;
  if (split != std::string::npos) {
    re_part = s.substr(0, split);
    im_part = s.substr(split);
  }
  if (im_part.empty() || im_part.back() != 'i') {
    if (split != std::string::npos) throw std::invalid_argument("cannot parse point " + text);
    re_part = im_part;
    im_part.clear();
  }
  if (!re_part.empty()) re = std::stod(re_part);
  if (!im_part.empty()) {
    std::string coeff = im_part.substr(0, im_part.size() - 1);
    if (coeff.empty() || coeff == "+") im = 1;
    else if (coeff == "-") im = -1;
    else im = std::stod(coeff);
  }
  // Exact decimal conversion at the working precision.
  std::ostringstream rs, is;
  rs.precision(17);
  is.precision(17);
  rs << re;
  is << im;
  Complex z(Real(rs.str()) / divisor, Real(is.str()) / divisor);
  return z;
}

std::vector<Complex> parse_points(const std::string& csv) {
  std::vector<Complex> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_point(item));
  return out;
}

std::vector<Complex> default_sample_points() {
  return parse_points("2i,3i/2,i,1.2i,0.8i,0.5+1i,-0.5+1i,0.25+0.9i,-0.3+1.3i,0.1+2.5i");
}

IdentityReport verify_identities(int order, const std::vector<Complex>& points, unsigned bits, double e2_tol,
                                 double psi_tol) {
  if (order < 2) throw std::invalid_argument("order must be at least 2");
  IdentityReport report;

  {
    CheckResult c{"theta_e8_equals_e4", true, 0, ""};
    const lattice::ThetaCounts tc =
        lattice::enumerate_vectors(lattice::basis_from_gram(lattice::e8_gram()), Rational(2 * order));
    const QSeries e4 = eisenstein_qseries(4, order);
    for (int m = 0; m <= order; ++m) {
      const Rational lhs = Rational(tc.count(Rational(2 * m)));
      if (lhs != e4.coeff(m)) {
        c.passed = false;
        c.detail = "mismatch at q^" + std::to_string(m);
        break;
      }
    }
    if (c.passed) c.detail = "exact to q^" + std::to_string(order);
    report.checks.push_back(c);
  }

  {
    const QSeries leech = leech_theta(std::max(order, 2));
    CheckResult c{"leech_no_norm_2_vectors", leech.coeff(1) == 0 && leech.coeff(0) == 1, 0, ""};
    c.detail = "q^1 coefficient " + to_string(leech.coeff(1)) + ", q^2 coefficient " + to_string(leech.coeff(2));
    report.checks.push_back(c);
  }

  PrecisionScope scope(bits);
  // The numerical identities evaluate series directly at each argument, so
  // they need a longer expansion than the exact checks.
  const FormEvaluator ev(std::max(order, 128), bits);

  {
    CheckResult c{"e2_quasimodularity", true, 0, ""};
    Real worst = 0;
    for (const auto& z_in : points) {
      const Complex z = promote(z_in);
      const Complex w = neg_inv(z);
      const Complex lhs = ev.eisenstein_direct(2, w);
      const Complex rhs = cpow(z, 2) * ev.eisenstein_direct(2, z) - scale(i_times(z), 6 / real_pi());
      worst = mp::max(worst, abs(lhs - rhs));
    }
    c.residual = worst.convert_to<double>();
    c.passed = c.residual < e2_tol;
    c.detail = "max residual over " + std::to_string(points.size()) + " points";
    report.checks.push_back(c);
  }

  {
    CheckResult c{"psi_functional_equation", true, 0, ""};
    Real worst = 0;
    for (const auto& z_in : points) {
      const Complex z = promote(z_in);
      const Complex one(Real(1));
      const Complex lhs = ev.psi_from(ev.theta_direct(z));
      const Complex shifted = ev.psi_from(ev.theta_direct(z + one));
      const Complex inverted = ev.psi_from(ev.theta_direct(neg_inv(z)));
      const Complex res = lhs - shifted - cpow(z, 2) * inverted;
      worst = mp::max(worst, abs(res));
    }
    c.residual = worst.convert_to<double>();
    c.passed = c.residual < psi_tol;
    c.detail = "max residual over " + std::to_string(points.size()) + " points";
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace e8lp::forms
