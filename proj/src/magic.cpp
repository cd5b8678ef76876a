#include "e8lp/magic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "e8lp/errors.hpp"
#include "e8lp/lattice.hpp"
#include "e8lp/radial_fourier.hpp"

namespace e8lp::magic {

namespace mp = boost::multiprecision;
using forms::QSeries;

namespace {

// Weights of the φ- and ψ-parts in each component.
std::pair<int, int> weights(Component c) {
  switch (c) {
    case Component::f: return {1, 1};
    case Component::f_hat: return {1, -1};
    case Component::phi_part: return {1, 0};
    case Component::psi_part: return {0, 1};
  }
  return {1, 1};
}

Component component_of(Sign s) { return s == Sign::plus ? Component::f : Component::f_hat; }

int component_index(Component c) { return static_cast<int>(c); }

using ExactTerms = std::map<int, std::array<Rational, 3>>;

// Adds factor·π^{pi_extra}·s at t^j; the stored layout needs total π power j−1.
void accumulate(ExactTerms& terms, const QSeries& s, int step, int j, const Rational& factor, int pi_extra,
                int max_exp) {
  if (!s.is_zero() && s.pi_power() + pi_extra != j - 1)
    throw std::logic_error("unexpected power of pi in integrand series");
  for (int m = s.min_exp(); m <= s.order(); ++m) {
    const int e = step * m;
    if (e > max_exp) break;
    const Rational c = s.coeff(m);
    if (c != 0) terms[e][j] += factor * c;
  }
}

// ∫₀¹ t^j e^{-xt} dt by its power series in x.
Real j_integral(int j, const Real& x, const Real& eps) {
  Real sum = 0;
  Real term = 1;  // (-x)^k / k!
  for (int k = 0; k < 2000; ++k) {
    const Real add = term / (j + k + 1);
    sum += add;
    if (k > 4 && mp::abs(add) < eps * mp::max(Real(1), Real(mp::abs(sum)))) break;
    term *= -x / (k + 1);
  }
  return sum;
}

// ∫₁^∞ t^j e^{-xt} dt for x > 0.
Real tail_integral(int j, const Real& x) {
  Real sum = 0;
  Real fact_ratio = 1;  // j!/i! for i = j, j-1, ...
  Real xp = x;          // x^{j-i+1}
  for (int i = j; i >= 0; --i) {
    sum += fact_ratio / xp;
    fact_ratio *= i;
    xp *= x;
  }
  return mp::exp(-x) * sum;
}

Real sinc(const Real& y) {
  if (mp::abs(y) < Real("1e-30")) return Real(1) - y * y / 6;
  return mp::sin(y) / y;
}

}  // namespace

int ExpansionTerm::degree() const {
  for (int j = 2; j >= 0; --j)
    if (exact[j] != 0) return j;
  return 0;
}

int IntegrandExpansion::min_exp_index() const { return terms.empty() ? 0 : terms.front().exp_index; }

const ExpansionTerm* IntegrandExpansion::find(int exp_index) const {
  for (const auto& t : terms)
    if (t.exp_index == exp_index) return &t;
  return nullptr;
}

Real IntegrandExpansion::eval(const Real& t_in) const {
  const Real t = promote(t_in);
  const Real pi = real_pi();
  Real sum = 0;
  for (const auto& term : terms) {
    const Real p = term.poly[0] + t * (term.poly[1] + t * term.poly[2]);
    sum += p * mp::exp(-pi * term.exp_index * t);
  }
  return sum;
}

struct MagicFunction::Impl {
  unsigned bits;
  forms::NumericSeries phi_small;  // collapsed φ in q = e^{2πiz}
  forms::NumericSeries psi_small;  // ψ̃ in q₂
  ExactTerms phi_terms, psi_terms;
  std::array<IntegrandExpansion, 4> expansions;  // indexed by Component
  std::array<bool, 4> pole_residue{};
  std::array<std::string, 4> pole_detail;
  // Head quadrature on [t_min, t0]: fine rule and a coarse rule on the same panels.
  std::vector<Real> t_fine, w_fine, gphi_fine, gpsi_fine;
  std::vector<Real> t_coarse, w_coarse, gphi_coarse, gpsi_coarse;
  Real t_min;
  Real eps;

  Real head(const std::vector<Real>& t, const std::vector<Real>& w, const std::vector<Real>& gphi,
            const std::vector<Real>& gpsi, Component c, const Real& s) const {
    const auto [a, b] = weights(c);
    const Real k = -real_pi() * s;
    Real sum = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      Real g = 0;
      if (a) g += gphi[i];
      if (b) g += b * gpsi[i];
      sum += w[i] * g * mp::exp(k * t[i]);
    }
    return sum;
  }
};

MagicFunction::MagicFunction(const MagicOptions& options) : options_(options), impl_(std::make_unique<Impl>()) {
  if (options.series_order < 8) throw std::invalid_argument("series order must be at least 8");
  if (options.bits < 64) throw std::invalid_argument("precision must be at least 64 bits");
  PrecisionScope scope(options.bits);
  Impl& im = *impl_;
  im.bits = options.bits;
  im.eps = mp::ldexp(Real(1), -static_cast<int>(options.bits));
  const int n2 = options.series_order;
  const int nq = n2 / 2 + 2;

  // t²φ(i/t) for t ≥ t0, from E2(i/t) = −t²E2(it) + 6t/π, E4(i/t) = t⁴E4(it),
  // E6(i/t) = −t⁶E6(it):
  //   t²(c0 + c1E2 + c2E2²) − (6t/π)(c1 + 2c2E2) + (36/π²)c2, all at it.
  const forms::QuasiForm phi = forms::phi_quasiform(nq);
  const QSeries collapsed = phi.collapse();
  const QSeries e2 = forms::eisenstein_qseries(2, nq + 2);
  const QSeries linear = phi.parts[1] + Rational(2) * (phi.parts[2] * e2);
  accumulate(im.phi_terms, collapsed, 2, 2, Rational(1), 0, n2);
  accumulate(im.phi_terms, linear, 2, 1, Rational(-6), -1, n2);
  accumulate(im.phi_terms, phi.parts[2], 2, 0, Rational(36), -2, n2);
  // ψ(it) directly in q₂ = e^{-πt}.
  const QSeries psi = forms::psi_qseries(n2 + 4);
  accumulate(im.psi_terms, psi, 1, 0, Rational(1), 0, n2);

  const Real pi = real_pi();
  for (Component c : {Component::f, Component::f_hat, Component::phi_part, Component::psi_part}) {
    const auto [a, b] = weights(c);
    ExactTerms merged;
    if (a)
      for (const auto& [e, cs] : im.phi_terms)
        for (int j = 0; j < 3; ++j) merged[e][j] += a * cs[j];
    if (b)
      for (const auto& [e, cs] : im.psi_terms)
        for (int j = 0; j < 3; ++j) merged[e][j] += b * cs[j];
    IntegrandExpansion& ex = im.expansions[component_index(c)];
    ex.sign = c == Component::f_hat || c == Component::psi_part ? Sign::minus : Sign::plus;
    ex.order = n2;
    ex.precision = options.bits;
    ex.t0 = 1;
    for (const auto& [e, cs] : merged) {
      if (cs[0] == 0 && cs[1] == 0 && cs[2] == 0) continue;
      ExpansionTerm term;
      term.exp_index = e;
      term.exact = cs;
      for (int j = 0; j < 3; ++j) term.poly[j] = to_real(cs[j]) * pi_power(j - 1);
      ex.terms.push_back(std::move(term));
      // A pole of the tail at |x|² = −e survives the double zero of sin² only
      // for even e with at most a double pole.
      if (e <= 0 && (e % 2 != 0 || ex.terms.back().degree() >= 2) && !im.pole_residue[component_index(c)]) {
        im.pole_residue[component_index(c)] = true;
        im.pole_detail[component_index(c)] =
            "tail term e^{" + std::to_string(-e) + "πt} of degree " + std::to_string(ex.terms.back().degree());
      }
    }
  }

  im.phi_small = forms::to_numeric(collapsed);
  im.psi_small = forms::to_numeric(forms::psi_tilde_qseries(n2 + 4));

  // Below t_min every integrand is under 2^{-(bits+20)}.
  im.t_min = pi / ((options.bits + 20) * mp::log(Real(2)));
  std::vector<Real> edges{im.t_min};
  while (edges.back() * Real("1.25") < Real("0.25")) edges.push_back(edges.back() * Real("1.25"));
  for (int k = 8; k <= 32; ++k) edges.push_back(Real(k) / 32);
  const GaussRule fine = gauss_legendre(options.panel_nodes);
  const GaussRule coarse = gauss_legendre(std::max(4, options.panel_nodes / 2));
  auto fill = [&](const GaussRule& rule, std::vector<Real>& t, std::vector<Real>& w, std::vector<Real>& gphi,
                  std::vector<Real>& gpsi) {
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      const Real a = edges[p], h = edges[p + 1] - edges[p];
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Real ti = a + h * (rule.nodes[i] + 1) / 2;
        t.push_back(ti);
        w.push_back(h * rule.weights[i] / 2);
        gphi.push_back(g_small_t(Component::phi_part, ti));
        gpsi.push_back(g_small_t(Component::psi_part, ti));
      }
    }
  };
  fill(fine, im.t_fine, im.w_fine, im.gphi_fine, im.gpsi_fine);
  fill(coarse, im.t_coarse, im.w_coarse, im.gphi_coarse, im.gpsi_coarse);
}

MagicFunction::~MagicFunction() = default;

std::size_t MagicFunction::head_nodes() const { return impl_->t_fine.size(); }

const IntegrandExpansion& MagicFunction::expansion(Sign sign) const {
  return impl_->expansions[component_index(component_of(sign))];
}

Real MagicFunction::g_small_t(Component c, const Real& t_in) const {
  PrecisionScope scope(impl_->bits);
  const Real t = promote(t_in);
  if (t <= 0) throw std::invalid_argument("t must be positive");
  const auto [a, b] = weights(c);
  const Real u = mp::exp(-real_pi() / t);
  Real sum = 0;
  if (a) sum += forms::eval_at_nome(impl_->phi_small, u * u).value;
  if (b) sum += b * forms::eval_at_nome(impl_->psi_small, u).value;
  return t * t * sum;
}

Real MagicFunction::g_expansion(Component c, const Real& t) const {
  PrecisionScope scope(impl_->bits);
  return impl_->expansions[component_index(c)].eval(t);
}

Real MagicFunction::g(Component c, const Real& t) const {
  return t < 1 ? g_small_t(c, t) : g_expansion(c, t);
}

MagicValue MagicFunction::value(Component c, const Real& r_in) const {
  PrecisionScope scope(impl_->bits);
  const Impl& im = *impl_;
  const Real r = promote(r_in);
  if (r < 0) throw std::invalid_argument("r must be nonnegative");
  if (im.pole_residue[component_index(c)])
    throw PoleResidue("uncancelled pole in the tail integral: " + im.pole_detail[component_index(c)]);
  const Real pi = real_pi();
  const Real s = r * r;
  const Real sin_half = mp::sin(pi * s / 2);
  const Real sin2 = sin_half * sin_half;

  Real regular = 0, singular = 0, magnitude = 0;
  for (const auto& term : im.expansions[component_index(c)].terms) {
    const Real x = pi * (s + term.exp_index);
    for (int j = 0; j <= term.degree(); ++j) {
      if (term.exact[j] == 0) continue;
      const Real& coef = term.poly[j];
      if (x > 1) {
        const Real v = coef * tail_integral(j, x);
        regular += v;
        magnitude += mp::abs(v);
        continue;
      }
      // ∫₁^∞ = j!/x^{j+1} − ∫₀¹; the first piece times sin²(x/2) is written
      // through sinc so that x = 0 is harmless.
      const Real v = coef * j_integral(j, x, im.eps);
      regular -= v;
      magnitude += mp::abs(v);
      const Real sc = sinc(x / 2);
      const Real pole = j == 0 ? Real(x * sc * sc / 4) : Real(sc * sc / 4);
      singular += coef * pole;
      magnitude += mp::abs(coef * pole);
    }
  }
  const Real head = im.head(im.t_fine, im.w_fine, im.gphi_fine, im.gpsi_fine, c, s);
  const Real head_coarse = im.head(im.t_coarse, im.w_coarse, im.gphi_coarse, im.gpsi_coarse, c, s);

  MagicValue out;
  out.r = r;
  out.value = sin2 * (head + regular) + singular;
  out.err_estimate = sin2 * mp::abs(head - head_coarse) +
                     mp::ldexp(Real(1), -static_cast<int>(im.bits) + 24) * (1 + magnitude + mp::abs(head));
  return out;
}

Real MagicFunction::radial_derivative(Component c, const Real& r_in) const {
  PrecisionScope scope(impl_->bits);
  const Real r = promote(r_in);
  const Real h = mp::ldexp(Real(1), -static_cast<int>(impl_->bits) / 3);
  return (value(c, r + h).value - value(c, r - h).value) / (2 * h);
}

TaylorCoefficients MagicFunction::taylor(Component c) const {
  PrecisionScope scope(impl_->bits);
  const ExpansionTerm* t = impl_->expansions[component_index(c)].find(0);
  TaylorCoefficients out{Real(0), Real(0)};
  if (!t) return out;
  out.c0 = t->poly[1] / 4;
  out.c2 = real_pi() * t->poly[0] / 4;
  return out;
}

TaylorCoefficients MagicFunction::taylor_numeric(Component c) const {
  PrecisionScope scope(impl_->bits);
  const Real h("1e-6");
  const Real f0 = value(c, Real(0)).value;
  const Real d1 = (value(c, mp::sqrt(h)).value - f0) / h;
  const Real d2 = (value(c, mp::sqrt(2 * h)).value - f0) / (2 * h);
  return {f0, 2 * d1 - d2};
}

const MagicFunction& shared_magic(unsigned bits, int series_order) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, int>, std::unique_ptr<MagicFunction>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{bits, series_order}];
  if (!slot) {
    MagicOptions opt;
    opt.bits = bits;
    opt.series_order = series_order;
    slot = std::make_unique<MagicFunction>(opt);
  }
  return *slot;
}

IntegrandExpansion build_integrand(Sign sign, int order, unsigned precision) {
  if (order < 8) throw std::invalid_argument("order must be at least 8");
  const MagicFunction& m = shared_magic(precision, order);
  IntegrandExpansion ex = m.expansion(sign);
  if (sign == Sign::minus) {
    PrecisionScope scope(precision);
    const Real limit = mp::pow(Real(10), -static_cast<int>(precision) / 4);
    for (const auto& t : ex.terms) {
      if (t.exp_index >= 0) break;
      for (const auto& c : t.poly)
        if (mp::abs(c) > limit)
          throw CancellationFailure("g₋ keeps a growing term e^{" + std::to_string(-t.exp_index) + "πt}");
    }
  }
  return ex;
}

Real eval_g(Sign sign, const Real& t, unsigned precision) {
  if (t <= 0) throw std::invalid_argument("t must be positive");
  return shared_magic(precision).g(component_of(sign), t);
}

MagicValue eval_f(const Real& r, unsigned precision) { return shared_magic(precision).f(r); }

MagicValue eval_f_hat(const Real& r, unsigned precision) { return shared_magic(precision).f_hat(r); }

TaylorCoefficients taylor_at_zero(Component which, unsigned precision) {
  return shared_magic(precision).taylor(which);
}

bool CheckReport::all_passed() const {
  for (const auto& e : entries)
    if (!e.passed) return false;
  return true;
}

namespace {

double as_double(const Real& x) { return x.convert_to<double>(); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

CheckReport verify_roots(int k_max, double tol, unsigned precision) {
  if (k_max < 2) throw std::invalid_argument("k_max must be at least 2");
  const MagicFunction& m = shared_magic(precision);
  PrecisionScope scope(precision);
  CheckReport rep;
  {
    const double f0 = as_double(m.f(Real(0)).value), fh0 = as_double(m.f_hat(Real(0)).value);
    rep.entries.push_back({"f(0) = 1", std::abs(f0 - 1) < tol, f0, ""});
    rep.entries.push_back({"f_hat(0) = 1", std::abs(fh0 - 1) < tol, fh0, ""});
  }
  for (int k = 1; k <= k_max; ++k) {
    const Real r = mp::sqrt(Real(2 * k));
    const std::string at = "sqrt(" + std::to_string(2 * k) + ")";
    const double fv = as_double(m.f(r).value);
    const double hv = as_double(m.f_hat(r).value);
    const double fd = as_double(m.radial_derivative(Component::f, r));
    const double hd = as_double(m.radial_derivative(Component::f_hat, r));
    rep.entries.push_back({"f(" + at + ") = 0", std::abs(fv) < tol, fv, ""});
    rep.entries.push_back({"f_hat(" + at + ") = 0", std::abs(hv) < tol, hv, ""});
    if (k == 1)
      rep.entries.push_back({"f'(" + at + ") < 0, single root", fd < 0 && std::abs(fd) > 1e-4, fd, ""});
    else
      rep.entries.push_back({"f'(" + at + ") = 0, double root", std::abs(fd) < tol, fd, ""});
    rep.entries.push_back({"f_hat'(" + at + ") = 0, double root", std::abs(hd) < tol, hd, ""});
  }
  {
    double worst = 1e300;
    for (int i = 1; i <= 100; ++i) {
      const Real r = mp::sqrt(Real(2)) * i / 101;
      worst = std::min(worst, as_double(m.f(r).value));
    }
    rep.entries.push_back({"f > 0 on (0, sqrt 2)", worst > 0, worst, "min over 100 points"});
  }
  {
    double worst_f = -1e300, worst_h = 1e300;
    const Real lo = mp::sqrt(Real(2)), hi = mp::sqrt(Real(2 * k_max));
    for (int i = 0; i <= 200; ++i) {
      const Real r = lo + (hi - lo) * i / 200;
      worst_f = std::max(worst_f, as_double(m.f(r).value));
      worst_h = std::min(worst_h, as_double(m.f_hat(r).value));
    }
    rep.entries.push_back({"f <= tol beyond sqrt 2", worst_f <= tol, worst_f, "max over 201 points"});
    rep.entries.push_back({"f_hat >= -tol", worst_h >= -tol, worst_h, "min over 201 points"});
  }
  return rep;
}

CheckReport verify_signs(int g_points, int f_points, double tol, unsigned precision) {
  const MagicFunction& m = shared_magic(precision);
  PrecisionScope scope(precision);
  CheckReport rep;
  {
    bool plus_ok = true, minus_ok = true;
    std::string where_plus, where_minus;
    const Real lo = mp::log(Real("1e-3")), hi = mp::log(Real("1e3"));
    for (int i = 0; i < g_points; ++i) {
      const Real t = mp::exp(lo + (hi - lo) * i / (g_points - 1));
      if (plus_ok && !(m.g(Component::f, t) < 0)) {
        plus_ok = false;
        where_plus = "fails at t = " + to_decimal(t, 8);
      }
      if (minus_ok && !(m.g(Component::f_hat, t) > 0)) {
        minus_ok = false;
        where_minus = "fails at t = " + to_decimal(t, 8);
      }
    }
    rep.entries.push_back({"g+ < 0 on [1e-3, 1e3]", plus_ok, 0, where_plus});
    rep.entries.push_back({"g- > 0 on [1e-3, 1e3]", minus_ok, 0, where_minus});
  }
  {
    double worst = -1e300;
    const Real lo = mp::sqrt(Real(2));
    for (int i = 0; i < f_points; ++i) {
      const Real r = lo + (8 - lo) * i / (f_points - 1);
      worst = std::max(worst, as_double(m.f(r).value));
    }
    rep.entries.push_back({"f <= tol on [sqrt 2, 8]", worst <= tol, worst, "max = " + fmt(worst)});
  }
  {
    double worst = 1e300;
    for (int i = 1; i <= f_points; ++i) {
      const Real r = Real(8) * i / f_points;
      worst = std::min(worst, as_double(m.f_hat(r).value));
    }
    rep.entries.push_back({"f_hat >= -tol on (0, 8]", worst >= -tol, worst, "min = " + fmt(worst)});
  }
  return rep;
}

std::vector<EigenResidual> eigenfunction_check(Sign sign, const std::vector<double>& sample_radii,
                                               unsigned precision) {
  for (double r : sample_radii)
    if (!(r > 0)) throw std::invalid_argument("sample radii must be positive");
  const radial::RadialTransform oracle(8, 8.0, 64, 20);
  oracle.self_check(1e-8);
  const MagicFunction& m = shared_magic(precision);
  const Component c = sign == Sign::plus ? Component::phi_part : Component::psi_part;
  const double eigenvalue = sign == Sign::plus ? 1.0 : -1.0;
  std::vector<double> samples;
  samples.reserve(oracle.nodes().size());
  for (double r : oracle.nodes()) samples.push_back(as_double(m.value(c, Real(r)).value));
  std::vector<EigenResidual> out;
  for (double r : sample_radii) {
    EigenResidual e;
    e.r = r;
    e.value = as_double(m.value(c, Real(r)).value);
    e.transformed = oracle.apply(samples, r);
    e.residual = std::abs(e.transformed - eigenvalue * e.value);
    out.push_back(e);
  }
  return out;
}

lp::BoundCertificate sphere_packing_certificate(const CheckReport* roots, const CheckReport* signs,
                                                unsigned precision) {
  if (!roots || !signs) throw ChecksNotRun("root and sign checks must run before certification");
  if (!roots->all_passed() || !signs->all_passed())
    throw ChecksNotRun("root or sign checks failed; no certificate");
  lp::BoundCertificate c;
  c.n = 8;
  c.r = std::sqrt(2.0);
  c.degree = 0;
  c.source = "magic";
  for (const auto& e : signs->entries) {
    if (e.name.rfind("f <= tol", 0) == 0) c.margin_f = -e.value;
    if (e.name.rfind("f_hat >= -tol", 0) == 0) c.margin_fhat = e.value;
  }
  c.tolerance = 1e-8;
  {
    PrecisionScope scope(precision);
    c.density_bound = as_double(lattice::ball_volume(8, mp::sqrt(Real(2)) / 2));
  }
  const lattice::LatticeBasis e8 = lattice::basis_from_gram(lattice::e8_gram());
  const auto tc = lattice::enumerate_vectors(e8, Rational(2));
  const double min_len = std::sqrt(tc.minimal_norm()->convert_to<double>());
  c.reference_density = lattice::packing_density(8, min_len, covolume(e8).convert_to<double>()).density;
  return c;
}

}  // namespace e8lp::magic
