// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
//   e8lp_acceptance [--only 1,2,7]
// Exit status is 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "e8lp/forms.hpp"
#include "e8lp/harness.hpp"
#include "e8lp/lattice.hpp"
#include "e8lp/lp_bounds.hpp"
#include "e8lp/magic.hpp"
#include "e8lp/radial_fourier.hpp"
#include "e8lp/reference.hpp"

using namespace e8lp;
namespace mp = boost::multiprecision;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

const double pi = std::acos(-1.0);

double d(const Real& x) { return x.convert_to<double>(); }

// q∏(1-qⁿ)²⁴ to q^order, by repeated multiplication with exact integers.
std::vector<Integer> delta_product(int order) {
  std::vector<Integer> c(order + 1, 0);
  c[1] = 1;
  for (int n = 1; n <= order; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (int e = order; e >= n; --e) c[e] -= c[e - n];
  return c;
}

void e8_exact(Outcome& o) {
  const auto gram = lattice::e8_gram();
  o.require(gram.determinant() == 1, "determinant 1");
  const std::vector<Rational> poly = {1, -16, 105, -364, 714, -784, 440, -96, 1};
  o.require(lattice::characteristic_polynomial(gram) == poly, "characteristic polynomial");
  const auto basis = lattice::basis_from_gram(gram);
  const auto counts = lattice::enumerate_vectors(basis, Rational(20));
  o.require(counts.minimal_norm() && *counts.minimal_norm() == 2, "minimal norm 2");
  for (int m = 1; m <= 10; ++m)
    o.require(Integer(counts.count(Rational(2 * m))) == 240 * forms::divisor_sigma(3, m),
              "count at norm " + std::to_string(2 * m));
  o.detail << "det 1, char poly exact, min norm 2, shells 2..20 = 240 sigma3(m)";
}

void densities(Outcome& o) {
  const double e8 = lattice::packing_density(8, std::sqrt(2.0), 1.0).density;
  const double leech = lattice::packing_density(24, 2.0, 1.0).density;
  const double e8_exact = std::pow(pi, 4) / 384;
  const double leech_exact = std::pow(pi, 12) / 479001600.0;
  o.require(std::abs(e8 - e8_exact) < 1e-9, "E8 = pi^4/384");
  o.require(std::abs(e8 - reference::record_density(8)) < 1e-9, "E8 vs table");
  o.require(std::abs(leech - leech_exact) < 1e-9, "Leech = pi^12/12!");
  o.require(std::abs(leech - reference::record_density(24)) < 1e-9, "Leech vs table");
  o.detail << std::setprecision(12) << "E8 " << e8 << ", Leech " << leech;
}

void identities(Outcome& o) {
  const auto report = forms::verify_identities(20, forms::default_sample_points(), 128);
  for (const auto& c : report.checks) {
    o.require(c.passed, c.name);
    if (c.residual > 0) o.detail << c.name << " " << std::setprecision(3) << c.residual << ", ";
  }
  o.require(forms::default_sample_points().size() == 10, "ten sample points");
  // q² coefficient from the formula vs E4³ - 720Δ with Δ from its product.
  const forms::QSeries leech = forms::leech_theta(3);
  const forms::QSeries e4 = forms::eisenstein_qseries(4, 3);
  const auto delta = delta_product(3);
  Rational e4cubed2 = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b) e4cubed2 += e4.coeff(a) * e4.coeff(b) * e4.coeff(2 - a - b);
  const Rational oracle = e4cubed2 - 720 * Rational(delta[2]);
  o.require(leech.coeff(1) == 0, "Leech q^1 = 0");
  o.require(leech.coeff(2) == oracle && oracle == 196560, "Leech q^2");
  o.detail << "Leech q^2 " << to_string(leech.coeff(2));
}

void magic_values(Outcome& o) {
  const auto roots = magic::verify_roots(6, 1e-8, 200);
  for (const auto& e : roots.entries) o.require(e.passed, e.name);
  const auto& m = magic::shared_magic(200, 128);
  PrecisionScope scope(200);
  const auto tf = m.taylor(magic::Component::f);
  const auto th = m.taylor(magic::Component::f_hat);
  o.require(mp::abs(tf.c2 + Real(27) / 10) < Real("1e-6"), "f c2 = -27/10");
  o.require(mp::abs(th.c2 + Real(3) / 2) < Real("1e-6"), "f_hat c2 = -3/2");
  o.require(mp::abs(m.taylor_numeric(magic::Component::f).c2 - tf.c2) < Real("1e-6"), "f c2 numeric");
  o.require(mp::abs(m.taylor_numeric(magic::Component::f_hat).c2 - th.c2) < Real("1e-6"), "f_hat c2 numeric");
  const Real deriv = m.radial_derivative(magic::Component::f, mp::sqrt(Real(2)));
  o.require(deriv < Real("-1e-4"), "f'(sqrt 2) < 0");
  o.detail << roots.entries.size() << " root checks, c2 " << std::setprecision(10) << d(tf.c2) << " / " << d(th.c2)
           << ", f'(sqrt 2) " << d(deriv);
}

void signs(Outcome& o) {
  const auto report = magic::verify_signs(1000, 500, 1e-8, 200);
  for (const auto& e : report.entries) {
    o.require(e.passed, e.name);
    o.detail << e.name << "; ";
  }
}

void eigenfunctions(Outcome& o) {
  const radial::RadialTransform t(8);
  const double gauss = t.self_check(1e-8);
  o.require(gauss < 1e-8, "Gaussian self-check");
  const std::vector<double> radii = {0.5, 1.0, 1.3, 1.9, 2.6};
  double worst = 0;
  for (auto sign : {magic::Sign::plus, magic::Sign::minus})
    for (const auto& e : magic::eigenfunction_check(sign, radii)) worst = std::max(worst, e.residual);
  o.require(worst < 1e-6, "eigenfunction residual");
  o.detail << std::setprecision(3) << "Gaussian " << gauss << ", worst residual " << worst;
}

// The sweep result is shared by criteria 7 and 8.
std::map<int, lp::OptimizeResult>& sweep_results(const std::vector<int>& dims) {
  static std::map<int, lp::OptimizeResult> results;
  std::vector<std::pair<int, std::future<lp::OptimizeResult>>> jobs;
  for (int n : dims)
    if (!results.count(n))
      jobs.emplace_back(n, std::async(std::launch::async, [n] { return lp::optimize_r(n, lp::default_degree(n)); }));
  for (auto& [n, f] : jobs) results[n] = f.get();
  return results;
}

void lp_table(Outcome& o) {
  std::vector<int> dims;
  for (int n = 1; n <= 24; ++n) dims.push_back(n);
  const auto& results = sweep_results(dims);
  double worst_low = 0, worst_high = 0;
  std::map<int, double> bounds;
  for (int n : dims) {
    const auto& c = results.at(n).certificate;
    bounds[n] = c.density_bound;
    o.require(c.valid(), "certificate n=" + std::to_string(n));
    const double dev = std::abs(c.density_bound / reference::lp_bound(n) - 1);
    (n <= 12 ? worst_low : worst_high) = std::max(n <= 12 ? worst_low : worst_high, dev);
  }
  o.require(worst_low < 0.005, "n <= 12 within 0.5%");
  o.require(worst_high < 0.02, "n in 13..24 within 2%");
  o.require(!harness::compare_to_reference(bounds, 1).hard_failure, "bounds >= records");
  const double r16 = results.at(16).certificate.r;
  o.require(std::abs(r16 * r16 - reference::kDim16RadiusSquared) < 1e-2, "n=16 r^2");
  o.detail << std::setprecision(3) << "max deviation " << worst_low * 100 << "% (n<=12), " << worst_high * 100
           << "% (13..24), n=16 r^2 " << std::setprecision(8) << r16 * r16;
}

void sharpness(Outcome& o) {
  const auto& c8 = sweep_results({8}).at(8).certificate;
  const double e8 = std::pow(pi, 4) / 384;
  o.require(std::abs(c8.density_bound / e8 - 1) < 0.005, "n=8 LP bound vs E8");
  const auto roots = magic::verify_roots(6, 1e-8, 200);
  const auto sign_report = magic::verify_signs(1000, 500, 1e-8, 200);
  const lp::BoundCertificate cert = magic::sphere_packing_certificate(&roots, &sign_report, 200);
  const double bound = lp::bound_from_certificate(cert);
  PrecisionScope scope(200);
  const Real exact = lattice::ball_volume(8, mp::sqrt(Real(2)) / 2);
  // The certificate is double-valued, so "exactly" means to double rounding.
  const double rel = std::abs(bound / exact.convert_to<double>() - 1);
  o.require(cert.r == std::sqrt(2.0), "certificate radius sqrt 2");
  o.require(rel <= 4 * std::numeric_limits<double>::epsilon(), "magic certificate = vol(B_{sqrt2/2})");
  o.require(std::abs(bound - e8) < 1e-15, "magic certificate = pi^4/384");
  o.detail << std::setprecision(12) << "LP n=8 " << c8.density_bound << ", magic certificate " << bound
           << std::setprecision(3) << " (relative to exact volume " << rel << ")";
}

void properties(Outcome& o) {
  double worst_poisson = 0;
  const std::vector<Real> none;
  for (int n = 1; n <= 4; ++n) {
    const auto b = lattice::integer_lattice(n);
    worst_poisson = std::max(worst_poisson, d(lattice::poisson_verify(b, none, 6.0)));
    std::vector<Real> t;
    for (int i = 0; i < n; ++i) t.push_back(Real(0.3) + Real(i) / 7);
    worst_poisson = std::max(worst_poisson, d(lattice::poisson_verify(b, t, 6.0)));
  }
  const auto e8 = lattice::basis_from_gram(lattice::e8_gram());
  worst_poisson = std::max(worst_poisson, d(lattice::poisson_verify(e8, none, 6.0)));
  std::vector<Real> t8;
  for (int i = 0; i < 8; ++i) t8.push_back(Real(i + 1) / 11);
  worst_poisson = std::max(worst_poisson, d(lattice::poisson_verify(e8, t8, 6.0)));
  o.require(worst_poisson < 1e-10, "Poisson residuals");

  double worst_dual = 0;
  {
    PrecisionScope scope(128);
    const forms::FormEvaluator ev(128, 128);
    for (const char* p : {"0.8i", "0.9i", "i", "1.1i", "1.25i", "0.2+0.95i", "-0.2+1.05i"}) {
      const Complex z = promote(forms::parse_point(p));
      for (int k : {2, 4, 6})
        worst_dual = std::max(worst_dual, d(abs(ev.eisenstein_direct(k, z) - ev.eisenstein_transformed(k, z))));
      const auto a = ev.theta_direct(z), b = ev.theta_transformed(z);
      worst_dual = std::max({worst_dual, d(abs(a.t2 - b.t2)), d(abs(a.t3 - b.t3)), d(abs(a.t4 - b.t4))});
    }
  }
  {
    const auto& m = magic::shared_magic(200, 128);
    PrecisionScope scope(200);
    for (int i = 0; i <= 10; ++i) {
      const Real t = 1 + Real(i) / 10;
      for (auto c : {magic::Component::f, magic::Component::f_hat})
        worst_dual = std::max(worst_dual, d(mp::abs(m.g_small_t(c, t) - m.g_expansion(c, t))));
    }
  }
  o.require(worst_dual < 1e-20, "dual-path agreement");

  // Raising the precision, the series order and the quadrature nodes.
  bool stable = true;
  double worst_ratio = 0;
  {
    const auto& base = magic::shared_magic(200, 128);
    magic::MagicOptions opt;
    opt.bits = 256;
    opt.series_order = 192;
    opt.panel_nodes = 48;
    const magic::MagicFunction fine(opt);
    PrecisionScope scope(256);
    for (const char* r : {"0.3", "1.0", "1.7", "2.2", "3.1"})
      for (auto c : {magic::Component::f, magic::Component::f_hat}) {
        const auto a = base.value(c, Real(r));
        const auto b = fine.value(c, Real(r));
        const Real diff = mp::abs(a.value - b.value);
        const Real allowed = a.err_estimate + b.err_estimate + mp::ldexp(Real(1), -190);
        stable = stable && diff <= allowed;
        worst_ratio = std::max(worst_ratio, d(diff / allowed));
      }
  }
  o.require(stable, "doubling within error estimates");
  o.detail << std::setprecision(3) << "Poisson " << worst_poisson << ", dual paths " << worst_dual
           << ", doubling diff/allowed " << worst_ratio;
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run")->delimiter(',')->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "E8 exact suite", 10, e8_exact},
      {2, "densities", 5, densities},
      {3, "modular identities", 30, identities},
      {4, "magic function values", 300, magic_values},
      {5, "sign suite", 300, signs},
      {6, "eigenfunction oracle", 120, eigenfunctions},
      {7, "LP bounds vs table", 900, lp_table},
      {8, "sharpness", 900, sharpness},
      {9, "property suites", 300, properties},
  };
  const std::set<int> selected(only.begin(), only.end());
  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail << "[over time limit " << c.limit_seconds << " s] ";
    }
    all = all && o.pass;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.name << "  ("
              << std::fixed << std::setprecision(1) << secs << " s)  " << std::defaultfloat << o.detail.str()
              << std::endl;
  }
  return all ? 0 : 1;
}
