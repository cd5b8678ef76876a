#pragma once

// The eight-dimensional magic function
//   f(x)  = sin²(π|x|²/2) ∫₀^∞ (t²φ(i/t) + ψ(it)) e^{-π|x|²t} dt
//   f̂(y) = sin²(π|y|²/2) ∫₀^∞ (t²φ(i/t) − ψ(it)) e^{-π|y|²t} dt
// evaluated as a Gauss–Legendre head on (0, t0] plus closed-form tails of the
// expansion Σ p_n(t) e^{-πnt} valid for t ≥ t0. The tails are meromorphic in
// |x|², which gives the continuation below |x| = √2.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "e8lp/forms.hpp"
#include "e8lp/lp_bounds.hpp"
#include "e8lp/numeric.hpp"

namespace e8lp::magic {

enum class Sign { plus, minus };
/// f, f̂, and the φ- and ψ-parts (f = φ-part + ψ-part, f̂ = φ-part − ψ-part).
enum class Component { f, f_hat, phi_part, psi_part };

/// p(t)·e^{-π·exp_index·t} with p(t) = Σ_j c_j t^j, c_j = exact_j · π^{j-1}.
struct ExpansionTerm {
  int exp_index = 0;
  std::array<Rational, 3> exact{};
  std::array<Real, 3> poly{};
  int degree() const;
};

struct IntegrandExpansion {
  Sign sign = Sign::plus;
  std::vector<ExpansionTerm> terms;  // sorted by exp_index, zero terms dropped
  Real t0 = 1;
  int order = 0;
  unsigned precision = 0;

  int min_exp_index() const;
  const ExpansionTerm* find(int exp_index) const;
  /// Σ p_n(t) e^{-πnt}.
  Real eval(const Real& t) const;
};

struct MagicOptions {
  unsigned bits = 200;
  /// Truncation order in q₂ = e^{-πt}; the φ pieces use half of it in q.
  int series_order = 128;
  /// Gauss–Legendre nodes per head panel (the error estimate uses half as many).
  int panel_nodes = 32;
};

struct MagicValue {
  Real r;
  Real value;
  Real err_estimate;
};

struct TaylorCoefficients {
  Real c0;
  Real c2;  // coefficient of |x|²
};

class MagicFunction {
 public:
  explicit MagicFunction(const MagicOptions& options = {});
  ~MagicFunction();
  MagicFunction(const MagicFunction&) = delete;
  MagicFunction& operator=(const MagicFunction&) = delete;

  const MagicOptions& options() const { return options_; }
  const IntegrandExpansion& expansion(Sign sign) const;

  /// t²φ(i/t) ± ψ(it) (or a single part), from the small-t nomes for t < t0 and
  /// from the expansion otherwise.
  Real g(Component c, const Real& t) const;
  Real g_small_t(Component c, const Real& t) const;
  Real g_expansion(Component c, const Real& t) const;

  MagicValue value(Component c, const Real& r) const;
  MagicValue f(const Real& r) const { return value(Component::f, r); }
  MagicValue f_hat(const Real& r) const { return value(Component::f_hat, r); }
  /// d/dr by a central difference with step 2^{-bits/3}.
  Real radial_derivative(Component c, const Real& r) const;

  /// c0 and c2 read off the e^{0·t} tail terms.
  TaylorCoefficients taylor(Component c) const;
  /// The same from values at small r (Richardson-extrapolated difference quotient).
  TaylorCoefficients taylor_numeric(Component c) const;

  /// Number of head nodes (fine rule).
  std::size_t head_nodes() const;

 private:
  struct Impl;
  MagicOptions options_;
  std::unique_ptr<Impl> impl_;
};

/// Shared instance per (bits, series_order); built on first use.
const MagicFunction& shared_magic(unsigned bits = 200, int series_order = 128);

IntegrandExpansion build_integrand(Sign sign, int order = 128, unsigned precision = 200);
Real eval_g(Sign sign, const Real& t, unsigned precision = 200);
MagicValue eval_f(const Real& r, unsigned precision = 200);
MagicValue eval_f_hat(const Real& r, unsigned precision = 200);
TaylorCoefficients taylor_at_zero(Component which, unsigned precision = 200);

struct CheckEntry {
  std::string name;
  bool passed = false;
  double value = 0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool all_passed() const;
};

CheckReport verify_roots(int k_max, double tol = 1e-8, unsigned precision = 200);
/// Sign of g± on a log grid over [10⁻³, 10³] and of f, f̂ on linear grids.
CheckReport verify_signs(int g_points = 1000, int f_points = 500, double tol = 1e-8, unsigned precision = 200);

struct EigenResidual {
  double r = 0;
  double value = 0;
  double transformed = 0;
  double residual = 0;
};

/// Radial Fourier transform in ℝ⁸ of the φ-part (Sign::plus, eigenvalue +1) or
/// the ψ-part (Sign::minus, eigenvalue −1), compared to ± itself.
std::vector<EigenResidual> eigenfunction_check(Sign sign, const std::vector<double>& sample_radii,
                                               unsigned precision = 128);

/// Certificate with r = √2 in dimension 8. Throws ChecksNotRun unless both
/// reports are present and passed.
lp::BoundCertificate sphere_packing_certificate(const CheckReport* roots, const CheckReport* signs,
                                                unsigned precision = 200);

}  // namespace e8lp::magic
