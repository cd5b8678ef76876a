#pragma once

// Quasimodular forms built from q-series: the depth-2 form φ, the level-2 form
// ψ, and evaluation on the upper half plane that switches to the z ↦ -1/z
// transformed expression whenever that gives a smaller nome.

#include <array>
#include <string>
#include <vector>

#include "e8lp/qseries.hpp"

namespace e8lp::forms {

/// c0 + c1·E2 + c2·E2².
struct QuasiForm {
  int weight = 0;
  std::array<QSeries, 3> parts{QSeries::zero(1, 0), QSeries::zero(1, 0), QSeries::zero(1, 0)};

  int depth() const;
  /// Substitutes the q-series of E2 and returns a single series.
  QSeries collapse() const;
};

inline constexpr int kDefaultSeriesOrder = 64;

/// 4π(E2E4 − E6)² / (5(E6² − E4³)), from Eisenstein series of the given order.
QuasiForm phi_quasiform(int order);
/// ψ as a Laurent series in q₂, from Θ_ℤ⁴ of the given order.
QSeries psi_qseries(int order);
/// The small-t companion ψ̃ with ψ(it) = t²ψ̃(i/t): θ4 replaced by θ2.
QSeries psi_tilde_qseries(int order);

enum class Which { at_it, at_i_over_t };
enum class Theta { theta2, theta3, theta4 };

struct ThetaFourth {
  Complex t2, t3, t4;  // θ2⁴, θ3⁴, θ4⁴
};

/// Precomputed numeric series for a given order and working precision.
class FormEvaluator {
 public:
  FormEvaluator(int order, unsigned bits);

  int order() const { return order_; }
  unsigned bits() const { return bits_; }

  /// E_k from its series at z itself.
  Complex eisenstein_direct(int k, const Complex& z) const;
  /// E_k from its series at -1/z, mapped back with the transformation law.
  Complex eisenstein_transformed(int k, const Complex& z) const;
  /// Whichever of the two has the smaller nome.
  Complex eisenstein(int k, const Complex& z) const;

  ThetaFourth theta_direct(const Complex& z) const;
  ThetaFourth theta_transformed(const Complex& z) const;
  ThetaFourth theta(const Complex& z) const;
  /// Θ_ℤ itself (not a power) and its transformed evaluation with the principal root.
  Complex theta3_direct(const Complex& z) const;
  Complex theta3_transformed(const Complex& z) const;

  Complex phi(const Complex& z) const;
  /// ψ assembled from θ fourth powers at z.
  Complex psi(const Complex& z) const;
  Complex psi_from(const ThetaFourth& th) const;

  /// Real values on the imaginary axis.
  Real eisenstein_it(int k, const Real& t) const;
  Real phi_it(const Real& t) const;
  Real psi_it(const Real& t) const;

  const NumericSeries& series(const std::string& name) const;

 private:
  int order_;
  unsigned bits_;
  Real rel_tol_;
  NumericSeries e2_, e4_, e6_, th3_, th4_, th2_, theta_, phi0_, phi1_, phi2_;
};

/// E_k(it) or E_k(i/t), evaluated through whichever argument has the larger
/// imaginary part. k ∈ {2, 4, 6}.
Complex eval_eisenstein_stable(int k, const Real& t, Which which, unsigned bits = kDefaultPrecisionBits,
                               int order = kDefaultSeriesOrder);
/// Fourth power of θ2, θ3 or θ4 at z.
Complex eval_theta_stable(Theta variant, const Complex& z, unsigned bits = kDefaultPrecisionBits,
                          int order = kDefaultSeriesOrder);

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0;
  std::string detail;
};

struct IdentityReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Parses "2i", "3i/2", "0.5+1i", "-0.3+1.3i", "i".
Complex parse_point(const std::string& text);
std::vector<Complex> parse_points(const std::string& csv);
std::vector<Complex> default_sample_points();

/// Θ_E8 vs E4 (exact), Leech q¹ coefficient (exact), E2 quasimodularity and
/// the ψ functional equation (numerical) at the sample points.
IdentityReport verify_identities(int order, const std::vector<Complex>& points, unsigned bits = kDefaultPrecisionBits,
                                 double e2_tol = 1e-25, double psi_tol = 1e-20);

}  // namespace e8lp::forms
