#pragma once

// Double-precision radial Fourier transform in ℝⁿ,
//   F̂(ρ) = 2π ρ^{1-n/2} ∫₀^∞ F(r) J_{n/2-1}(2πρr) r^{n/2} dr,
// by composite Gauss–Legendre quadrature on [0, r_max]. Used as an
// independent oracle for eigenfunction claims.

#include <functional>
#include <vector>

namespace e8lp::radial {

class RadialTransform {
 public:
  RadialTransform(int n, double r_max = 12.0, int panels = 96, int nodes_per_panel = 24);

  int dim() const { return n_; }
  const std::vector<double>& nodes() const { return r_; }

  /// Transform from samples of F at nodes().
  double apply(const std::vector<double>& samples, double rho) const;
  double apply(const std::function<double(double)>& f, double rho) const;

  /// Largest deviation from e^{-πρ²} when transforming e^{-πr²}. Throws
  /// OracleDiverged when it exceeds `tol`.
  double self_check(double tol = 1e-8) const;

 private:
  int n_;
  std::vector<double> r_;
  std::vector<double> w_;
};

}  // namespace e8lp::radial
