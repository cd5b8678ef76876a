#pragma once

// Numerical linear programming bounds for sphere packing. Auxiliary functions
// are combinations of the radial Fourier eigenfunctions
//   b_k(x) = L_k^{(n/2-1)}(2π|x|²) e^{-π|x|²} / L_k^{(n/2-1)}(0),   b̂_k = (-1)^k b_k,
// so f(0) = Σ a_k and f̂(0) = Σ (-1)^k a_k.

#include <string>
#include <vector>

namespace e8lp::lp {

using Scalar = long double;

class EigenBasis {
 public:
  EigenBasis(int n, int degree);

  int dim() const { return n_; }
  int degree() const { return degree_; }
  double alpha() const { return alpha_; }
  static int eigen_sign(int k) { return k % 2 ? -1 : 1; }

  /// b_0(r) .. b_{degree-1}(r).
  std::vector<Scalar> values(Scalar r) const;

 private:
  int n_;
  int degree_;
  double alpha_;
  std::vector<Scalar> norm_;  // 1 / L_k(0)
};

EigenBasis eigenbasis(int n, int degree);

struct RadialFunction {
  int n = 0;
  std::vector<Scalar> coeffs;

  Scalar eval(Scalar r, const EigenBasis& basis) const;
  Scalar eval_hat(Scalar r, const EigenBasis& basis) const;
};

struct Grids {
  std::vector<Scalar> f_grid;     // radii ≥ r where f ≤ 0 is imposed
  std::vector<Scalar> fhat_grid;  // radii ≥ 0 where f̂ ≥ 0 is imposed
};

inline constexpr double kGridSpan = 12.0;
inline constexpr int kGridPoints = 400;

/// Geometric grid on [r, r+span] with first step ≤ r/200, and a linear grid on [0, span].
Grids default_grids(double r, int points = kGridPoints, double span = kGridSpan);

struct LPResult {
  bool feasible = false;
  /// Smallest f(0) subject to f̂(0) = 1 and the sampled sign constraints.
  double min_f0 = 0;
  RadialFunction function;
  int iterations = 0;
};

/// Feasible iff the optimum has f(0) ≤ f̂(0) = 1. The function is normalized by
/// f̂(0) = 1 and certifies the same bound whenever f(0) ≤ 1.
LPResult assemble_and_solve(int n, double r, int degree, const Grids& grids);

struct BoundCertificate {
  int n = 0;
  double r = 0;
  int degree = 0;
  std::vector<double> coeffs;
  // Fine-grid minima of −f on [r, R_max] and of f̂ on [0, R_max], each sample
  // weighted by max(1, |x|)^{n-1} so the margins bound the effect on ∫f and ∫f̂.
  double margin_f = 0;
  double margin_fhat = 0;
  double tolerance = 1e-9;
  double density_bound = 0;
  std::string source = "lp";
  double reference_density = 0;  // density of a packing meeting the bound, when known
  bool valid() const { return margin_f >= -tolerance && margin_fhat >= -tolerance; }
};

struct OptimizeOptions {
  double tol = 1e-6;  // bisection tolerance on r
  int grid_points = kGridPoints;
  double span = kGridSpan;
  int fine_factor = 10;
  int max_cuts = 24;  // cutting-plane rounds per radius
};

struct OptimizeResult {
  double r_star = 0;      // bisection result before certification
  BoundCertificate certificate;
  int lp_solves = 0;
};

int default_degree(int n);
OptimizeResult optimize_r(int n, int degree, const OptimizeOptions& options = {});

/// Fine-grid sign margins of `coeffs` at radius r, and the density bound.
void certify(BoundCertificate& c, const EigenBasis& basis, int fine_points, double span);

/// ball_volume(n, r/2). Throws InvalidCertificate if the margins are violated.
double bound_from_certificate(const BoundCertificate& c);

}  // namespace e8lp::lp
