#include "e8lp/radial_fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "e8lp/errors.hpp"
#include "e8lp/numeric.hpp"

namespace e8lp::radial {

RadialTransform::RadialTransform(int n, double r_max, int panels, int nodes_per_panel) : n_(n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  const GaussRuleD rule = gauss_legendre_d(nodes_per_panel);
  const double h = r_max / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (int i = 0; i < nodes_per_panel; ++i) {
      r_.push_back(a + h * (rule.nodes[i] + 1) / 2);
      w_.push_back(h * rule.weights[i] / 2);
    }
  }
}

double RadialTransform::apply(const std::vector<double>& samples, double rho) const {
  if (samples.size() != r_.size()) throw std::invalid_argument("sample count does not match the nodes");
  double sum = 0;
  if (n_ == 1) {
    for (std::size_t i = 0; i < r_.size(); ++i) sum += w_[i] * samples[i] * std::cos(2 * M_PI * rho * r_[i]);
    return 2 * sum;
  }
  const double nu = n_ / 2.0 - 1;
  const double half = n_ / 2.0;
  if (rho == 0) {
    // J_ν(x) ~ (x/2)^ν / Γ(ν+1)
    for (std::size_t i = 0; i < r_.size(); ++i) sum += w_[i] * samples[i] * std::pow(r_[i], n_ - 1);
    return 2 * std::pow(M_PI, half) / std::tgamma(half) * sum;
  }
  for (std::size_t i = 0; i < r_.size(); ++i)
    sum += w_[i] * samples[i] * std::cyl_bessel_j(nu, 2 * M_PI * rho * r_[i]) * std::pow(r_[i], half);
  return 2 * M_PI * std::pow(rho, -nu) * sum;
}

double RadialTransform::apply(const std::function<double(double)>& f, double rho) const {
  std::vector<double> samples(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) samples[i] = f(r_[i]);
  return apply(samples, rho);
}

double RadialTransform::self_check(double tol) const {
  std::vector<double> samples(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) samples[i] = std::exp(-M_PI * r_[i] * r_[i]);
  double worst = 0;
  for (double rho : {0.0, 0.3, 0.7, 1.0, 1.5, 2.2, 3.0}) {
    const double err = std::abs(apply(samples, rho) - std::exp(-M_PI * rho * rho));
    worst = std::max(worst, err);
  }
  if (!(worst <= tol)) throw OracleDiverged("radial transform misses the Gaussian by " + std::to_string(worst));
  return worst;
}

}  // namespace e8lp::radial
