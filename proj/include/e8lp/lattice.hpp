#pragma once

// Exact and high-precision lattice computations: Gram matrices, embedded bases,
// duals, covolumes, bounded vector enumeration, theta coefficients, packing
// densities, and Poisson-summation checks with a Gaussian test function.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "e8lp/numeric.hpp"

namespace e8lp::lattice {

/// Symmetric n×n matrix of exact rationals.
class GramMatrix {
 public:
  GramMatrix() = default;
  /// Throws std::invalid_argument if `entries` is not square and symmetric.
  explicit GramMatrix(std::vector<std::vector<Rational>> entries);

  static GramMatrix identity(int n);
  static GramMatrix diagonal(std::span<const Rational> diag);

  int dim() const { return static_cast<int>(entries_.size()); }
  const Rational& operator()(int i, int j) const { return entries_[i][j]; }
  const std::vector<std::vector<Rational>>& entries() const { return entries_; }

  bool is_integral() const;
  bool is_even() const;
  Rational determinant() const;
  /// Exact inverse (the Gram matrix of the dual basis).
  GramMatrix inverse() const;
  /// Leading principal minors all positive.
  bool is_positive_definite() const;

  friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

 private:
  std::vector<std::vector<Rational>> entries_;
};

/// Rows are basis vectors v_1..v_n, embedded in R^n at working precision.
struct LatticeBasis {
  std::vector<std::vector<Real>> rows;
  std::optional<GramMatrix> source_gram;
  unsigned precision_bits = kDefaultPrecisionBits;

  int dim() const { return static_cast<int>(rows.size()); }
  /// Inner products of the embedded rows.
  std::vector<std::vector<Real>> gram() const;
};

/// Vector counts keyed by squared length.
struct ThetaCounts {
  Rational max_norm;
  std::map<Rational, std::uint64_t> counts;

  std::uint64_t count(const Rational& norm) const;
  /// Smallest nonzero squared length, if any vector besides 0 was found.
  std::optional<Rational> minimal_norm() const;
};

struct DensityReport {
  int n = 0;
  double minimal_length = 0;
  double covolume = 0;
  std::int64_t translate_count = 1;
  double density = 0;
};

GramMatrix e8_gram();
/// Coefficients of det(tI - g) from degree n down to 0.
std::vector<Rational> characteristic_polynomial(const GramMatrix& g);

/// Lower-triangular embedding with rows·rowsᵀ = g. Throws NotPositiveDefinite.
LatticeBasis basis_from_gram(const GramMatrix& g, unsigned precision_bits = kDefaultPrecisionBits);
/// Standard basis of Z^n (exact identity Gram attached).
LatticeBasis integer_lattice(int n, unsigned precision_bits = kDefaultPrecisionBits);
/// Inverse-transpose basis. Throws SingularBasis.
LatticeBasis dual_basis(const LatticeBasis& b);
Real covolume(const LatticeBasis& b);

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

/// Counts lattice vectors with |x|² ≤ max_norm. When the basis carries an exact
/// Gram matrix the keys are exact; otherwise norms are rounded to the nearest
/// multiple of 2^-32. Throws BudgetExceeded.
ThetaCounts enumerate_vectors(const LatticeBasis& b, const Rational& max_norm,
                              std::uint64_t node_budget = kDefaultNodeBudget);

/// Calls `visit(coeffs)` for every integer coefficient vector m with
/// |Σ m_i v_i + center|² ≤ radius² (checked in long double with slack; callers
/// recheck in their own arithmetic).
template <class Visitor>
void for_each_vector_near(const std::vector<std::vector<long double>>& gram, std::span<const long double> center_coeffs,
                          long double radius_sq, std::uint64_t node_budget, Visitor&& visit);

Real ball_volume(int n, const Real& r);
double ball_volume(int n, double r);
DensityReport packing_density(int n, double minimal_length, double covolume, std::int64_t translate_count = 1);
double greedy_lower_bound(int n);

/// |LHS - RHS| of translated Poisson summation for f(x) = exp(-π|x|²), both
/// sides truncated at `truncation_radius`.
Real poisson_verify(const LatticeBasis& b, std::span<const Real> translation, double truncation_radius,
                    unsigned precision_bits = kDefaultPrecisionBits);

// Implementation details exposed for the enumeration template.
namespace detail {
struct Cholesky {
  int n = 0;
  std::vector<long double> diag;               // q_ii
  std::vector<std::vector<long double>> mu;    // mu[i][j], j > i
};
Cholesky cholesky_ld(const std::vector<std::vector<long double>>& gram);
void throw_budget(std::uint64_t budget);
}  // namespace detail

template <class Visitor>
void for_each_vector_near(const std::vector<std::vector<long double>>& gram, std::span<const long double> center_coeffs,
                          long double radius_sq, std::uint64_t node_budget, Visitor&& visit) {
  // Fincke–Pohst on Q(m) = Σ_i q_ii (m_i + c_i + Σ_{j>i} mu_ij (m_j + c_j))², where
  // c is the center in coefficient space.
  const detail::Cholesky ch = detail::cholesky_ld(gram);
  const int n = ch.n;
  const long double slack = 1e-9L * (1.0L + radius_sq);
  std::vector<long long> m(n, 0);
  std::vector<long double> partial(n + 1, 0.0L);  // partial[i] = contribution of levels > i... stored at i+1
  std::vector<long double> shift(n, 0.0L);
  std::vector<long long> upper(n, 0);
  std::uint64_t nodes = 0;

  auto center = [&](int i) { return center_coeffs.empty() ? 0.0L : center_coeffs[i]; };

  auto start_level = [&](int i) {
    long double s = center(i);
    for (int j = i + 1; j < n; ++j) s += ch.mu[i][j] * (static_cast<long double>(m[j]) + center(j));
    shift[i] = s;
    long double rem = radius_sq + slack - partial[i + 1];
    if (rem < 0) rem = 0;
    long double w = std::sqrt(rem / ch.diag[i]);
    m[i] = static_cast<long long>(std::ceil(-s - w - 1e-12L));
    upper[i] = static_cast<long long>(std::floor(-s + w + 1e-12L));
  };

  int level = n - 1;
  partial[n] = 0;
  start_level(level);
  while (true) {
    if (m[level] > upper[level]) {
      ++level;
      if (level >= n) break;
      ++m[level];
      continue;
    }
    if (++nodes > node_budget) detail::throw_budget(node_budget);
    long double y = static_cast<long double>(m[level]) + shift[level];
    long double p = partial[level + 1] + ch.diag[level] * y * y;
    if (p > radius_sq + slack) {
      ++m[level];
      continue;
    }
    if (level == 0) {
      visit(std::span<const long long>(m));
      ++m[0];
      continue;
    }
    partial[level] = p;
    --level;
    start_level(level);
  }
}

}  // namespace e8lp::lattice
