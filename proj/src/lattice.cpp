#include "e8lp/lattice.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "e8lp/errors.hpp"

namespace e8lp::lattice {

namespace mp = boost::multiprecision;

GramMatrix::GramMatrix(std::vector<std::vector<Rational>> entries) : entries_(std::move(entries)) {
  const std::size_t n = entries_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_[i].size() != n) throw std::invalid_argument("Gram matrix must be square");
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[i][j] != entries_[j][i]) throw std::invalid_argument("Gram matrix must be symmetric");
    }
  }
}

GramMatrix GramMatrix::identity(int n) {
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) e[i][i] = 1;
  return GramMatrix(std::move(e));
}

GramMatrix GramMatrix::diagonal(std::span<const Rational> diag) {
  const int n = static_cast<int>(diag.size());
  std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) e[i][i] = diag[i];
  return GramMatrix(std::move(e));
}

bool GramMatrix::is_integral() const {
  for (const auto& row : entries_)
    for (const auto& x : row)
      if (mp::denominator(x) != 1) return false;
  return true;
}

bool GramMatrix::is_even() const {
  if (!is_integral()) return false;
  for (int i = 0; i < dim(); ++i)
    if (mp::numerator(entries_[i][i]) % 2 != 0) return false;
  return true;
}

Rational GramMatrix::determinant() const {
  auto a = entries_;
  const int n = dim();
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r) {
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return Rational(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

GramMatrix GramMatrix::inverse() const {
  const int n = dim();
  auto a = entries_;
  auto inv = identity(n).entries_;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r) {
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw SingularBasis("Gram matrix is singular");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Rational p = a[c][c];
    for (int k = 0; k < n; ++k) {
      a[c][k] /= p;
      inv[c][k] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return GramMatrix(std::move(inv));
}

bool GramMatrix::is_positive_definite() const {
  // Sylvester: every pivot of the elimination (ratio of consecutive leading minors) is positive.
  auto a = entries_;
  const int n = dim();
  for (int c = 0; c < n; ++c) {
    if (a[c][c] <= 0) return false;
    for (int r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return true;
}

std::vector<std::vector<Real>> LatticeBasis::gram() const {
  PrecisionScope scope(precision_bits);
  const int n = dim();
  std::vector<std::vector<Real>> g(n, std::vector<Real>(n, Real(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Real s = 0;
      for (std::size_t k = 0; k < rows[i].size(); ++k) s += rows[i][k] * rows[j][k];
      g[i][j] = s;
      g[j][i] = s;
    }
  return g;
}

std::uint64_t ThetaCounts::count(const Rational& norm) const {
  auto it = counts.find(norm);
  return it == counts.end() ? 0 : it->second;
}

std::optional<Rational> ThetaCounts::minimal_norm() const {
  for (const auto& [norm, c] : counts)
    if (norm > 0 && c > 0) return norm;
  return std::nullopt;
}

GramMatrix e8_gram() {
  // Dynkin diagram: chain 1-2-3-5-6-7-8 with node 4 attached to node 3.
  static constexpr int kEdges[][2] = {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {4, 5}, {5, 6}, {6, 7}};
  std::vector<std::vector<Rational>> e(8, std::vector<Rational>(8, Rational(0)));
  for (int i = 0; i < 8; ++i) e[i][i] = 2;
  for (const auto& edge : kEdges) {
    e[edge[0]][edge[1]] = -1;
    e[edge[1]][edge[0]] = -1;
  }
  return GramMatrix(std::move(e));
}

std::vector<Rational> characteristic_polynomial(const GramMatrix& g) {
  // Faddeev–LeVerrier over the rationals.
  const int n = g.dim();
  std::vector<Rational> coeffs(n + 1, Rational(0));  // coeffs[k] multiplies t^(n-k)
  coeffs[0] = 1;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    std::vector<std::vector<Rational>> next(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational s = 0;
        for (int l = 0; l < n; ++l)
          if (g(i, l) != 0 && m[l][j] != 0) s += g(i, l) * m[l][j];
        if (i == j) s += coeffs[k - 1];
        next[i][j] = s;
      }
    m = std::move(next);
    Rational trace = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        if (g(i, l) != 0 && m[l][i] != 0) trace += g(i, l) * m[l][i];
    coeffs[k] = -trace / k;
  }
  return coeffs;
}

LatticeBasis basis_from_gram(const GramMatrix& g, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  const int n = g.dim();
  std::vector<std::vector<Real>> l(n, std::vector<Real>(n, Real(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Real s = to_real(g(i, j));
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 0) throw NotPositiveDefinite("nonpositive pivot at row " + std::to_string(i));
        l[i][i] = mp::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  LatticeBasis b;
  b.rows = std::move(l);
  b.source_gram = g;
  b.precision_bits = precision_bits;
  return b;
}

LatticeBasis integer_lattice(int n, unsigned precision_bits) {
  return basis_from_gram(GramMatrix::identity(n), precision_bits);
}

namespace {

// Gauss–Jordan with partial pivoting; returns the inverse or throws SingularBasis.
std::vector<std::vector<Real>> invert(std::vector<std::vector<Real>> a, unsigned bits) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Real>> inv(n, std::vector<Real>(n, Real(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  Real scale = 0;
  for (const auto& row : a)
    for (const auto& x : row) scale = mp::max(scale, Real(mp::abs(x)));
  const Real tiny = scale * epsilon_for_bits(bits / 2);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (mp::abs(a[r][c]) > mp::abs(a[piv][c])) piv = r;
    if (mp::abs(a[piv][c]) <= tiny) throw SingularBasis("basis matrix is singular to working precision");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Real p = a[c][c];
    for (int k = 0; k < n; ++k) {
      a[c][k] /= p;
      inv[c][k] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      Real f = a[r][c];
      if (f == 0) continue;
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace

LatticeBasis dual_basis(const LatticeBasis& b) {
  PrecisionScope scope(b.precision_bits);
  auto inv = invert(b.rows, b.precision_bits);
  const int n = b.dim();
  LatticeBasis d;
  d.precision_bits = b.precision_bits;
  d.rows.assign(n, std::vector<Real>(n, Real(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.rows[i][j] = inv[j][i];
  if (b.source_gram) d.source_gram = b.source_gram->inverse();
  return d;
}

Real covolume(const LatticeBasis& b) {
  PrecisionScope scope(b.precision_bits);
  auto a = b.rows;
  const int n = b.dim();
  Real det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (mp::abs(a[r][c]) > mp::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0) return Real(0);
    if (piv != c) std::swap(a[piv], a[c]);
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      Real f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return mp::abs(det);
}

namespace detail {

Cholesky cholesky_ld(const std::vector<std::vector<long double>>& gram) {
  Cholesky ch;
  ch.n = static_cast<int>(gram.size());
  const int n = ch.n;
  ch.diag.assign(n, 0.0L);
  ch.mu.assign(n, std::vector<long double>(n, 0.0L));
  for (int i = 0; i < n; ++i) {
    long double d = gram[i][i];
    for (int k = 0; k < i; ++k) d -= ch.diag[k] * ch.mu[k][i] * ch.mu[k][i];
    if (!(d > 0)) throw NotPositiveDefinite("enumeration Gram matrix is not positive definite");
    ch.diag[i] = d;
    for (int j = i + 1; j < n; ++j) {
      long double s = gram[i][j];
      for (int k = 0; k < i; ++k) s -= ch.diag[k] * ch.mu[k][i] * ch.mu[k][j];
      ch.mu[i][j] = s / d;
    }
  }
  return ch;
}

void throw_budget(std::uint64_t budget) {
  throw BudgetExceeded("enumeration exceeded node budget of " + std::to_string(budget));
}

}  // namespace detail

namespace {

std::vector<std::vector<long double>> to_long_double(const std::vector<std::vector<Real>>& g) {
  std::vector<std::vector<long double>> out(g.size(), std::vector<long double>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i][j] = g[i][j].convert_to<long double>();
  return out;
}

std::vector<std::vector<long double>> to_long_double(const GramMatrix& g) {
  const int n = g.dim();
  std::vector<std::vector<long double>> out(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = g(i, j).convert_to<long double>();
  return out;
}

}  // namespace

ThetaCounts enumerate_vectors(const LatticeBasis& b, const Rational& max_norm, std::uint64_t node_budget) {
  if (max_norm < 0) throw std::invalid_argument("max_norm must be nonnegative");
  ThetaCounts result;
  result.max_norm = max_norm;
  const int n = b.dim();

  if (b.source_gram) {
    // Exact path: scale the Gram matrix to integers and evaluate mᵀGm in __int128.
    const GramMatrix& g = *b.source_gram;
    Integer den = 1;
    for (const auto& row : g.entries())
      for (const auto& x : row) den = mp::lcm(den, Integer(mp::denominator(x)));
    std::vector<std::vector<long long>> gi(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gi[i][j] = Integer(g(i, j) * den).convert_to<long long>();
    const Integer bound_int = mp::numerator(Rational(max_norm * den)) / mp::denominator(Rational(max_norm * den));
    const __int128 bound = static_cast<__int128>(bound_int.convert_to<long long>());
    std::map<long long, std::uint64_t> raw;
    const long double radius_sq = max_norm.convert_to<long double>();
    for_each_vector_near(to_long_double(g), {}, radius_sq, node_budget, [&](std::span<const long long> m) {
      __int128 q = 0;
      for (int i = 0; i < n; ++i) {
        if (m[i] == 0) continue;
        __int128 row = 0;
        for (int j = 0; j < n; ++j) row += static_cast<__int128>(gi[i][j]) * m[j];
        q += row * m[i];
      }
      if (q <= bound) ++raw[static_cast<long long>(q)];
    });
    for (const auto& [q, c] : raw) result.counts[Rational(Integer(q), den)] += c;
    return result;
  }

  const auto gram = b.gram();
  const auto gl = to_long_double(gram);
  const long double radius_sq = max_norm.convert_to<long double>();
  std::map<long long, std::uint64_t> raw;  // keyed by round(norm · 2^32)
  for_each_vector_near(gl, {}, radius_sq, node_budget, [&](std::span<const long long> m) {
    long double q = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += gl[i][j] * m[i] * m[j];
    if (q <= radius_sq * (1 + 1e-15L)) ++raw[std::llround(std::ldexp(q, 32))];
  });
  for (const auto& [q, c] : raw) result.counts[Rational(Integer(q), Integer(1) << 32)] += c;
  return result;
}

Real ball_volume(int n, const Real& r) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  Real half_n = Real(n) / 2;
  return mp::pow(real_pi(), half_n) / mp::tgamma(half_n + 1) * mp::pow(r, n);
}

double ball_volume(int n, double r) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1)) * std::pow(r, n);
}

DensityReport packing_density(int n, double minimal_length, double covolume, std::int64_t translate_count) {
  if (n < 1 || !(minimal_length > 0) || !(covolume > 0) || translate_count < 1)
    throw std::invalid_argument("packing_density requires positive arguments");
  DensityReport rep;
  rep.n = n;
  rep.minimal_length = minimal_length;
  rep.covolume = covolume;
  rep.translate_count = translate_count;
  rep.density = static_cast<double>(translate_count) * ball_volume(n, minimal_length / 2) / covolume;
  return rep;
}

double greedy_lower_bound(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  return std::ldexp(1.0, -n);
}

namespace {

// Σ_{x∈Λ, |x+t|≤R} exp(-π|x+t|²) · e^{2πi<x,phase>}; returns (re, im).
std::pair<Real, Real> gaussian_lattice_sum(const LatticeBasis& b, std::span<const Real> shift,
                                           std::span<const Real> phase, double radius) {
  const int n = b.dim();
  const Real pi = real_pi();
  const Real r2 = Real(radius) * Real(radius);
  bool zero_shift = true;
  for (const auto& s : shift) zero_shift = zero_shift && s == 0;
  bool zero_phase = true;
  for (const auto& s : phase) zero_phase = zero_phase && s == 0;

  if (zero_shift && zero_phase && b.source_gram) {
    // Group by exact norm; the rational cutoff slightly exceeds R² and the
    // comparison below trims it back.
    const Rational max_norm(Integer(static_cast<long long>(std::ceil(radius * radius * 1e6))), Integer(1000000));
    ThetaCounts tc = enumerate_vectors(b, max_norm);
    Real sum = 0;
    for (const auto& [norm, c] : tc.counts) {
      if (to_real(norm) > r2) continue;
      sum += Real(c) * mp::exp(-pi * to_real(norm));
    }
    return {sum, Real(0)};
  }

  // Coefficients of the shift in the basis: solve Bᵀ c = shift.
  std::vector<long double> center(n, 0.0L);
  std::vector<Real> center_exact(n, Real(0));
  if (!zero_shift) {
    std::vector<std::vector<Real>> bt(n, std::vector<Real>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) bt[i][j] = b.rows[j][i];
      bt[i][n] = shift[i];
    }
    for (int c = 0; c < n; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r)
        if (mp::abs(bt[r][c]) > mp::abs(bt[piv][c])) piv = r;
      std::swap(bt[piv], bt[c]);
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        Real f = bt[r][c] / bt[c][c];
        for (int k = c; k <= n; ++k) bt[r][k] -= f * bt[c][k];
      }
    }
    for (int i = 0; i < n; ++i) {
      center_exact[i] = bt[i][n] / bt[i][i];
      center[i] = center_exact[i].convert_to<long double>();
    }
  }
  std::vector<Real> phase_dot(n, Real(0));  // <v_i, phase>
  if (!zero_phase)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) phase_dot[i] += b.rows[i][j] * phase[j];

  const auto gl = to_long_double(b.gram());
  // With an integral Gram matrix, |m + c|² = mᵀGm + 2 mᵀGc + cᵀGc where the
  // first term is an exact integer.
  const bool integral = b.source_gram && b.source_gram->is_integral();
  std::vector<std::vector<long long>> gi;
  std::vector<Real> gc(n, Real(0));
  Real cgc = 0;
  if (integral) {
    gi.assign(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gi[i][j] = numerator((*b.source_gram)(i, j)).convert_to<long long>();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) gc[i] += Real(gi[i][j]) * center_exact[j];
      cgc += center_exact[i] * gc[i];
    }
  }
  Real re = 0, im = 0;
  std::vector<Real> point(n);
  if (integral) {
    // e^{-π|m+c|²} = e^{-π(cᵀGc + mᵀGm)} Π e^{-2π m_i (Gc)_i}, and the phase
    // factors the same way, so each term costs a few multiplications.
    std::map<long long, Real> quad;
    std::vector<std::map<long long, Real>> lin(n);
    std::vector<std::map<long long, std::pair<Real, Real>>> rot(n);
    auto quad_factor = [&](long long q) -> const Real& {
      auto it = quad.find(q);
      if (it == quad.end()) it = quad.emplace(q, mp::exp(-pi * (cgc + q))).first;
      return it->second;
    };
    auto lin_factor = [&](int i, long long mi) -> const Real& {
      auto it = lin[i].find(mi);
      if (it == lin[i].end()) it = lin[i].emplace(mi, mp::exp(-2 * pi * mi * gc[i])).first;
      return it->second;
    };
    auto rot_factor = [&](int i, long long mi) -> const std::pair<Real, Real>& {
      auto it = rot[i].find(mi);
      if (it == rot[i].end()) {
        const Real angle = 2 * pi * mi * phase_dot[i];
        it = rot[i].emplace(mi, std::pair<Real, Real>{mp::cos(angle), mp::sin(angle)}).first;
      }
      return it->second;
    };
    Real g, c, sn, tmp, norm;
    const long double cgc_ld = cgc.convert_to<long double>();
    const long double r2_ld = static_cast<long double>(radius) * radius;
    std::vector<long double> gc_ld(n);
    for (int i = 0; i < n; ++i) gc_ld[i] = gc[i].convert_to<long double>();
    for_each_vector_near(gl, center, static_cast<long double>(radius * radius), kDefaultNodeBudget,
                         [&](std::span<const long long> m) {
                           long long q = 0;
                           for (int i = 0; i < n; ++i) {
                             if (m[i] == 0) continue;
                             long long row = 0;
                             for (int j = 0; j < n; ++j) row += gi[i][j] * m[j];
                             q += m[i] * row;
                           }
                           long double approx = cgc_ld + q;
                           for (int i = 0; i < n; ++i) approx += 2 * m[i] * gc_ld[i];
                           if (approx > r2_ld + 1e-9L) return;
                           if (approx > r2_ld - 1e-9L) {
                             norm = cgc + q;
                             for (int i = 0; i < n; ++i)
                               if (m[i] != 0) norm += 2 * m[i] * gc[i];
                             if (norm > r2) return;
                           }
                           g = quad_factor(q);
                           if (!zero_shift)
                             for (int i = 0; i < n; ++i)
                               if (m[i] != 0) g *= lin_factor(i, m[i]);
                           if (zero_phase) {
                             re += g;
                             return;
                           }
                           c = 1;
                           sn = 0;
                           for (int i = 0; i < n; ++i) {
                             if (m[i] == 0) continue;
                             const auto& [rc, rs] = rot_factor(i, m[i]);
                             tmp = c * rc - sn * rs;
                             sn = c * rs + sn * rc;
                             c = tmp;
                           }
                           re += g * c;
                           im += g * sn;
                         });
    return {re, im};
  }
  for_each_vector_near(gl, center, static_cast<long double>(radius * radius), kDefaultNodeBudget,
                       [&](std::span<const long long> m) {
                         for (int k = 0; k < n; ++k) point[k] = zero_shift ? Real(0) : shift[k];
                         for (int i = 0; i < n; ++i) {
                           if (m[i] == 0) continue;
                           for (int k = 0; k < n; ++k) point[k] += b.rows[i][k] * m[i];
                         }
                         Real norm = 0;
                         for (int k = 0; k < n; ++k) norm += point[k] * point[k];
                         if (norm > r2) return;
                         Real g = mp::exp(-pi * norm);
                         if (zero_phase) {
                           re += g;
                           return;
                         }
                         Real dot = 0;
                         for (int i = 0; i < n; ++i) dot += phase_dot[i] * m[i];
                         Real angle = 2 * pi * dot;
                         re += g * mp::cos(angle);
                         im += g * mp::sin(angle);
                       });
  return {re, im};
}

}  // namespace

Real poisson_verify(const LatticeBasis& b, std::span<const Real> translation, double truncation_radius,
                    unsigned precision_bits) {
  if (!(truncation_radius > 0)) throw std::invalid_argument("truncation radius must be positive");
  PrecisionScope scope(precision_bits);
  const int n = b.dim();
  if (!translation.empty() && static_cast<int>(translation.size()) != n)
    throw std::invalid_argument("translation has the wrong dimension");
  std::vector<Real> t(n, Real(0));
  for (int i = 0; i < static_cast<int>(translation.size()); ++i) t[i] = promote(translation[i]);

  // Σ_x f(x+t) = (1/vol) Σ_y f̂(y) e^{2πi<y,t>}, with f̂ = f for the Gaussian.
  auto [lhs, lhs_im] = gaussian_lattice_sum(b, t, {}, truncation_radius);
  const LatticeBasis dual = dual_basis(b);
  auto [rhs_re, rhs_im] = gaussian_lattice_sum(dual, {}, t, truncation_radius);
  const Real vol = covolume(b);
  Real diff = lhs - rhs_re / vol;
  return mp::sqrt(diff * diff + (rhs_im / vol) * (rhs_im / vol));
}

}  // namespace e8lp::lattice
