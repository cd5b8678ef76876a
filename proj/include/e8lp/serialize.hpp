#pragma once

// JSON documents for lattices, theta counts, q-series, certificates and the
// reference tables, plus an on-disk q-series cache. Rationals are written as
// [num, den] pairs; components that do not fit in 64 bits become decimal strings.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"

#include "e8lp/lattice.hpp"
#include "e8lp/lp_bounds.hpp"
#include "e8lp/qseries.hpp"

namespace e8lp::io {

using nlohmann::json;

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);

/// {"n", "entries": [[num, den], ...]} in row-major order.
json gram_to_json(const lattice::GramMatrix& g);
lattice::GramMatrix gram_from_json(const json& j);

/// {"n", "precision_bits", "rows": [[decimal, ...], ...]}.
json basis_to_json(const lattice::LatticeBasis& b, int digits = 40);
lattice::LatticeBasis basis_from_json(const json& j);

/// {"max_norm": [num, den], "counts": [[[num, den], count], ...]} sorted by norm.
json theta_counts_to_json(const lattice::ThetaCounts& t);
lattice::ThetaCounts theta_counts_from_json(const json& j);

/// {"nome_div", "min_exp", "pi_power", "order", "coeffs": [[num, den], ...]}.
json qseries_to_json(const forms::QSeries& s);
forms::QSeries qseries_from_json(const json& j);

json certificate_to_json(const lp::BoundCertificate& c);
lp::BoundCertificate certificate_from_json(const json& j);

/// {"table1": [[n, "text"], ...], "table2": [...], "checksum"}.
json reference_tables_to_json();

/// Canonical text of a document (sorted keys, no extra whitespace) and its FNV-1a hash.
std::string canonical(const json& j);
std::uint64_t checksum(const json& j);

/// Cache directory: explicit argument, else $E8LP_CACHE_DIR, else ".e8lp-cache".
std::filesystem::path cache_dir(const std::string& configured = "");

/// One JSON file per (name, order, nome_div). A file that fails to parse or
/// whose checksum does not match is recomputed and overwritten.
class SeriesCache {
 public:
  explicit SeriesCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& name, int order, int nome_div) const;

  std::optional<forms::QSeries> load(const std::string& name, int order, int nome_div) const;
  void store(const std::string& name, int order, const forms::QSeries& s) const;
  forms::QSeries get_or_compute(const std::string& name, int order, int nome_div,
                                const std::function<forms::QSeries()>& compute) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace e8lp::io
