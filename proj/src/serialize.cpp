#include "e8lp/serialize.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "e8lp/reference.hpp"

namespace e8lp::io {

namespace {

json integer_to_json(const Integer& z) {
  if (z >= std::numeric_limits<std::int64_t>::min() && z <= std::numeric_limits<std::int64_t>::max())
    return z.convert_to<std::int64_t>();
  return z.str();
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw std::invalid_argument("expected an integer or a decimal string");
}

}  // namespace

json rational_to_json(const Rational& q) {
  return json::array({integer_to_json(numerator(q)), integer_to_json(denominator(q))});
}

Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("rational must be [num, den]");
  const Integer den = integer_from_json(j[1]);
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(integer_from_json(j[0]), den);
}

json gram_to_json(const lattice::GramMatrix& g) {
  json entries = json::array();
  for (const auto& row : g.entries())
    for (const auto& e : row) entries.push_back(rational_to_json(e));
  return {{"n", g.dim()}, {"entries", entries}};
}

lattice::GramMatrix gram_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const json& e = j.at("entries");
  if (n < 1 || e.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("gram entries do not match n");
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) rows[i][k] = rational_from_json(e[i * n + k]);
  return lattice::GramMatrix(std::move(rows));
}

json basis_to_json(const lattice::LatticeBasis& b, int digits) {
  json rows = json::array();
  for (const auto& row : b.rows) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_decimal(x, digits));
    rows.push_back(r);
  }
  json out = {{"n", b.dim()}, {"precision_bits", b.precision_bits}, {"rows", rows}};
  if (b.source_gram) out["gram"] = gram_to_json(*b.source_gram);
  return out;
}

lattice::LatticeBasis basis_from_json(const json& j) {
  lattice::LatticeBasis b;
  b.precision_bits = j.at("precision_bits").get<unsigned>();
  PrecisionScope scope(b.precision_bits);
  for (const auto& row : j.at("rows")) {
    std::vector<Real> r;
    for (const auto& x : row) r.emplace_back(x.get<std::string>());
    b.rows.push_back(std::move(r));
  }
  if (static_cast<int>(b.rows.size()) != j.at("n").get<int>()) throw std::invalid_argument("row count does not match n");
  if (j.contains("gram")) b.source_gram = gram_from_json(j["gram"]);
  return b;
}

json theta_counts_to_json(const lattice::ThetaCounts& t) {
  json counts = json::array();
  for (const auto& [norm, count] : t.counts) counts.push_back(json::array({rational_to_json(norm), count}));
  return {{"max_norm", rational_to_json(t.max_norm)}, {"counts", counts}};
}

lattice::ThetaCounts theta_counts_from_json(const json& j) {
  lattice::ThetaCounts t;
  t.max_norm = rational_from_json(j.at("max_norm"));
  for (const auto& pair : j.at("counts")) t.counts[rational_from_json(pair.at(0))] = pair.at(1).get<std::uint64_t>();
  return t;
}

json qseries_to_json(const forms::QSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(rational_to_json(c));
  return {{"nome_div", s.nome_div()},
          {"min_exp", s.min_exp()},
          {"pi_power", s.pi_power()},
          {"order", s.order()},
          {"coeffs", coeffs}};
}

forms::QSeries qseries_from_json(const json& j) {
  const int nome_div = j.at("nome_div").get<int>();
  const int order = j.at("order").get<int>();
  const int pi = j.at("pi_power").get<int>();
  const json& c = j.at("coeffs");
  if (c.empty()) return forms::QSeries::zero(nome_div, order, pi);
  std::vector<Rational> coeffs;
  for (const auto& x : c) coeffs.push_back(rational_from_json(x));
  forms::QSeries s(nome_div, j.at("min_exp").get<int>(), std::move(coeffs), pi);
  if (s.order() != order) throw std::invalid_argument("coefficient count does not match order");
  return s;
}

json certificate_to_json(const lp::BoundCertificate& c) {
  return {{"n", c.n},
          {"r", c.r},
          {"degree", c.degree},
          {"coeffs", c.coeffs},
          {"margin_f", c.margin_f},
          {"margin_fhat", c.margin_fhat},
          {"tolerance", c.tolerance},
          {"density_bound", c.density_bound},
          {"source", c.source},
          {"reference_density", c.reference_density},
          {"valid", c.valid()}};
}

lp::BoundCertificate certificate_from_json(const json& j) {
  lp::BoundCertificate c;
  c.n = j.at("n").get<int>();
  c.r = j.at("r").get<double>();
  c.degree = j.at("degree").get<int>();
  c.coeffs = j.at("coeffs").get<std::vector<double>>();
  c.margin_f = j.at("margin_f").get<double>();
  c.margin_fhat = j.at("margin_fhat").get<double>();
  c.tolerance = j.at("tolerance").get<double>();
  c.density_bound = j.at("density_bound").get<double>();
  c.source = j.value("source", "lp");
  c.reference_density = j.value("reference_density", 0.0);
  return c;
}

json reference_tables_to_json() {
  auto rows = [](const auto& t) {
    json a = json::array();
    for (const auto& r : t) a.push_back(json::array({r.n, std::string(r.text)}));
    return a;
  };
  std::ostringstream hex;
  hex << std::hex << reference::checksum();
  return {{"table1", rows(reference::table1())}, {"table2", rows(reference::table2())}, {"checksum", hex.str()}};
}

std::string canonical(const json& j) { return j.dump(); }

std::uint64_t checksum(const json& j) { return reference::fnv1a(canonical(j)); }

std::filesystem::path cache_dir(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("E8LP_CACHE_DIR"); env && *env) return env;
  return ".e8lp-cache";
}

SeriesCache::SeriesCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path SeriesCache::path_for(const std::string& name, int order, int nome_div) const {
  return dir_ / (name + "-o" + std::to_string(order) + "-q" + std::to_string(nome_div) + ".json");
}

std::optional<forms::QSeries> SeriesCache::load(const std::string& name, int order, int nome_div) const {
  std::ifstream in(path_for(name, order, nome_div));
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    const json& series = doc.at("series");
    if (doc.at("checksum").get<std::string>() != std::to_string(checksum(series))) return std::nullopt;
    if (doc.at("name").get<std::string>() != name) return std::nullopt;
    forms::QSeries s = qseries_from_json(series);
    if (s.nome_div() != nome_div) return std::nullopt;
    return s;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void SeriesCache::store(const std::string& name, int order, const forms::QSeries& s) const {
  std::filesystem::create_directories(dir_);
  const json series = qseries_to_json(s);
  const json doc = {{"name", name}, {"series", series}, {"checksum", std::to_string(checksum(series))}};
  const auto path = path_for(name, order, s.nome_div());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump();
  }
  std::filesystem::rename(tmp, path);
}

forms::QSeries SeriesCache::get_or_compute(const std::string& name, int order, int nome_div,
                                           const std::function<forms::QSeries()>& compute) const {
  if (auto hit = load(name, order, nome_div)) return *hit;
  forms::QSeries s = compute();
  try {
    store(name, order, s);
  } catch (const std::exception&) {
    // An unwritable cache only costs recomputation.
  }
  return s;
}

}  // namespace e8lp::io
