#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "e8lp/errors.hpp"
#include "e8lp/forms.hpp"
#include "e8lp/harness.hpp"
#include "e8lp/lattice.hpp"
#include "e8lp/reference.hpp"
#include "e8lp/serialize.hpp"

using namespace e8lp;
using e8lp::harness::Command;
using e8lp::harness::JobConfig;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("e8lp-test-" + name);
  fs::remove_all(p);
  return p;
}

JobConfig job(Command c, const std::string& action, const std::string& target = "") {
  JobConfig j;
  j.command = c;
  j.action = action;
  j.target = target;
  return j;
}

}  // namespace

TEST_CASE("reference tables are intact") {
  CHECK(reference::checksum() == reference::expected_checksum());
  CHECK_NOTHROW(reference::verify_tables());
  CHECK(reference::table1().size() == 36);
  CHECK(reference::table2().size() == 36);
  for (int n = 1; n <= 36; ++n) CHECK(reference::record_density(n) <= reference::lp_bound(n));
  CHECK(reference::record_density(8) == doctest::Approx(0.253669507).epsilon(1e-12));
  CHECK(reference::record_density(24) == doctest::Approx(0.0019295743).epsilon(1e-12));
  CHECK(reference::lp_bound(2) == doctest::Approx(0.906899683).epsilon(1e-12));
}

TEST_CASE("reference tables round-trip through JSON") {
  const json doc = io::reference_tables_to_json();
  const json again = json::parse(doc.dump());
  REQUIRE(again["table1"].size() == 36);
  for (int i = 0; i < 36; ++i) {
    CHECK(again["table1"][i][0] == reference::table1()[i].n);
    CHECK(again["table1"][i][1].get<std::string>() == reference::table1()[i].text);
    CHECK(again["table2"][i][1].get<std::string>() == reference::table2()[i].text);
  }
  CHECK(io::canonical(again) == io::canonical(doc));
}

TEST_CASE("rationals, Gram matrices, bases and theta counts round-trip") {
  for (const Rational& q : {Rational(0), Rational(-7, 3), Rational(Integer("123456789012345678901234567890"), 7)})
    CHECK(io::rational_from_json(json::parse(io::rational_to_json(q).dump())) == q);
  CHECK(io::rational_to_json(Rational(Integer("123456789012345678901234567890")))[0].is_string());
  CHECK_THROWS(io::rational_from_json(json::array({1, 0})));
  CHECK_THROWS(io::rational_from_json(json::array({1})));

  const auto gram = lattice::e8_gram();
  CHECK(io::gram_from_json(io::gram_to_json(gram)) == gram);

  const auto basis = lattice::basis_from_gram(gram, 160);
  const auto back = io::basis_from_json(json::parse(io::basis_to_json(basis, 50).dump()));
  REQUIRE(back.dim() == 8);
  REQUIRE(back.source_gram);
  CHECK(*back.source_gram == gram);
  PrecisionScope scope(160);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) CHECK(abs(back.rows[i][k] - basis.rows[i][k]) < Real("1e-45"));

  const auto theta = lattice::enumerate_vectors(basis, Rational(6));
  const auto t2 = io::theta_counts_from_json(io::theta_counts_to_json(theta));
  CHECK(t2.max_norm == theta.max_norm);
  CHECK(t2.counts == theta.counts);
}

TEST_CASE("q-series and certificates round-trip") {
  for (const auto& s : {forms::eisenstein_qseries(4, 12), forms::psi_qseries(10), forms::theta_z_qseries(9)})
    CHECK(io::qseries_from_json(json::parse(io::qseries_to_json(s).dump())) == s);

  lp::BoundCertificate c;
  c.n = 8;
  c.r = std::sqrt(2.0);
  c.degree = 3;
  c.coeffs = {0.5, -0.25, 1e-17};
  c.margin_f = -1e-12;
  c.density_bound = 0.25366950790104802;
  c.source = "magic";
  const auto c2 = io::certificate_from_json(json::parse(io::certificate_to_json(c).dump()));
  CHECK(c2.r == c.r);
  CHECK(c2.coeffs == c.coeffs);
  CHECK(c2.margin_f == c.margin_f);
  CHECK(c2.density_bound == c.density_bound);
  CHECK(c2.source == "magic");
}

TEST_CASE("series cache stores, reloads and recovers from corruption") {
  const fs::path dir = scratch_dir("cache");
  const io::SeriesCache cache(dir);
  int computed = 0;
  auto compute = [&] {
    ++computed;
    return forms::eisenstein_qseries(6, 10);
  };
  const auto first = cache.get_or_compute("E6", 10, 1, compute);
  const auto second = cache.get_or_compute("E6", 10, 1, compute);
  CHECK(computed == 1);
  CHECK(first == second);
  const fs::path file = cache.path_for("E6", 10, 1);
  REQUIRE(fs::exists(file));

  std::string text;
  {
    std::ifstream in(file);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto pos = text.find("-504");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "-503");
  std::ofstream(file) << text;
  CHECK_FALSE(cache.load("E6", 10, 1).has_value());
  CHECK(cache.get_or_compute("E6", 10, 1, compute) == first);
  CHECK(computed == 2);

  std::ofstream(file) << "{not json";
  CHECK(cache.get_or_compute("E6", 10, 1, compute) == first);
  CHECK(computed == 3);
  CHECK(cache.load("E6", 10, 1).has_value());
  CHECK_FALSE(cache.load("E6", 10, 2).has_value());
  fs::remove_all(dir);
}

TEST_CASE("cache directory resolution") {
  CHECK(io::cache_dir("/explicit") == fs::path("/explicit"));
  setenv("E8LP_CACHE_DIR", "/from-env", 1);
  CHECK(io::cache_dir("") == fs::path("/from-env"));
  unsetenv("E8LP_CACHE_DIR");
  CHECK(io::cache_dir("") == fs::path(".e8lp-cache"));
}

TEST_CASE("job configuration validation") {
  const JobConfig c = JobConfig::from_json({{"command", "lp"}, {"action", "bound"}, {"dim", 3}});
  CHECK(c.command == Command::lp);
  CHECK(c.dim == 3);
  CHECK(JobConfig::from_json(c.to_json()).to_json() == c.to_json());

  CHECK_THROWS_AS(JobConfig::from_json({{"command", "lp"}, {"action", "bound"}, {"dimension", 3}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json({{"precision", 32}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json({{"series_order", 4}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json({{"precision", "high"}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json({{"command", "plot"}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json({{"command", "magic"}, {"action", "bound"}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json({{"format", "xml"}}), ConfigError);
  CHECK_THROWS_AS(JobConfig::from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(harness::run(job(Command::lattice, "info", "d4")), ConfigError);
}

TEST_CASE("dimension lists") {
  CHECK(harness::parse_dims("1..4") == std::vector<int>{1, 2, 3, 4});
  CHECK(harness::parse_dims("1,2,8") == std::vector<int>{1, 2, 8});
  CHECK(harness::parse_dims("3..5,8") == std::vector<int>{3, 4, 5, 8});
  CHECK(harness::parse_dims("1..36").size() == 36);
  for (const char* bad : {"", "0", "37", "5..3", "a", "1..x", "2.5"}) CHECK_THROWS_AS(harness::parse_dims(bad), ConfigError);
}

TEST_CASE("comparison against the reference tables") {
  const auto d = harness::compare_to_reference({{8, 0.2536710465}, {2, 0.9069}, {3, 0.7797}}, 2);
  REQUIRE(d.rows.size() == 3);
  CHECK_FALSE(d.hard_failure);
  for (const auto& row : d.rows) CHECK(std::abs(row.relative_deviation) < 0.005);

  const auto below = harness::compare_to_reference({{3, 0.7}}, 1);
  CHECK(below.hard_failure);
  CHECK(below.rows[0].below_record);
  CHECK(below.to_json()["hard_failure"] == true);
  CHECK_THROWS(harness::compare_to_reference({}, 3));
}

TEST_CASE("lattice info for E8") {
  const auto r = harness::run(job(Command::lattice, "info", "e8"));
  CHECK(r.exit_code == 0);
  CHECK(r.report["covolume"].get<std::string>().rfind("1", 0) == 0);
  CHECK(r.report["min_length"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.report["kissing"] == 240);
  CHECK(r.report["density"].get<double>() == doctest::Approx(0.253669507).epsilon(1e-9));
  CHECK(r.report["unimodular"] == true);
}

TEST_CASE("reports are deterministic apart from the timestamp") {
  const fs::path dir = scratch_dir("determinism");
  JobConfig c = job(Command::forms, "print", "psi");
  c.order = 12;
  c.cache_dir = dir.string();
  const auto cold = harness::run(c);
  const auto warm = harness::run(c);
  CHECK(cold.report.dump() == warm.report.dump());
  auto a = harness::stamp(cold.report);
  CHECK(a.contains("timestamp"));
  a.erase("timestamp");
  CHECK(a == cold.report);

  JobConfig l = job(Command::lp, "bound");
  l.dim = 2;
  CHECK(harness::run(l).report.dump() == harness::run(l).report.dump());
  fs::remove_all(dir);
}

TEST_CASE("emit writes JSON or CSV to a file") {
  const fs::path dir = scratch_dir("emit");
  fs::create_directories(dir);
  JobConfig c = job(Command::lattice, "theta", "z2");
  c.max_norm = 4;
  c.format = "csv";
  c.output = (dir / "theta.csv").string();
  harness::emit(c, harness::run(c));
  std::ifstream in(c.output);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "norm,count");
  std::getline(in, line);
  CHECK(line == "0,1");
  std::getline(in, line);
  CHECK(line == "1,4");

  c.format = "json";
  c.output = (dir / "theta.json").string();
  harness::emit(c, harness::run(c));
  std::ifstream jin(c.output);
  const json doc = json::parse(jin);
  CHECK(doc.contains("timestamp"));
  CHECK(doc["lattice"] == "z2");

  JobConfig info = job(Command::lattice, "info", "e8");
  info.format = "csv";
  CHECK_THROWS_AS(harness::emit(info, harness::run(info)), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("bad translations are usage errors") {
  JobConfig c = job(Command::lattice, "poisson", "z2");
  c.translation = "0.1,0.2,0.3";
  CHECK_THROWS_AS(harness::run(c), ConfigError);
  c.translation = "0.1,abc";
  CHECK_THROWS_AS(harness::run(c), ConfigError);
  c.translation = "0.1,0.2";
  const auto r = harness::run(c);
  CHECK(r.exit_code == 0);
  CHECK(r.report["passed"] == true);
}
