#include "e8lp/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "e8lp/errors.hpp"
#include "e8lp/forms.hpp"
#include "e8lp/lattice.hpp"
#include "e8lp/lp_bounds.hpp"
#include "e8lp/magic.hpp"
#include "e8lp/reference.hpp"
#include "e8lp/serialize.hpp"

namespace e8lp::harness {

namespace mp = boost::multiprecision;

namespace {

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> t{{"lattice", Command::lattice},
                                                {"forms", Command::forms},
                                                {"magic", Command::magic},
                                                {"lp", Command::lp},
                                                {"reproduce", Command::reproduce}};
  return t;
}

const std::map<Command, std::set<std::string>>& action_table() {
  static const std::map<Command, std::set<std::string>> t{
      {Command::lattice, {"info", "theta", "poisson"}},
      {Command::forms, {"print", "verify"}},
      {Command::magic, {"eval", "roots", "taylor", "signs", "certify"}},
      {Command::lp, {"bound", "sweep"}},
      {Command::reproduce, {""}}};
  return t;
}

std::string fmt(const Real& x, int digits = 30) { return to_decimal(x, digits); }

json error_report(const Error& e) { return {{"error", e.kind()}, {"message", e.what()}}; }

// ---- lattice ------------------------------------------------------------

struct NamedLattice {
  std::string name;
  lattice::LatticeBasis basis;
};

NamedLattice lattice_by_name(const std::string& name, unsigned bits) {
  if (name == "e8") return {name, lattice::basis_from_gram(lattice::e8_gram(), bits)};
  if (name.size() > 1 && name[0] == 'z') {
    int n = 0;
    try {
      n = std::stoi(name.substr(1));
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1 && n <= 24) return {name, lattice::integer_lattice(n, bits)};
  }
  throw ConfigError("unknown lattice '" + name + "' (expected e8, leech or zN)");
}

json lattice_info(const JobConfig& c) {
  if (c.target == "leech") {
    // No basis is built; the data come from the theta series (7/12)E4³ + (5/12)E6².
    const forms::QSeries theta = forms::leech_theta(3);
    const double density = lattice::packing_density(24, 2.0, 1.0).density;
    return {{"lattice", "leech"},
            {"n", 24},
            {"covolume", "1"},
            {"min_norm", io::rational_to_json(Rational(4))},
            {"min_length", 2.0},
            {"kissing", theta.coeff(2).str()},
            {"norm_2_vectors", theta.coeff(1).str()},
            {"density", density},
            {"source", "theta series"}};
  }
  const NamedLattice l = lattice_by_name(c.target, c.precision);
  const auto& gram = *l.basis.source_gram;
  const lattice::ThetaCounts shells = lattice::enumerate_vectors(l.basis, Rational(4));
  const auto min_norm = shells.minimal_norm();
  if (!min_norm) throw ConfigError("lattice has no vectors of norm at most 4");
  PrecisionScope scope(c.precision);
  const Real cov = lattice::covolume(l.basis);
  const double min_len = std::sqrt(min_norm->convert_to<double>());
  json poly = json::array();
  for (const auto& q : lattice::characteristic_polynomial(gram)) poly.push_back(io::rational_to_json(q));
  return {{"lattice", l.name},
          {"n", l.basis.dim()},
          {"determinant", io::rational_to_json(gram.determinant())},
          {"covolume", fmt(cov)},
          {"min_norm", io::rational_to_json(*min_norm)},
          {"min_length", min_len},
          {"kissing", shells.count(*min_norm)},
          {"density", lattice::packing_density(l.basis.dim(), min_len, cov.convert_to<double>()).density},
          {"even", gram.is_even()},
          {"unimodular", gram.determinant() == 1},
          {"characteristic_polynomial", poly},
          {"gram", io::gram_to_json(gram)}};
}

RunResult lattice_theta(const JobConfig& c) {
  const NamedLattice l = lattice_by_name(c.target, c.precision);
  const lattice::ThetaCounts t = lattice::enumerate_vectors(l.basis, Rational(c.max_norm));
  RunResult out;
  out.report = {{"lattice", l.name}, {"theta", io::theta_counts_to_json(t)}};
  std::ostringstream csv;
  csv << "norm,count\n";
  for (const auto& [norm, count] : t.counts) csv << to_string(norm) << "," << count << "\n";
  out.csv = csv.str();
  if (c.target == "e8") {
    bool ok = true;
    for (int m = 1; 2 * m <= c.max_norm; ++m)
      ok = ok && Integer(t.count(Rational(2 * m))) == 240 * forms::divisor_sigma(3, m);
    out.report["matches_240_sigma3"] = ok;
    out.exit_code = ok ? 0 : 1;
  }
  return out;
}

std::vector<Real> parse_translation(const std::string& csv) {
  std::vector<Real> t;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) {
      try {
        t.emplace_back(item);
      } catch (const std::exception&) {
        throw ConfigError("bad translation coordinate '" + item + "'");
      }
    }
  return t;
}

RunResult lattice_poisson(const JobConfig& c) {
  const NamedLattice l = lattice_by_name(c.target, c.precision);
  PrecisionScope scope(c.precision);
  const std::vector<Real> t = parse_translation(c.translation);
  if (!t.empty() && static_cast<int>(t.size()) != l.basis.dim())
    throw ConfigError("translation needs " + std::to_string(l.basis.dim()) + " coordinates");
  const Real residual = lattice::poisson_verify(l.basis, t, c.radius, c.precision);
  RunResult out;
  out.report = {{"lattice", l.name}, {"radius", c.radius}, {"translation", c.translation},
                {"residual", fmt(residual, 6)}, {"passed", residual < Real("1e-10")}};
  out.exit_code = residual < Real("1e-10") ? 0 : 1;
  return out;
}

// ---- forms --------------------------------------------------------------

struct SeriesRecipe {
  int nome_div;
  std::function<forms::QSeries(int)> make;
};

const std::map<std::string, SeriesRecipe>& series_table() {
  static const std::map<std::string, SeriesRecipe> t{
      {"E2", {1, [](int n) { return forms::eisenstein_qseries(2, n); }}},
      {"E4", {1, [](int n) { return forms::eisenstein_qseries(4, n); }}},
      {"E6", {1, [](int n) { return forms::eisenstein_qseries(6, n); }}},
      {"delta", {1, forms::discriminant_like}},
      {"leech", {1, forms::leech_theta}},
      {"theta_z", {2, forms::theta_z_qseries}},
      {"theta3_4", {2, forms::theta3_pow4}},
      {"theta4_4", {2, forms::theta4_pow4}},
      {"theta2_4", {2, forms::theta2_pow4}},
      {"phi", {1, [](int n) { return forms::phi_quasiform(n).collapse(); }}},
      {"phi0", {1, [](int n) { return forms::phi_quasiform(n).parts[0]; }}},
      {"phi1", {1, [](int n) { return forms::phi_quasiform(n).parts[1]; }}},
      {"phi2", {1, [](int n) { return forms::phi_quasiform(n).parts[2]; }}},
      {"psi", {2, forms::psi_qseries}},
      {"psi_tilde", {2, forms::psi_tilde_qseries}},
  };
  return t;
}

RunResult forms_print(const JobConfig& c) {
  const auto it = series_table().find(c.target);
  if (it == series_table().end()) {
    std::string names;
    for (const auto& [k, v] : series_table()) names += (names.empty() ? "" : ", ") + k;
    throw ConfigError("unknown series '" + c.target + "' (one of " + names + ")");
  }
  const io::SeriesCache cache(io::cache_dir(c.cache_dir));
  const forms::QSeries s =
      cache.get_or_compute(c.target, c.order, it->second.nome_div, [&] { return it->second.make(c.order); });
  RunResult out;
  out.report = {{"name", c.target}, {"series", io::qseries_to_json(s)}};
  std::ostringstream csv;
  csv << "exponent,coefficient\n";
  for (int e = s.min_exp(); e <= s.order(); ++e) csv << e << "," << to_string(s.coeff(e)) << "\n";
  out.csv = csv.str();
  return out;
}

json identity_json(const forms::IdentityReport& r) {
  json checks = json::array();
  for (const auto& ch : r.checks)
    checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"residual", ch.residual}, {"detail", ch.detail}});
  return {{"checks", checks}, {"passed", r.all_passed()}};
}

RunResult forms_verify(const JobConfig& c) {
  const auto points = c.points.empty() ? forms::default_sample_points() : forms::parse_points(c.points);
  const forms::IdentityReport r = forms::verify_identities(c.order, points, std::max(c.precision, 128u));
  RunResult out;
  out.report = identity_json(r);
  out.report["order"] = c.order;
  out.exit_code = r.all_passed() ? 0 : 1;
  return out;
}

// ---- magic --------------------------------------------------------------

json check_report_json(const magic::CheckReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"name", e.name}, {"passed", e.passed}, {"value", e.value}, {"detail", e.detail}});
  return entries;
}

std::string check_csv(const magic::CheckReport& r) {
  std::ostringstream csv;
  csv << "name,passed,value\n";
  for (const auto& e : r.entries) csv << '"' << e.name << "\"," << (e.passed ? 1 : 0) << "," << e.value << "\n";
  return csv.str();
}

RunResult magic_eval(const JobConfig& c) {
  const magic::MagicFunction& m = magic::shared_magic(c.precision, c.series_order);
  PrecisionScope scope(c.precision);
  const magic::MagicValue v = c.hat ? m.f_hat(Real(c.r)) : m.f(Real(c.r));
  RunResult out;
  out.report = {{"function", c.hat ? "f_hat" : "f"},
                {"r", fmt(v.r, 20)},
                {"value", fmt(v.value)},
                {"err_estimate", fmt(v.err_estimate, 6)}};
  out.csv = "r,value,err_estimate\n" + fmt(v.r, 20) + "," + fmt(v.value) + "," + fmt(v.err_estimate, 6) + "\n";
  return out;
}

RunResult magic_roots(const JobConfig& c) {
  const magic::CheckReport r = magic::verify_roots(c.kmax, 1e-8, c.precision);
  RunResult out;
  out.report = {{"kmax", c.kmax}, {"checks", check_report_json(r)}, {"passed", r.all_passed()}};
  out.csv = check_csv(r);
  out.exit_code = r.all_passed() ? 0 : 1;
  return out;
}

RunResult magic_taylor(const JobConfig& c) {
  const magic::MagicFunction& m = magic::shared_magic(c.precision, c.series_order);
  PrecisionScope scope(c.precision);
  const auto tf = m.taylor(magic::Component::f);
  const auto th = m.taylor(magic::Component::f_hat);
  const auto nf = m.taylor_numeric(magic::Component::f);
  const auto nh = m.taylor_numeric(magic::Component::f_hat);
  const bool ok = mp::abs(tf.c2 + Real(27) / 10) < Real("1e-6") && mp::abs(th.c2 + Real(3) / 2) < Real("1e-6") &&
                  mp::abs(nf.c2 - tf.c2) < Real("1e-6") && mp::abs(nh.c2 - th.c2) < Real("1e-6");
  RunResult out;
  out.report = {{"f", {{"c0", fmt(tf.c0)}, {"c2", fmt(tf.c2)}, {"c2_numeric", fmt(nf.c2, 15)}, {"expected_c2", "-27/10"}}},
                {"f_hat", {{"c0", fmt(th.c0)}, {"c2", fmt(th.c2)}, {"c2_numeric", fmt(nh.c2, 15)}, {"expected_c2", "-3/2"}}},
                {"passed", ok}};
  out.exit_code = ok ? 0 : 1;
  return out;
}

RunResult magic_signs(const JobConfig& c) {
  const magic::CheckReport r = magic::verify_signs(c.grid, c.f_points, 1e-8, c.precision);
  RunResult out;
  out.report = {{"grid", c.grid}, {"f_points", c.f_points}, {"checks", check_report_json(r)}, {"passed", r.all_passed()}};
  out.csv = check_csv(r);
  out.exit_code = r.all_passed() ? 0 : 1;
  return out;
}

RunResult magic_certify(const JobConfig& c) {
  const magic::CheckReport roots = magic::verify_roots(c.kmax, 1e-8, c.precision);
  const magic::CheckReport signs = magic::verify_signs(c.grid, c.f_points, 1e-8, c.precision);
  json checks = check_report_json(roots);
  for (auto& e : check_report_json(signs)) checks.push_back(e);
  RunResult out;
  try {
    const lp::BoundCertificate cert = magic::sphere_packing_certificate(&roots, &signs, c.precision);
    const double bound = lp::bound_from_certificate(cert);
    out.report = {{"dimension", 8},
                  {"r", cert.r},
                  {"bound", bound},
                  {"e8_density", cert.reference_density},
                  {"checks", checks},
                  {"certificate", io::certificate_to_json(cert)},
                  {"passed", std::abs(bound - cert.reference_density) < 1e-9}};
    out.exit_code = out.report["passed"].get<bool>() ? 0 : 1;
  } catch (const ChecksNotRun& e) {
    out.report = error_report(e);
    out.report["checks"] = checks;
    out.exit_code = 1;
  }
  return out;
}

// ---- lp -----------------------------------------------------------------

struct LpRow {
  int n = 0;
  lp::OptimizeResult result;
};

LpRow lp_job(int n, int degree, double tol) {
  lp::OptimizeOptions o;
  o.tol = tol;
  return {n, lp::optimize_r(n, degree > 0 ? degree : lp::default_degree(n), o)};
}

json lp_row_json(const LpRow& row) {
  const auto& cert = row.result.certificate;
  const double reference = reference::lp_bound(row.n);
  return {{"n", row.n},
          {"degree", cert.degree},
          {"r_star", row.result.r_star},
          {"r", cert.r},
          {"r_squared", cert.r * cert.r},
          {"bound", cert.density_bound},
          {"table2_reference", reference},
          {"relative_deviation", cert.density_bound / reference - 1},
          {"record", reference::record_density(row.n)},
          {"margins", {{"f", cert.margin_f}, {"f_hat", cert.margin_fhat}, {"tolerance", cert.tolerance}}},
          {"valid", cert.valid()},
          {"lp_solves", row.result.lp_solves}};
}

// LP jobs use long double only, so they can run on worker threads; results are
// joined in dimension order.
std::vector<LpRow> run_lp_jobs(const std::vector<int>& dims, int degree, double tol) {
  std::vector<std::future<LpRow>> jobs;
  for (int n : dims) jobs.push_back(std::async(std::launch::async, lp_job, n, degree, tol));
  std::vector<LpRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

RunResult lp_bound_cmd(const JobConfig& c) {
  const LpRow row = lp_job(c.dim, c.degree, c.tol);
  RunResult out;
  out.report = lp_row_json(row);
  const auto diff = compare_to_reference({{row.n, row.result.certificate.density_bound}}, 1);
  out.exit_code = row.result.certificate.valid() && !diff.hard_failure ? 0 : 1;
  std::ostringstream csv;
  csv << std::setprecision(12) << "n,degree,r_squared,bound,table2_reference\n"
      << row.n << "," << row.result.certificate.degree << "," << row.result.certificate.r * row.result.certificate.r
      << "," << row.result.certificate.density_bound << "," << reference::lp_bound(row.n) << "\n";
  out.csv = csv.str();
  return out;
}

RunResult lp_sweep(const JobConfig& c) {
  const std::vector<int> dims = parse_dims(c.dims);
  const auto rows = run_lp_jobs(dims, c.degree, c.tol);
  std::map<int, double> bounds;
  json arr = json::array();
  std::ostringstream csv;
  csv << std::setprecision(12) << "dimension,log_bound,log_record\n";
  for (const auto& row : rows) {
    bounds[row.n] = row.result.certificate.density_bound;
    arr.push_back(lp_row_json(row));
    csv << row.n << "," << std::log(row.result.certificate.density_bound) << ","
        << std::log(reference::record_density(row.n)) << "\n";
  }
  const DiffReport diff = compare_to_reference(bounds, 2);
  RunResult out;
  out.report = {{"rows", arr}, {"comparison", diff.to_json()}, {"records", compare_to_reference(bounds, 1).to_json()}};
  out.csv = csv.str();
  bool valid = true;
  for (const auto& row : rows) valid = valid && row.result.certificate.valid();
  out.exit_code = valid && !diff.hard_failure ? 0 : 1;
  return out;
}

// ---- reproduce ----------------------------------------------------------

RunResult reproduce(const JobConfig& c) {
  const std::vector<int> lp_dims = c.quick ? std::vector<int>{1, 2, 8} : parse_dims("1..24");
  // Started first so they overlap with the multiprecision steps below.
  auto lp_future = std::async(std::launch::async, run_lp_jobs, lp_dims, c.degree, c.tol);

  json steps = json::array();
  bool ok = true;
  auto step = [&](const std::string& name, const std::function<RunResult()>& f) {
    RunResult r;
    try {
      r = f();
    } catch (const Error& e) {
      r.report = error_report(e);
      r.exit_code = 1;
    }
    ok = ok && r.exit_code == 0;
    steps.push_back({{"step", name}, {"passed", r.exit_code == 0}, {"report", r.report}});
  };

  JobConfig sub = c;
  step("lattice e8", [&] {
    sub.target = "e8";
    RunResult r;
    r.report = lattice_info(sub);
    const bool pass = r.report["determinant"] == io::rational_to_json(Rational(1)) && r.report["kissing"] == 240 &&
                      std::abs(r.report["density"].get<double>() - reference::record_density(8)) < 1e-9;
    sub.max_norm = 20;
    const RunResult theta = lattice_theta(sub);
    r.report["matches_240_sigma3"] = theta.report["matches_240_sigma3"];
    r.exit_code = pass && theta.exit_code == 0 ? 0 : 1;
    return r;
  });
  step("forms identities", [&] {
    sub.order = 20;
    sub.points.clear();
    return forms_verify(sub);
  });
  step("magic roots", [&] {
    sub.kmax = c.quick ? 3 : 6;
    return magic_roots(sub);
  });
  if (!c.quick) {
    step("magic taylor", [&] { return magic_taylor(sub); });
    step("magic certify", [&] {
      sub.kmax = 6;
      return magic_certify(sub);
    });
  }
  step("lp bounds", [&] {
    const auto rows = lp_future.get();
    std::map<int, double> bounds;
    json arr = json::array();
    bool valid = true;
    for (const auto& row : rows) {
      bounds[row.n] = row.result.certificate.density_bound;
      arr.push_back(lp_row_json(row));
      valid = valid && row.result.certificate.valid();
    }
    const DiffReport vs2 = compare_to_reference(bounds, 2);
    bool close = true;
    for (const auto& d : vs2.rows) close = close && std::abs(d.relative_deviation) < (d.n <= 12 ? 0.005 : 0.02);
    RunResult r;
    r.report = {{"rows", arr}, {"comparison", vs2.to_json()}};
    r.exit_code = valid && close && !vs2.hard_failure ? 0 : 1;
    return r;
  });
  RunResult out;
  out.report = {{"quick", c.quick}, {"steps", steps}, {"passed", ok}};
  out.exit_code = ok ? 0 : 1;
  return out;
}

void require_keys(const json& j) {
  static const std::set<std::string> known{"command", "action",  "target", "precision", "series_order", "cache_dir",
                                           "output",  "format",  "max_norm", "radius", "translation",  "order",
                                           "points",  "r",       "hat",    "kmax",      "grid",         "f_points",
                                           "dim",     "degree",  "tol",    "dims",      "quick"};
  if (!j.is_object()) throw ConfigError("job configuration must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown configuration key '" + k + "'");
}

}  // namespace

Command parse_command(const std::string& name) {
  const auto it = command_table().find(name);
  if (it == command_table().end()) throw ConfigError("unknown command '" + name + "'");
  return it->second;
}

std::string command_name(Command c) {
  for (const auto& [k, v] : command_table())
    if (v == c) return k;
  return "";
}

JobConfig JobConfig::from_json(const json& j) {
  require_keys(j);
  JobConfig c;
  try {
    if (j.contains("command")) c.command = parse_command(j["command"].get<std::string>());
    c.action = j.value("action", c.action);
    c.target = j.value("target", c.target);
    c.precision = j.value("precision", c.precision);
    c.series_order = j.value("series_order", c.series_order);
    c.cache_dir = j.value("cache_dir", c.cache_dir);
    c.output = j.value("output", c.output);
    c.format = j.value("format", c.format);
    c.max_norm = j.value("max_norm", c.max_norm);
    c.radius = j.value("radius", c.radius);
    c.translation = j.value("translation", c.translation);
    c.order = j.value("order", c.order);
    c.points = j.value("points", c.points);
    c.r = j.value("r", c.r);
    c.hat = j.value("hat", c.hat);
    c.kmax = j.value("kmax", c.kmax);
    c.grid = j.value("grid", c.grid);
    c.f_points = j.value("f_points", c.f_points);
    c.dim = j.value("dim", c.dim);
    c.degree = j.value("degree", c.degree);
    c.tol = j.value("tol", c.tol);
    c.dims = j.value("dims", c.dims);
    c.quick = j.value("quick", c.quick);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  c.validate();
  return c;
}

json JobConfig::to_json() const {
  return {{"command", command_name(command)}, {"action", action}, {"target", target}, {"precision", precision},
          {"series_order", series_order}, {"cache_dir", cache_dir}, {"output", output}, {"format", format},
          {"max_norm", max_norm}, {"radius", radius}, {"translation", translation}, {"order", order},
          {"points", points}, {"r", r}, {"hat", hat}, {"kmax", kmax}, {"grid", grid}, {"f_points", f_points},
          {"dim", dim}, {"degree", degree}, {"tol", tol}, {"dims", dims}, {"quick", quick}};
}

void JobConfig::validate() const {
  if (precision < 64) throw ConfigError("precision must be at least 64 bits");
  if (series_order < 8) throw ConfigError("series order must be at least 8");
  if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
  const auto& actions = action_table().at(command);
  if (!actions.count(action)) throw ConfigError("unknown action '" + action + "' for " + command_name(command));
  if (command == Command::lp && action == "bound" && (dim < 1 || dim > reference::kRows))
    throw ConfigError("dimension must be between 1 and 36");
  if (command == Command::lp && degree != 0 && degree < 12) throw ConfigError("degree must be at least 12");
  if (!(tol > 0)) throw ConfigError("tolerance must be positive");
  if (kmax < 2) throw ConfigError("kmax must be at least 2");
  if (grid < 2 || f_points < 2) throw ConfigError("grids need at least two points");
  if (r < 0) throw ConfigError("r must be nonnegative");
  if (max_norm < 0) throw ConfigError("max norm must be nonnegative");
  if (order < 2) throw ConfigError("order must be at least 2");
  if (command == Command::lp && action == "sweep") parse_dims(dims);
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v < 1 || v > reference::kRows) throw ConfigError("bad dimension '" + s + "' in '" + text + "'");
    return v;
  };
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
      continue;
    }
    const int a = num(part.substr(0, dots)), b = num(part.substr(dots + 2));
    if (a > b) throw ConfigError("empty range '" + part + "'");
    for (int n = a; n <= b; ++n) out.push_back(n);
  }
  if (out.empty()) throw ConfigError("no dimensions given");
  return out;
}

RunResult run(const JobConfig& config) {
  config.validate();
  try {
    switch (config.command) {
      case Command::lattice:
        if (config.action == "info") return RunResult{0, lattice_info(config), ""};
        if (config.action == "theta") return lattice_theta(config);
        return lattice_poisson(config);
      case Command::forms:
        if (config.action == "print") return forms_print(config);
        return forms_verify(config);
      case Command::magic:
        if (config.action == "eval") return magic_eval(config);
        if (config.action == "roots") return magic_roots(config);
        if (config.action == "taylor") return magic_taylor(config);
        if (config.action == "signs") return magic_signs(config);
        return magic_certify(config);
      case Command::lp:
        if (config.action == "bound") return lp_bound_cmd(config);
        return lp_sweep(config);
      case Command::reproduce:
        return reproduce(config);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    json report = error_report(e);
    report["command"] = command_name(config.command);
    report["action"] = config.action;
    return RunResult{1, report, ""};
  }
  return RunResult{};
}

json stamp(json report) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  report["timestamp"] = os.str();
  return report;
}

json DiffReport::to_json() const {
  json rows_json = json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"n", r.n},
                         {"computed", r.computed},
                         {"reference", r.reference},
                         {"record", r.record},
                         {"relative_deviation", r.relative_deviation},
                         {"below_record", r.below_record}});
  return {{"table", table}, {"rows", rows_json}, {"hard_failure", hard_failure}};
}

DiffReport compare_to_reference(const std::map<int, double>& results, int table) {
  if (table != 1 && table != 2) throw std::invalid_argument("table must be 1 or 2");
  DiffReport d;
  d.table = table;
  for (const auto& [n, value] : results) {
    DeviationRow row;
    row.n = n;
    row.computed = value;
    row.record = reference::record_density(n);
    row.reference = table == 1 ? row.record : reference::lp_bound(n);
    row.relative_deviation = value / row.reference - 1;
    row.below_record = value < row.record;
    d.hard_failure = d.hard_failure || row.below_record;
    d.rows.push_back(row);
  }
  return d;
}

void emit(const JobConfig& config, const RunResult& result) {
  std::string text;
  if (config.format == "csv") {
    if (result.csv.empty()) throw ConfigError("this command has no CSV view; use --format json");
    text = result.csv;
  } else {
    text = stamp(result.report).dump(2) + "\n";
  }
  if (config.output.empty() || config.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(config.output);
  if (!out) throw ConfigError("cannot write " + config.output);
  out << text;
}

}  // namespace e8lp::harness
