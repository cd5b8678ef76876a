#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "e8lp/errors.hpp"
#include "e8lp/harness.hpp"
#include "e8lp/lattice.hpp"
#include "e8lp/lp_bounds.hpp"
#include "e8lp/magic.hpp"
#include "e8lp/reference.hpp"
#include "e8lp/serialize.hpp"

namespace py = pybind11;
using namespace e8lp;

namespace {

// Rationals cross the boundary as (numerator, denominator) decimal strings.
std::pair<std::string, std::string> rational_pair(const Rational& q) {
  return {numerator(q).str(), denominator(q).str()};
}

std::string run_json(const std::string& config) {
  const auto j = nlohmann::json::parse(config);
  const auto result = harness::run(harness::JobConfig::from_json(j));
  return nlohmann::json{{"exit_code", result.exit_code}, {"report", result.report}, {"csv", result.csv}}.dump();
}

py::dict lp_bound(int n, int degree, double tol) {
  lp::OptimizeOptions o;
  o.tol = tol;
  const auto r = lp::optimize_r(n, degree > 0 ? degree : lp::default_degree(n), o);
  const auto& c = r.certificate;
  py::dict d;
  d["n"] = c.n;
  d["degree"] = c.degree;
  d["r"] = c.r;
  d["r_star"] = r.r_star;
  d["bound"] = c.density_bound;
  d["coeffs"] = c.coeffs;
  d["margin_f"] = c.margin_f;
  d["margin_fhat"] = c.margin_fhat;
  d["valid"] = c.valid();
  return d;
}

std::pair<std::string, std::string> magic_value(const std::string& r, bool hat, unsigned bits) {
  const auto& m = magic::shared_magic(bits, 128);
  PrecisionScope scope(bits);
  const auto v = hat ? m.f_hat(Real(r)) : m.f(Real(r));
  return {to_decimal(v.value, 40), to_decimal(v.err_estimate, 6)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "E8 lattice, modular forms, the magic function and LP bounds";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("run_json", &run_json, py::arg("config"), py::call_guard<py::gil_scoped_release>(),
        "Run a job from a JSON configuration; returns {exit_code, report, csv} as JSON text.");

  m.def("e8_gram", [] {
    const lattice::GramMatrix gram = lattice::e8_gram();
    std::vector<std::vector<long long>> g;
    for (const auto& row : gram.entries()) {
      g.emplace_back();
      for (const auto& e : row) g.back().push_back(numerator(e).convert_to<long long>());
    }
    return g;
  });
  m.def("characteristic_polynomial_e8", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& q : lattice::characteristic_polynomial(lattice::e8_gram())) out.push_back(rational_pair(q));
    return out;
  });
  m.def(
      "theta_counts",
      [](const std::string& name, int max_norm) {
        const lattice::LatticeBasis b =
            name == "e8" ? lattice::basis_from_gram(lattice::e8_gram())
                         : (name.size() > 1 && name[0] == 'z' ? lattice::integer_lattice(std::stoi(name.substr(1)))
                                                              : throw ConfigError("unknown lattice " + name));
        std::vector<std::tuple<std::string, std::string, std::uint64_t>> out;
        for (const auto& [norm, count] : lattice::enumerate_vectors(b, Rational(max_norm)).counts) {
          const auto [p, q] = rational_pair(norm);
          out.emplace_back(p, q, count);
        }
        return out;
      },
      py::arg("name"), py::arg("max_norm"));
  m.def(
      "packing_density",
      [](int n, double min_length, double covolume) { return lattice::packing_density(n, min_length, covolume).density; },
      py::arg("n"), py::arg("min_length"), py::arg("covolume") = 1.0);
  m.def("ball_volume", py::overload_cast<int, double>(&lattice::ball_volume), py::arg("n"), py::arg("r"));

  m.def("magic_value", &magic_value, py::arg("r"), py::arg("hat") = false, py::arg("bits") = 200,
        "f(r) or f_hat(r) as (value, error estimate) decimal strings; r is a decimal string.");

  m.def(
      "eigenbasis_values",
      [](int n, int degree, double r) {
        std::vector<double> out;
        for (auto v : lp::EigenBasis(n, degree).values(r)) out.push_back(static_cast<double>(v));
        return out;
      },
      py::arg("n"), py::arg("degree"), py::arg("r"));
  m.def("default_degree", &lp::default_degree, py::arg("n"));
  m.def("lp_bound", &lp_bound, py::arg("n"), py::arg("degree") = 0, py::arg("tol") = 1e-6);

  m.def("reference_tables", [] { return io::reference_tables_to_json().dump(); });
  m.def("record_density", &reference::record_density, py::arg("n"));
  m.def("table2_bound", &reference::lp_bound, py::arg("n"));
}
