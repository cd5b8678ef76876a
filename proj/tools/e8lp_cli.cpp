#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "e8lp/errors.hpp"
#include "e8lp/harness.hpp"

using e8lp::harness::Command;
using e8lp::harness::JobConfig;

namespace {

// Values given on the command line override those from --config.
struct Overrides {
  std::vector<std::function<void(JobConfig&)>> apply;

  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T JobConfig::*field, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    apply.push_back([opt, value, field](JobConfig& c) {
      if (opt->count()) c.*field = *value;
    });
    return opt;
  }

  void add_flag(CLI::App* app, const std::string& flag, bool JobConfig::*field, const std::string& help) {
    CLI::Option* opt = app->add_flag(flag, help);
    apply.push_back([opt, field](JobConfig& c) {
      if (opt->count()) c.*field = true;
    });
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E8 magic function and linear programming bounds for sphere packing"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  std::string config_path;
  app.add_option("--config", config_path, "JSON job configuration")->check(CLI::ExistingFile);
  o.add(&app, "--precision", &JobConfig::precision, "working precision in bits");
  o.add(&app, "--series-order", &JobConfig::series_order, "q-series truncation order");
  o.add(&app, "--cache-dir", &JobConfig::cache_dir, "series cache directory (default $E8LP_CACHE_DIR)");
  o.add(&app, "--format", &JobConfig::format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  o.add(&app, "--out", &JobConfig::output, "output file, - for stdout");

  std::map<CLI::App*, std::pair<Command, std::string>> leaves;
  auto leaf = [&](CLI::App* parent, Command cmd, const std::string& action, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(action, help);
    leaves[sub] = {cmd, action};
    return sub;
  };

  CLI::App* lattice = app.add_subcommand("lattice", "lattice invariants, theta counts and Poisson checks");
  lattice->require_subcommand(1)->fallthrough();
  for (const auto& [action, help] : std::vector<std::pair<std::string, std::string>>{
           {"info", "Gram data, covolume, kissing number and density"},
           {"theta", "vector counts by squared length"},
           {"poisson", "Poisson summation residual for a Gaussian"}}) {
    CLI::App* sub = leaf(lattice, Command::lattice, action, help);
    o.add(sub, "name", &JobConfig::target, "e8, leech or zN")->required();
    if (action == "theta") o.add(sub, "--max-norm", &JobConfig::max_norm, "largest squared length");
    if (action == "poisson") {
      o.add(sub, "--radius", &JobConfig::radius, "truncation radius");
      o.add(sub, "--translation", &JobConfig::translation, "comma-separated shift vector");
    }
  }

  CLI::App* forms = app.add_subcommand("forms", "q-series of modular forms");
  forms->require_subcommand(1)->fallthrough();
  CLI::App* print = leaf(forms, Command::forms, "print", "exact q-expansion coefficients");
  o.add(print, "name", &JobConfig::target, "series name")->required();
  o.add(print, "--order", &JobConfig::order, "number of terms");
  CLI::App* verify = leaf(forms, Command::forms, "verify", "modular identities and functional equations");
  o.add(verify, "--order", &JobConfig::order, "number of exact terms");
  o.add(verify, "--points", &JobConfig::points, "sample points such as \"2i,3i/2\"");

  CLI::App* magic = app.add_subcommand("magic", "the eight-dimensional magic function");
  magic->require_subcommand(1)->fallthrough();
  CLI::App* eval = leaf(magic, Command::magic, "eval", "f(r) or its Fourier transform");
  o.add(eval, "--r", &JobConfig::r, "radius")->required();
  o.add_flag(eval, "--hat", &JobConfig::hat, "evaluate the Fourier transform");
  CLI::App* roots = leaf(magic, Command::magic, "roots", "values at the radii sqrt(2k)");
  o.add(roots, "--kmax", &JobConfig::kmax, "largest k");
  leaf(magic, Command::magic, "taylor", "Taylor coefficients at the origin");
  CLI::App* signs = leaf(magic, Command::magic, "signs", "sign conditions on sampled grids");
  o.add(signs, "--grid", &JobConfig::grid, "points for the integrand checks");
  o.add(signs, "--f-points", &JobConfig::f_points, "points for the f and f_hat checks");
  CLI::App* certify = leaf(magic, Command::magic, "certify", "density bound certificate in dimension 8");
  o.add(certify, "--grid", &JobConfig::grid, "points for the integrand checks");
  o.add(certify, "--f-points", &JobConfig::f_points, "points for the f and f_hat checks");

  CLI::App* lp = app.add_subcommand("lp", "linear programming bounds");
  lp->require_subcommand(1)->fallthrough();
  CLI::App* bound = leaf(lp, Command::lp, "bound", "optimized bound in one dimension");
  o.add(bound, "--dim", &JobConfig::dim, "dimension");
  o.add(bound, "--degree", &JobConfig::degree, "polynomial degree, 0 for the default");
  o.add(bound, "--tol", &JobConfig::tol, "relative tolerance on r");
  CLI::App* sweep = leaf(lp, Command::lp, "sweep", "bounds over a range of dimensions");
  o.add(sweep, "--dims", &JobConfig::dims, "e.g. 1..36 or 1,2,8");
  o.add(sweep, "--degree", &JobConfig::degree, "polynomial degree, 0 for the default");
  o.add(sweep, "--tol", &JobConfig::tol, "relative tolerance on r");

  CLI::App* reproduce = app.add_subcommand("reproduce", "end-to-end check of all modules");
  leaves[reproduce] = {Command::reproduce, ""};
  o.add_flag(reproduce, "--quick", &JobConfig::quick, "small subset of checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    JobConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw e8lp::ConfigError(std::string("cannot parse ") + config_path + ": " + e.what());
      }
      config = JobConfig::from_json(j);
    }
    for (const auto& [sub, job] : leaves)
      if (sub->parsed()) {
        config.command = job.first;
        config.action = job.second;
      }
    for (const auto& f : o.apply) f(config);
    config.validate();
    const auto result = e8lp::harness::run(config);
    e8lp::harness::emit(config, result);
    return result.exit_code;
  } catch (const e8lp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
