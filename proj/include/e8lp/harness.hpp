#pragma once

// Job configuration, dispatch to the modules, comparison against the reference
// tables, and the end-to-end reproduction pipeline.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace e8lp::harness {

using nlohmann::json;

enum class Command { lattice, forms, magic, lp, reproduce };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct JobConfig {
  Command command = Command::reproduce;
  std::string action;  // e.g. "info", "print", "eval", "bound"; empty for reproduce
  std::string target;  // lattice or series name

  unsigned precision = 200;
  int series_order = 128;
  std::string cache_dir;
  std::string output = "-";
  std::string format = "json";

  // lattice
  int max_norm = 20;
  double radius = 6.0;
  std::string translation;
  // forms
  int order = 20;
  std::string points;
  // magic
  double r = 0;
  bool hat = false;
  int kmax = 6;
  int grid = 1000;
  int f_points = 500;
  // lp
  int dim = 8;
  int degree = 0;  // 0: default for the dimension
  double tol = 1e-6;
  std::string dims = "1..36";
  // reproduce
  bool quick = false;

  /// Throws ConfigError on unknown keys, wrong types or out-of-range values.
  static JobConfig from_json(const json& j);
  json to_json() const;
  void validate() const;
};

struct RunResult {
  int exit_code = 0;  // 0 success, 1 check failure or error
  json report;
  std::string csv;  // tabular view when the command has one
};

/// Dispatches to the module operations. Errors inside a module become exit code 1
/// with {"error": kind, "message"} in the report; ConfigError propagates.
RunResult run(const JobConfig& config);

/// Report with a "timestamp" field added; everything else is a pure function of the config.
json stamp(json report);

struct DeviationRow {
  int n = 0;
  double computed = 0;
  double reference = 0;
  double record = 0;
  double relative_deviation = 0;
  bool below_record = false;
};

struct DiffReport {
  int table = 2;
  std::vector<DeviationRow> rows;
  bool hard_failure = false;  // some computed bound lies below a record density
  json to_json() const;
};

/// Relative deviation of computed values from reference::table1() (records, table = 1)
/// or reference::table2() (LP bounds, table = 2).
DiffReport compare_to_reference(const std::map<int, double>& results, int table);

/// "1..36", "1,2,8" or "3..5,8".
std::vector<int> parse_dims(const std::string& text);

/// Writes the report (JSON, or CSV when requested) to config.output.
void emit(const JobConfig& config, const RunResult& result);

}  // namespace e8lp::harness
