#pragma once

// Batch experiments behind the command-line tool: configuration, sweeps over
// sizes, result tables and their CSV / JSON serialization.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "powerwalk/scaling.hpp"

namespace powerwalk {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double phase = 1e-9;
  double projection = 1e-9;
  double component = 1e-9;
  double unitarity = 1e-12;
  double trajectory = 1e-9;
  double identity = 1e-9;
  double discriminant = 1e-10;
  double szegedy_phase = 1e-9;
  double isometry = 1e-12;
  double gap_slack = 0.05;
};

struct ExperimentConfig {
  std::string command;
  std::vector<int> sizes;
  std::string t_schedule = "fixed";  // fixed | log-n | sweep
  int t = 1;
  double t_scale = 1.0;              // c in nearest_odd(c ln N)
  std::string delta_policy = "fixed";  // fixed | optimal_QO | balanced | original_tulsi
  double delta = 0.0;
  int marked_x = 0;
  int marked_y = 0;
  std::string rounding = "floor";  // floor | nearest
  double amp_constant = 1.0;
  double amp_threshold = 1.0 / 3.0;
  std::string format = "csv";  // csv | json
  std::string out;             // empty: standard output
  std::uint64_t seed = 1;
  std::int64_t budget = 4096;
  std::string chain = "random";  // cycle | complete | lazy-cycle | lazy-complete | random
  std::string chain_file;
  int chain_count = 20;
  std::vector<int> k_values{1, 2, 3};
  std::int64_t per_step_queries = 1;
  std::vector<double> gaps{0.5, 0.1, 0.01};
  Tolerances tol;
};

const std::vector<std::string>& command_names();

/// Sizes used when none are given.
std::vector<int> default_sizes(const std::string& command);

/// Checks ranges and enumerations, sorts and deduplicates list fields, and
/// fills default sizes. Throws ConfigError.
void normalize(ExperimentConfig& config);

/// Every field, keys sorted, two-space indentation.
std::string canonical_json(const ExperimentConfig& config);
ExperimentConfig parse_config_json(const std::string& text);

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ColumnDoc {
  std::string name;
  std::string description;
};

/// Output columns of a command, in order.
const std::vector<ColumnDoc>& column_docs(const std::string& command);

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  Table table;
  std::vector<CheckLine> checks;
  std::vector<std::string> warnings;
  std::vector<ScalingReport> scaling;

  bool passed() const;
};

/// Runs the configured command. Throws ConfigError or BudgetExceeded.
Report run_experiment(const ExperimentConfig& config);

/// Header comment `# powerwalk v1`, column names, one line per row.
std::string to_csv(const Table& table);
/// Array of flat records keyed by column name.
std::string to_json(const Table& table);

/// Checks, warnings and scaling summaries as text lines.
std::string format_summary(const Report& report);

}  // namespace powerwalk
