#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "powerwalk/experiment.hpp"
#include "powerwalk/torus.hpp"

namespace {

using powerwalk::ExperimentConfig;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

using Override = std::function<void(ExperimentConfig&, const ExperimentConfig&)>;

struct Bound {
  CLI::Option* option;
  Override copy;
};

std::string columns_footer(const std::string& command) {
  std::ostringstream out;
  out << "Output columns (CSV header after '# powerwalk v1'; JSON keys are identical):\n";
  for (const auto& c : powerwalk::column_docs(command)) out << "  " << c.name << "  " << c.description << '\n';
  out << "Exit status: 0 all checks passed, 1 a check failed, 2 usage, configuration or budget error.";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw powerwalk::ConfigError("cannot read config file: " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

#define BIND(field) [](ExperimentConfig& dst, const ExperimentConfig& src) { dst.field = src.field; }

std::vector<Bound> add_options(CLI::App* sub, ExperimentConfig& cfg, std::vector<int>& marked) {
  std::vector<Bound> b;
  b.push_back({sub->add_option("--sizes", cfg.sizes, "Grid sides L (chain sizes N for szegedy), comma separated")
                   ->delimiter(','),
               BIND(sizes)});
  b.push_back({sub->add_option("--t", cfg.t, "Walk length for --t-schedule fixed")->capture_default_str(), BIND(t)});
  b.push_back({sub->add_option("--t-schedule", cfg.t_schedule, "fixed | log-n | sweep")
                   ->check(CLI::IsMember({"fixed", "log-n", "sweep"}))
                   ->capture_default_str(),
               BIND(t_schedule)});
  b.push_back({sub->add_option("--t-scale", cfg.t_scale, "c in t = nearest odd to c ln N")->capture_default_str(),
               BIND(t_scale)});
  b.push_back({sub->add_option("--delta", cfg.delta, "Ancilla angle for --delta-policy fixed")->capture_default_str(),
               BIND(delta)});
  b.push_back({sub->add_option("--delta-policy", cfg.delta_policy, "fixed | optimal_QO | balanced | original_tulsi")
                   ->check(CLI::IsMember({"fixed", "optimal_QO", "balanced", "original_tulsi"}))
                   ->capture_default_str(),
               BIND(delta_policy)});
  b.push_back({sub->add_option("--marked", marked, "Marked vertex x,y (reduced modulo L)")->delimiter(',')->expected(2),
               [](ExperimentConfig& dst, const ExperimentConfig& src) {
                 dst.marked_x = src.marked_x;
                 dst.marked_y = src.marked_y;
               }});
  b.push_back({sub->add_option("--rounding", cfg.rounding, "Iteration count rounding: floor | nearest")
                   ->check(CLI::IsMember({"floor", "nearest"}))
                   ->capture_default_str(),
               BIND(rounding)});
  b.push_back({sub->add_option("--amp-constant", cfg.amp_constant, "c in rounds = ceil(c / sqrt(p_s))")
                   ->capture_default_str(),
               BIND(amp_constant)});
  b.push_back({sub->add_option("--amp-threshold", cfg.amp_threshold, "No amplification when p_s reaches this value")
                   ->capture_default_str(),
               BIND(amp_threshold)});
  b.push_back({sub->add_option("--format", cfg.format, "csv | json")
                   ->check(CLI::IsMember({"csv", "json"}))
                   ->capture_default_str(),
               BIND(format)});
  b.push_back({sub->add_option("--out", cfg.out, "Output file (default: standard output)"), BIND(out)});
  b.push_back({sub->add_option("--seed", cfg.seed, "Seed for random chains")->capture_default_str(), BIND(seed)});
  b.push_back({sub->add_option("--budget", cfg.budget, "Dense dimension budget")->capture_default_str(), BIND(budget)});
  b.push_back({sub->add_option("--chain", cfg.chain, "cycle | complete | lazy-cycle | lazy-complete | random")
                   ->check(CLI::IsMember({"cycle", "complete", "lazy-cycle", "lazy-complete", "random"}))
                   ->capture_default_str(),
               BIND(chain)});
  b.push_back({sub->add_option("--chain-file", cfg.chain_file, "CSV file holding an N x N chain"), BIND(chain_file)});
  b.push_back({sub->add_option("--chains", cfg.chain_count, "Random chains per size")->capture_default_str(),
               BIND(chain_count)});
  b.push_back({sub->add_option("--k", cfg.k_values, "Szegedy step counts, comma separated")->delimiter(','),
               BIND(k_values)});
  b.push_back({sub->add_option("--per-step-queries", cfg.per_step_queries, "Queries Q per state preparation")
                   ->capture_default_str(),
               BIND(per_step_queries)});
  b.push_back({sub->add_option("--gaps", cfg.gaps, "Spectral gaps for the gap command, comma separated")
                   ->delimiter(','),
               BIND(gaps)});
  b.push_back({sub->add_option("--tol-phase", cfg.tol.phase, "Eigenphase tolerance")->capture_default_str(),
               BIND(tol.phase)});
  b.push_back({sub->add_option("--tol-projection", cfg.tol.projection, "Projection and overlap tolerance")
                   ->capture_default_str(),
               BIND(tol.projection)});
  b.push_back({sub->add_option("--tol-component", cfg.tol.component, "Path component tolerance")
                   ->capture_default_str(),
               BIND(tol.component)});
  b.push_back({sub->add_option("--tol-unitarity", cfg.tol.unitarity, "Unitarity tolerance")->capture_default_str(),
               BIND(tol.unitarity)});
  b.push_back({sub->add_option("--tol-trajectory", cfg.tol.trajectory, "Reduced vs full trajectory tolerance")
                   ->capture_default_str(),
               BIND(tol.trajectory)});
  b.push_back({sub->add_option("--tol-identity", cfg.tol.identity, "Relative tolerance of the S3 identity")
                   ->capture_default_str(),
               BIND(tol.identity)});
  b.push_back({sub->add_option("--tol-discriminant", cfg.tol.discriminant, "Discriminant tolerance")
                   ->capture_default_str(),
               BIND(tol.discriminant)});
  b.push_back({sub->add_option("--tol-szegedy-phase", cfg.tol.szegedy_phase, "Szegedy eigenphase tolerance")
                   ->capture_default_str(),
               BIND(tol.szegedy_phase)});
  b.push_back({sub->add_option("--tol-isometry", cfg.tol.isometry, "Isometry tolerance")->capture_default_str(),
               BIND(tol.isometry)});
  b.push_back({sub->add_option("--tol-gap-slack", cfg.tol.gap_slack, "Slack below 1 - 1/e for the gap command")
                   ->capture_default_str(),
               BIND(tol.gap_slack)});
  return b;
}

#undef BIND

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-step quantum walk search on the torus: spectral checks, search sweeps, "
               "controlled search, grid sums, Szegedy walks and gap powering."};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-spectrum", "Check the full walk spectrum and the reduced engine against dense simulation"},
      {"search", "Sweep sizes and report alpha, success probability and query counts"},
      {"tulsi", "Sweep the ancilla-controlled search"},
      {"sums", "Mode sums and their lower and upper bounds"},
      {"szegedy", "Szegedy k-step walks of symmetric chains"},
      {"gap", "Spectral gap after powering, g_t at t = ceil(1/g)"},
  };

  ExperimentConfig cli_cfg;
  std::vector<int> marked{0, 0};
  std::string config_path;
  bool print_config = false;
  std::vector<std::pair<CLI::App*, std::vector<Bound>>> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->footer(columns_footer(name));
    sub->add_option("--config", config_path, "Load a JSON config; explicit flags override it");
    sub->add_flag("--print-config", print_config, "Print the canonical JSON config and exit");
    subs.emplace_back(sub, add_options(sub, cli_cfg, marked));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    cli_cfg.marked_x = marked.at(0);
    cli_cfg.marked_y = marked.at(1);
    for (auto& [sub, bound] : subs) {
      if (!sub->parsed()) continue;
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = powerwalk::parse_config_json(read_file(config_path));
        if (cfg.command != sub->get_name())
          throw powerwalk::ConfigError("config command '" + cfg.command + "' does not match subcommand '" +
                                       sub->get_name() + "'");
        for (const auto& b : bound)
          if (b.option->count() > 0) b.copy(cfg, cli_cfg);
      } else {
        cfg = cli_cfg;
      }
      cfg.command = sub->get_name();
      powerwalk::normalize(cfg);
      if (print_config) {
        std::cout << powerwalk::canonical_json(cfg);
        return kExitPass;
      }
      const powerwalk::Report report = powerwalk::run_experiment(cfg);
      write_output(cfg.out, cfg.format == "json" ? powerwalk::to_json(report.table) : powerwalk::to_csv(report.table));
      std::cerr << powerwalk::format_summary(report);
      return report.passed() ? kExitPass : kExitCheckFailed;
    }
  } catch (const powerwalk::BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const powerwalk::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
