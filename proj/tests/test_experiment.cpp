#include <algorithm>
#include <fstream>
#include <set>

#include <gtest/gtest.h>
#include <json.hpp>

#ifdef POWERWALK_HAVE_OPENMP
#include <omp.h>
#endif

#include "generators.hpp"
#include "powerwalk/experiment.hpp"
#include "powerwalk/torus.hpp"

using namespace powerwalk;

namespace {

ExperimentConfig config_for(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  normalize(c);
  return c;
}

}  // namespace

TEST(Config, CanonicalJsonRoundTripProperty) {
  auto rng = pwtest::make_rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    ExperimentConfig c = pwtest::random_config(rng);
    normalize(c);
    const std::string text = canonical_json(c);
    const ExperimentConfig back = parse_config_json(text);
    EXPECT_EQ(canonical_json(back), text);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.tol.discriminant, c.tol.discriminant);
    EXPECT_EQ(back.gaps, c.gaps);
  }
}

TEST(Config, KeysAreSorted) {
  const auto j = nlohmann::json::parse(canonical_json(config_for("search")));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_TRUE(j.contains("tolerances"));
}

TEST(Config, UnknownKeysAndBadValuesRejected) {
  EXPECT_THROW(parse_config_json(R"({"command": "search", "sizez": [5]})"), ConfigError);
  EXPECT_THROW(parse_config_json(R"({"command": "search", "tolerances": {"phaze": 1e-9}})"), ConfigError);
  EXPECT_THROW(parse_config_json("not json"), ConfigError);
  EXPECT_THROW(parse_config_json(R"({"command": "search", "t": "three"})"), ConfigError);
  ExperimentConfig c;
  c.command = "search";
  c.t_schedule = "geometric";
  EXPECT_THROW(normalize(c), ConfigError);
  c = ExperimentConfig{};
  c.command = "lookup";
  EXPECT_THROW(normalize(c), ConfigError);
  c = ExperimentConfig{};
  c.command = "gap";
  c.gaps = {0.0};
  EXPECT_THROW(normalize(c), ConfigError);
  c = ExperimentConfig{};
  c.command = "search";
  c.tol.phase = -1.0;
  EXPECT_THROW(normalize(c), ConfigError);
}

TEST(Config, DefaultsFilled) {
  EXPECT_EQ(config_for("search").sizes, (std::vector<int>{17, 33, 65, 129, 257}));
  EXPECT_EQ(config_for("sums").sizes, (std::vector<int>{8, 16, 32, 64, 128, 256, 512}));
  EXPECT_EQ(config_for("verify-spectrum").sizes, (std::vector<int>{5}));
}

TEST(Report, ColumnsAreDocumented) {
  for (const std::string& cmd : command_names()) {
    ExperimentConfig c = config_for(cmd);
    if (cmd == "search" || cmd == "tulsi") c.sizes = {9, 17};
    if (cmd == "sums") c.sizes = {8, 16};
    if (cmd == "szegedy") c.chain_count = 2;
    const Report r = run_experiment(c);
    std::vector<std::string> documented;
    for (const auto& d : column_docs(cmd)) {
      documented.push_back(d.name);
      EXPECT_FALSE(d.description.empty()) << cmd << " " << d.name;
    }
    EXPECT_EQ(r.table.columns, documented) << cmd;
    ASSERT_FALSE(r.table.rows.empty()) << cmd;
    for (const auto& row : r.table.rows) EXPECT_EQ(row.size(), documented.size());
    const auto records = nlohmann::json::parse(to_json(r.table));
    ASSERT_TRUE(records.is_array());
    for (const auto& rec : records) {
      std::set<std::string> keys;
      for (auto it = rec.begin(); it != rec.end(); ++it) keys.insert(it.key());
      EXPECT_EQ(keys, std::set<std::string>(documented.begin(), documented.end()));
    }
  }
}

TEST(Report, CsvHeader) {
  ExperimentConfig c = config_for("gap");
  const std::string csv = to_csv(run_experiment(c).table);
  EXPECT_EQ(csv.rfind("# powerwalk v1\ng,t,g_t,threshold,pass\n", 0), 0u);
}

TEST(Report, DeterministicCsv) {
  ExperimentConfig c = config_for("szegedy");
  c.seed = 7;
  c.chain_count = 3;
  const std::string a = to_csv(run_experiment(c).table);
  const std::string b = to_csv(run_experiment(c).table);
  EXPECT_EQ(a, b);
  c.seed = 8;
  EXPECT_NE(to_csv(run_experiment(c).table), a);
}

TEST(Report, CsvIndependentOfThreadCount) {
  ExperimentConfig c = config_for("search");
  c.sizes = {17, 33, 65};
  c.t_schedule = "log-n";
  std::string ref;
  for (int threads : {1, 4}) {
#ifdef POWERWALK_HAVE_OPENMP
    omp_set_num_threads(threads);
#endif
    const std::string csv = to_csv(run_experiment(c).table);
    if (ref.empty())
      ref = csv;
    else
      EXPECT_EQ(csv, ref) << threads;
  }
}

TEST(Commands, VerifySpectrumPassesOnFiveByFive) {
  ExperimentConfig c = config_for("verify-spectrum");
  for (int t : {1, 3}) {
    c.t = t;
    const Report r = run_experiment(c);
    EXPECT_TRUE(r.passed()) << format_summary(r);
  }
}

TEST(Commands, VerifySpectrumRefusesOverBudget) {
  ExperimentConfig c = config_for("verify-spectrum");
  c.sizes = {3};
  c.t = 5;
  EXPECT_THROW(run_experiment(c), BudgetExceeded);
}

TEST(Commands, VerifySpectrumBipartiteWarning) {
  ExperimentConfig c = config_for("verify-spectrum");
  c.sizes = {4};
  const Report r = run_experiment(c);
  EXPECT_TRUE(r.passed()) << format_summary(r);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("bipartite"), std::string::npos);
}

TEST(Commands, SumsBand) {
  ExperimentConfig c = config_for("sums");
  const Report r = run_experiment(c);
  EXPECT_TRUE(r.passed()) << format_summary(r);
  ASSERT_FALSE(r.scaling.empty());
  EXPECT_LT(r.scaling.front().stats.ratio, 4.0);
}

TEST(Commands, SzegedyDiscriminantAtN4K3) {
  ExperimentConfig c = config_for("szegedy");
  c.sizes = {4};
  c.k_values = {3};
  c.chain_count = 3;
  const Report r = run_experiment(c);
  EXPECT_TRUE(r.passed()) << format_summary(r);
  const auto& cols = r.table.columns;
  const auto idx = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), "discriminant_error") - cols.begin());
  for (const auto& row : r.table.rows) EXPECT_LT(std::get<double>(row[idx]), 1e-10);
}

TEST(Commands, SzegedyFromFile) {
  const std::string path = testing::TempDir() + "powerwalk_exp_chain.csv";
  {
    std::ofstream out(path);
    out << "0.5,0.5,0\n0.5,0,0.5\n0,0.5,0.5\n";
  }
  ExperimentConfig c = config_for("szegedy");
  c.chain_file = path;
  const Report r = run_experiment(c);
  EXPECT_TRUE(r.passed()) << format_summary(r);
  EXPECT_EQ(r.table.rows.size(), 3u);
  c.chain_file = path + ".missing";
  EXPECT_ANY_THROW(run_experiment(c));
}

TEST(Commands, GapPasses) {
  const Report r = run_experiment(config_for("gap"));
  EXPECT_TRUE(r.passed()) << format_summary(r);
  EXPECT_EQ(r.table.rows.size(), 3u);
}

TEST(Commands, TulsiPolicies) {
  for (const std::string policy : {"fixed", "original_tulsi", "balanced", "optimal_QO"}) {
    ExperimentConfig c = config_for("tulsi");
    c.sizes = {5, 9, 17};
    c.delta_policy = policy;
    if (policy == "fixed") c.delta = 0.7;
    const Report r = run_experiment(c);
    EXPECT_TRUE(r.passed()) << policy << "\n" << format_summary(r);
  }
}
