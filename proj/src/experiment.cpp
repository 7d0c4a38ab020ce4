#include "powerwalk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "powerwalk/full_walk.hpp"
#include "powerwalk/spectral_search.hpp"
#include "powerwalk/szegedy.hpp"
#include "powerwalk/tulsi.hpp"

namespace powerwalk {

namespace {

using nlohmann::json;

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& field) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError(field + " must be one of {" + list + "}, got '" + value + "'");
}

TSchedule schedule_of(const ExperimentConfig& c) {
  if (c.t_schedule == "log-n") return TSchedule::log_n;
  if (c.t_schedule == "sweep") return TSchedule::sweep;
  return TSchedule::fixed;
}

SearchOptions search_options(const ExperimentConfig& c) {
  SearchOptions o;
  o.rounding = c.rounding == "nearest" ? Rounding::nearest : Rounding::floor;
  o.amplification_constant = c.amp_constant;
  o.amplification_threshold = c.amp_threshold;
  return o;
}

std::string instance(int side, int t) { return "L=" + std::to_string(side) + " t=" + std::to_string(t); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::int64_t checked_power(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::int64_t{1} << 50) / base) return std::int64_t{1} << 50;
    r *= base;
  }
  return r;
}

// Columns per command. The tables below are the single source for both the
// emitted header and the --help text.
const std::map<std::string, std::vector<ColumnDoc>>& all_columns() {
  static const std::map<std::string, std::vector<ColumnDoc>> docs = {
      {"verify-spectrum",
       {{"L", "grid side"},
        {"N", "vertex count L^2"},
        {"t", "walk length (graph power)"},
        {"check", "name of the spectral statement checked"},
        {"value", "measured deviation (or dimension for the dimension check)"},
        {"tolerance", "allowed deviation (or expected dimension)"},
        {"pass", "true when the check holds"},
        {"detail", "free-text context for the check"}}},
      {"search",
       {{"L", "grid side"},
        {"N", "vertex count L^2"},
        {"t", "walk length (graph power)"},
        {"alpha_exact", "smallest positive eigenphase of the search operator"},
        {"alpha_estimate", "1/sqrt(sum_k (a_k^2/a_0^2)/(1-cos^t phi_k))"},
        {"Q", "iterations floor(pi/(2 alpha_exact)) (nearest with --rounding nearest)"},
        {"p_s", "success probability after Q iterations"},
        {"p_bound", "cos^2(alpha) ws^2 wt^2, clamped to 1"},
        {"ws", "1 - alpha^4 sum_k (a_k^2/a_0^2)/(1-cos^t phi_k)^2"},
        {"wt", "min(1/sqrt(sum_k a_k^2 cot^2(theta_k/2)), 1)"},
        {"rounds", "amplitude amplification rounds, 0 when p_s >= threshold"},
        {"Q_O", "oracle queries (rounds + 1) Q"},
        {"Q_G", "graph queries t Q_O"},
        {"precondition_ok", "alpha_exact < theta_1/2"},
        {"S1", "sum_k 1/(1-cos^t phi_k) over nonzero modes"},
        {"S2", "sum_k 1/(1-cos^t phi_k)^2"},
        {"S3", "sum_k cot^2(theta_k/2)"},
        {"lower", "(1/t) sum_k 1/(1-cos phi_k)"},
        {"upper", "8 sum_l l/(1-exp(-4 l^2 t/N))"}}},
      {"tulsi",
       {{"L", "grid side"},
        {"N", "vertex count L^2"},
        {"t", "walk length (graph power)"},
        {"delta", "ancilla rotation angle"},
        {"tan2_delta", "tan^2(delta)"},
        {"a_pi", "target overlap with the extra eigenvalue -1 state, sin(delta)"},
        {"alpha_delta", "smallest positive eigenphase of the controlled search operator"},
        {"alpha_estimate", "a_0(delta)/sqrt(sum_k a_k^2(delta)/(1-cos^t phi_k) + a_pi^2/4)"},
        {"Q_delta", "iterations floor(pi/(2 alpha_delta))"},
        {"p_s", "success probability after Q_delta iterations"},
        {"p_bound", "cos^2(alpha) ws^2 wt^2, clamped to 1"},
        {"ws", "ws with the extra -alpha^4 a_pi^2/a_0(delta)^2 loss"},
        {"wt", "min(1/sqrt(sum_k a_k^2(delta) cot^2(theta_k/2)), 1)"},
        {"rounds", "amplitude amplification rounds, 0 when p_s >= threshold"},
        {"Q_O", "oracle queries (rounds + 1) Q_delta"},
        {"Q_G", "graph queries t Q_O"},
        {"precondition_ok", "alpha_delta < theta_1/2"}}},
      {"sums",
       {{"L", "grid side"},
        {"N", "vertex count L^2"},
        {"t", "walk length (graph power)"},
        {"S1", "sum_k 1/(1-cos^t phi_k) over nonzero modes"},
        {"S2", "sum_k 1/(1-cos^t phi_k)^2"},
        {"S3", "sum_k cot^2(theta_k/2)"},
        {"lower", "(1/t) sum_k 1/(1-cos phi_k)"},
        {"upper", "8 sum_l l/(1-exp(-4 l^2 t/N))"},
        {"identity_residual", "|S3 - (1 - N + 2 S1)| / |S3|"},
        {"bounds_ok", "lower <= S1 <= upper"},
        {"S1_normalized", "S1 t / (N ln N)"}}},
      {"szegedy",
       {{"chain", "generator name and index, or the CSV path"},
        {"N", "chain size"},
        {"k", "steps per walk step"},
        {"discriminant_error", "max |A_k^T B_k - M^k|"},
        {"isometry_error", "max |A_k^T A_k - I|, |B_k^T B_k - I|"},
        {"unitarity_error", "max |W^T W - I|"},
        {"phase_distance", "nontrivial eigenphases of W_k(M) vs W(M^k)"},
        {"singular_phase_distance", "nontrivial eigenphases of W_k(M) vs +-2 arccos(sigma(M^k))"},
        {"nontrivial_dim", "dimension of the nontrivial subspace"},
        {"query_cost", "4 k Q per walk step"}}},
      {"gap",
       {{"g", "spectral gap of the base graph"},
        {"t", "ceil(1/g)"},
        {"g_t", "1 - (1-g)^t"},
        {"threshold", "1 - 1/e - slack"},
        {"pass", "g_t >= threshold"}}},
  };
  return docs;
}

Table make_table(const std::string& command) {
  Table t;
  for (const auto& c : column_docs(command)) t.columns.push_back(c.name);
  return t;
}

void add_check(Report& r, std::string name, bool pass, std::string detail = {}) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? worst : INFINITY;
}

Report run_verify_spectrum(const ExperimentConfig& c) {
  Report r;
  r.table = make_table(c.command);
  std::vector<std::pair<int, int>> jobs;
  for (int side : c.sizes) {
    const std::int64_t n = static_cast<std::int64_t>(side) * side;
    for (int t : t_values(schedule_of(c), n, c.t, c.t_scale)) {
      const std::int64_t dim = n * checked_power(4, t);
      if (dim > c.budget)
        throw BudgetExceeded("verify-spectrum: " + instance(side, t) + " needs dimension N*4^t = " +
                             std::to_string(dim) + ", above the dense budget " + std::to_string(c.budget));
      jobs.emplace_back(side, t);
    }
  }
  SpectrumTolerances stol;
  stol.phase = c.tol.phase;
  stol.projection = c.tol.projection;
  stol.component = c.tol.component;
  stol.unitarity = c.tol.unitarity;
  for (const auto& [side, t] : jobs) {
    const TorusGrid grid(side);
    const FullWalk walk(grid, t, c.budget);
    auto emit = [&](const std::string& name, double value, double tol, bool pass, const std::string& detail) {
      r.table.rows.push_back({std::int64_t{side}, grid.vertex_count(), std::int64_t{t}, name, value, tol, pass, detail});
      add_check(r, instance(side, t) + " " + name, pass, detail);
    };
    for (const SpectrumCheck& ch : verify_walk_spectrum(walk, stol, c.budget))
      emit(ch.name, ch.value, ch.tolerance, ch.pass, ch.detail);
    if (grid.bipartite()) {
      r.warnings.push_back(instance(side, t) + ": even L, bipartite -1 eigenvector reported; search checks skipped");
      continue;
    }
    if (t % 2 == 0) {
      r.warnings.push_back(instance(side, t) + ": even t, search checks skipped");
      continue;
    }
    const Vertex m = grid.wrap(c.marked_x, c.marked_y);
    const SpectralModel model = build_model(grid, t, m);
    const std::int64_t steps = 3 * iteration_count(secular_alpha(model.op), Rounding::floor);
    const double err = max_abs(iterate_search(model, steps), full_search_trajectory(walk, m, steps));
    emit("reduced_full_trajectory", err, c.tol.trajectory, err <= c.tol.trajectory,
         "Q = 0.." + std::to_string(steps));
  }
  return r;
}

Report run_search(const ExperimentConfig& c) {
  Report r;
  r.table = make_table(c.command);
  const SearchOptions opts = search_options(c);
  std::vector<double> ns, qo_log, ps, qo_sqrt;
  bool counters = true;
  bool precondition = true;
  std::string failed;
  for (int side : c.sizes) {
    const TorusGrid grid(side);
    const Vertex m = grid.wrap(c.marked_x, c.marked_y);
    const auto n = grid.vertex_count();
    const double nd = static_cast<double>(n);
    for (int t : t_values(schedule_of(c), n, c.t, c.t_scale)) {
      if (t % 2 == 0) throw ConfigError("search requires odd t, got " + std::to_string(t));
      const SpectralModel model = build_model(grid, t, m);
      if (t == t_values(schedule_of(c), n, c.t, c.t_scale).front())
        for (const auto& w : model.warnings) r.warnings.push_back("L=" + std::to_string(side) + ": " + w);
      const SearchResult s = success_probability(model, opts);
      const GridSums g = grid_sums(grid, t);
      r.table.rows.push_back({std::int64_t{side}, n, std::int64_t{t}, s.alpha_exact, s.alpha_estimate, s.Q, s.p_s,
                              s.p_bound, s.ws, s.wt, s.rounds, s.Q_O, s.Q_G, s.precondition_ok, g.S1, g.S2, g.S3,
                              g.lower, g.upper});
      counters = counters && s.Q_G == t * s.Q_O;
      if (!s.precondition_ok) {
        precondition = false;
        failed += " " + instance(side, t);
      }
      ns.push_back(nd);
      qo_log.push_back(static_cast<double>(s.Q_O) / std::log(nd));
      ps.push_back(s.p_s);
      qo_sqrt.push_back(static_cast<double>(s.Q_O) / std::sqrt(nd));
    }
  }
  add_check(r, "Q_G = t*Q_O", counters);
  add_check(r, "alpha_exact < theta_1/2", precondition, precondition ? "" : "violated at" + failed);
  if (schedule_of(c) != TSchedule::sweep) {
    r.scaling.push_back(make_scaling_report("Q_O/ln(N)", ns, qo_log));
    r.scaling.push_back(make_scaling_report("p_s", ns, ps));
    r.scaling.push_back(make_scaling_report("Q_O/sqrt(N)", ns, qo_sqrt));
  }
  return r;
}

Report run_tulsi(const ExperimentConfig& c) {
  Report r;
  r.table = make_table(c.command);
  const SearchOptions opts = search_options(c);
  std::vector<double> ns, qd, prod, ps;
  bool counters = true;
  for (int side : c.sizes) {
    const TorusGrid grid(side);
    const Vertex m = grid.wrap(c.marked_x, c.marked_y);
    const auto n = grid.vertex_count();
    const double nd = static_cast<double>(n);
    for (int t : t_values(schedule_of(c), n, c.t, c.t_scale)) {
      if (t % 2 == 0) throw ConfigError("tulsi requires odd t, got " + std::to_string(t));
      const SpectralModel model = build_model(grid, t, m);
      double delta = c.delta;
      try {
        if (c.delta_policy == "optimal_QO") delta = tune_delta(model, DeltaPolicy::optimal_QO);
        if (c.delta_policy == "balanced") delta = tune_delta(model, DeltaPolicy::balanced);
        if (c.delta_policy == "original_tulsi") delta = tune_delta(model, DeltaPolicy::original_tulsi);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(instance(side, t) + ": " + e.what());
      }
      const TulsiModel tm = build_tulsi(model, delta);
      const TulsiResult res = tulsi_search(tm, opts);
      const SearchResult& s = res.search;
      r.table.rows.push_back({std::int64_t{side}, n, std::int64_t{t}, res.delta, res.tan2_delta, res.a_pi,
                              s.alpha_exact, s.alpha_estimate, s.Q, s.p_s, s.p_bound, s.ws, s.wt, s.rounds, s.Q_O,
                              s.Q_G, s.precondition_ok});
      counters = counters && s.Q_G == t * s.Q_O;
      ns.push_back(nd);
      qd.push_back(static_cast<double>(s.Q) / std::sqrt(nd * std::log(nd)));
      prod.push_back(static_cast<double>(s.Q_O) * static_cast<double>(s.Q_G) / (nd * std::log(nd)));
      ps.push_back(s.p_s);
      if (2 * n * checked_power(4, t) <= c.budget) {
        const FullWalk walk(grid, t, c.budget);
        const CircuitRun circ = tulsi_circuit_trajectory(walk, m, delta, s.Q);
        const double err = max_abs(circ.trajectory, iterate_tulsi(tm, s.Q));
        add_check(r, instance(side, t) + " circuit_matches_reduced", err <= c.tol.trajectory,
                  "max deviation " + fmt(err) + " over Q = 0.." + std::to_string(s.Q));
      }
    }
  }
  add_check(r, "Q_G = t*Q_O", counters);
  if (schedule_of(c) != TSchedule::sweep) {
    r.scaling.push_back(make_scaling_report("Q_delta/sqrt(N ln N)", ns, qd));
    r.scaling.push_back(make_scaling_report("Q_O*Q_G/(N ln N)", ns, prod));
    r.scaling.push_back(make_scaling_report("p_s", ns, ps));
  }
  return r;
}

Report run_sums(const ExperimentConfig& c) {
  Report r;
  r.table = make_table(c.command);
  std::vector<double> ns, norm;
  bool bounds = true;
  double worst_identity = 0.0;
  for (int side : c.sizes) {
    const TorusGrid grid(side);
    const auto n = grid.vertex_count();
    const double nd = static_cast<double>(n);
    for (int t : t_values(schedule_of(c), n, c.t, c.t_scale)) {
      const GridSums g = grid_sums(grid, t);
      const double normalized = g.S1 * t / (nd * std::log(nd));
      r.table.rows.push_back({std::int64_t{side}, n, std::int64_t{t}, g.S1, g.S2, g.S3, g.lower, g.upper,
                              g.identity_residual, g.bounds_ok, normalized});
      bounds = bounds && g.bounds_ok;
      worst_identity = std::max(worst_identity, g.identity_residual);
      ns.push_back(nd);
      norm.push_back(normalized);
    }
  }
  add_check(r, "lower <= S1 <= upper", bounds);
  add_check(r, "S3 = 1 - N + 2 S1", worst_identity <= c.tol.identity, "worst relative residual " + fmt(worst_identity));
  if (schedule_of(c) != TSchedule::sweep) r.scaling.push_back(make_scaling_report("S1*t/(N ln N)", ns, norm));
  return r;
}

Report run_szegedy(const ExperimentConfig& c) {
  Report r;
  r.table = make_table(c.command);
  std::mt19937_64 rng(c.seed);
  std::vector<std::pair<std::string, MarkovChain>> chains;
  if (!c.chain_file.empty()) {
    chains.emplace_back(c.chain_file, load_chain_csv(c.chain_file));
  } else {
    for (int n : c.sizes) {
      const int count = c.chain == "random" ? c.chain_count : 1;
      for (int i = 0; i < count; ++i)
        chains.emplace_back(c.chain + "#" + std::to_string(i), named_chain(c.chain, n, rng));
    }
  }
  for (const auto& [name, chain] : chains)
    for (int k : c.k_values)
      if (checked_power(chain.size(), k + 1) > c.budget)
        throw BudgetExceeded("szegedy: N = " + std::to_string(chain.size()) + ", k = " + std::to_string(k) +
                             " needs dimension N^(k+1) above the budget " + std::to_string(c.budget));

  double worst_disc = 0.0, worst_iso = 0.0, worst_unit = 0.0, worst_phase = 0.0, worst_sv = 0.0;
  bool cost_ok = true;
  for (const auto& [name, chain] : chains) {
    for (int k : c.k_values) {
      const SzegedyWalk walk = build_isometries(chain, k, c.budget);
      Eigen::MatrixXd mk = chain.matrix();
      for (int i = 1; i < k; ++i) mk = mk * chain.matrix();
      const Eigen::MatrixXd d = discriminant(walk);
      const double disc = (d - mk).cwiseAbs().maxCoeff();
      const auto nn = chain.size();
      const double iso = std::max((walk.a.transpose() * walk.a - Eigen::MatrixXd::Identity(nn, nn)).cwiseAbs().maxCoeff(),
                                  (walk.b.transpose() * walk.b - Eigen::MatrixXd::Identity(nn, nn)).cwiseAbs().maxCoeff());
      const Eigen::MatrixXd w = walk_matrix(walk);
      const double unit = (w.transpose() * w - Eigen::MatrixXd::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
      const std::vector<double> phases = nontrivial_phases(walk, 1e-9);
      const SzegedyWalk direct = build_isometries(chain.power(k), 1, c.budget);
      const double phase_dist = phases.empty() && nontrivial_phases(direct, 1e-9).empty()
                                    ? 0.0
                                    : multiset_distance(phases, nontrivial_phases(direct, 1e-9));
      const double sv_dist = phases.empty() && discriminant_phases(d, 1e-9).empty()
                                 ? 0.0
                                 : multiset_distance(phases, discriminant_phases(d, 1e-9));
      const std::int64_t cost = query_cost(k, c.per_step_queries);
      cost_ok = cost_ok && cost == 4 * static_cast<std::int64_t>(k) * c.per_step_queries;
      r.table.rows.push_back({name, std::int64_t{nn}, std::int64_t{k}, disc, iso, unit, phase_dist, sv_dist,
                              static_cast<std::int64_t>(phases.size()), cost});
      worst_disc = std::max(worst_disc, disc);
      worst_iso = std::max(worst_iso, iso);
      worst_unit = std::max(worst_unit, unit);
      worst_phase = std::max(worst_phase, phase_dist);
      worst_sv = std::max(worst_sv, sv_dist);
    }
  }
  add_check(r, "A_k^T B_k = M^k", worst_disc <= c.tol.discriminant, "worst " + fmt(worst_disc));
  add_check(r, "isometries", worst_iso <= c.tol.isometry, "worst " + fmt(worst_iso));
  add_check(r, "walk unitary", worst_unit <= c.tol.unitarity, "worst " + fmt(worst_unit));
  add_check(r, "W_k(M) ~ W(M^k) on nontrivial subspace", worst_phase <= c.tol.szegedy_phase, "worst " + fmt(worst_phase));
  add_check(r, "phases = +-2 arccos(sigma)", worst_sv <= c.tol.szegedy_phase, "worst " + fmt(worst_sv));
  add_check(r, "query cost = 4kQ", cost_ok);
  return r;
}

Report run_gap(const ExperimentConfig& c) {
  Report r;
  r.table = make_table(c.command);
  const double threshold = 1.0 - std::exp(-1.0) - c.tol.gap_slack;
  for (double g : c.gaps) {
    const int t = static_cast<int>(std::ceil(1.0 / g));
    const double gt = spectral_gap_power(g, t);
    const bool pass = gt >= threshold;
    r.table.rows.push_back({g, std::int64_t{t}, gt, threshold, pass});
    add_check(r, "g=" + fmt(g) + " t=" + std::to_string(t), pass, "g_t = " + fmt(gt));
  }
  return r;
}

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      if (std::isnan(v)) return "nan";
      if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string out = "\"";
      for (char ch : v) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

json tolerances_json(const Tolerances& t) {
  return json{{"phase", t.phase},
              {"projection", t.projection},
              {"component", t.component},
              {"unitarity", t.unitarity},
              {"trajectory", t.trajectory},
              {"identity", t.identity},
              {"discriminant", t.discriminant},
              {"szegedy_phase", t.szegedy_phase},
              {"isometry", t.isometry},
              {"gap_slack", t.gap_slack}};
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-spectrum", "search", "tulsi", "sums", "szegedy", "gap"};
  return names;
}

std::vector<int> default_sizes(const std::string& command) {
  if (command == "verify-spectrum") return {5};
  if (command == "search") return {17, 33, 65, 129, 257};
  if (command == "tulsi") return {17, 33, 65, 129};
  if (command == "sums") return {8, 16, 32, 64, 128, 256, 512};
  if (command == "szegedy") return {2, 3, 4};
  return {};
}

const std::vector<ColumnDoc>& column_docs(const std::string& command) {
  const auto& docs = all_columns();
  const auto it = docs.find(command);
  if (it == docs.end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

void normalize(ExperimentConfig& c) {
  const auto& names = command_names();
  require(std::find(names.begin(), names.end(), c.command) != names.end(), "unknown command '" + c.command + "'");
  sort_unique(c.sizes);
  if (c.sizes.empty()) c.sizes = default_sizes(c.command);
  const int min_size = c.command == "szegedy" ? 1 : 2;
  for (int s : c.sizes) require(s >= min_size, "sizes must be >= " + std::to_string(min_size));
  if (c.command != "szegedy") for (int s : c.sizes) require(s <= 46340, "grid side too large");
  require(c.t >= 1, "t must be >= 1");
  require_one_of(c.t_schedule, {"fixed", "log-n", "sweep"}, "t-schedule");
  require(c.t_scale > 0.0, "t-scale must be positive");
  require_one_of(c.delta_policy, {"fixed", "optimal_QO", "balanced", "original_tulsi"}, "delta-policy");
  require(c.delta >= 0.0 && c.delta < std::numbers::pi / 2.0, "delta must lie in [0, pi/2)");
  require(c.marked_x >= 0 && c.marked_y >= 0, "marked coordinates must be nonnegative");
  require_one_of(c.rounding, {"floor", "nearest"}, "rounding");
  require(c.amp_constant > 0.0, "amplification constant must be positive");
  require(c.amp_threshold > 0.0 && c.amp_threshold <= 1.0, "amplification threshold must lie in (0, 1]");
  require_one_of(c.format, {"csv", "json"}, "format");
  require(c.budget >= 1, "budget must be >= 1");
  require_one_of(c.chain, {"cycle", "complete", "lazy-cycle", "lazy-complete", "random"}, "chain");
  require(c.chain_count >= 1, "chains must be >= 1");
  sort_unique(c.k_values);
  require(!c.k_values.empty(), "k list must not be empty");
  for (int k : c.k_values) require(k >= 1, "k must be >= 1");
  require(c.per_step_queries >= 0, "per-step queries must be >= 0");
  sort_unique(c.gaps);
  std::reverse(c.gaps.begin(), c.gaps.end());
  for (double g : c.gaps) require(g > 0.0 && g <= 1.0, "gaps must lie in (0, 1]");
  const Tolerances& t = c.tol;
  for (double v : {t.phase, t.projection, t.component, t.unitarity, t.trajectory, t.identity, t.discriminant,
                   t.szegedy_phase, t.isometry, t.gap_slack})
    require(v > 0.0 && std::isfinite(v), "tolerances must be positive and finite");
}

std::string canonical_json(const ExperimentConfig& c) {
  const json j = {{"command", c.command},
                  {"sizes", c.sizes},
                  {"t_schedule", c.t_schedule},
                  {"t", c.t},
                  {"t_scale", c.t_scale},
                  {"delta_policy", c.delta_policy},
                  {"delta", c.delta},
                  {"marked", {c.marked_x, c.marked_y}},
                  {"rounding", c.rounding},
                  {"amp_constant", c.amp_constant},
                  {"amp_threshold", c.amp_threshold},
                  {"format", c.format},
                  {"out", c.out},
                  {"seed", c.seed},
                  {"budget", c.budget},
                  {"chain", c.chain},
                  {"chain_file", c.chain_file},
                  {"chain_count", c.chain_count},
                  {"k", c.k_values},
                  {"per_step_queries", c.per_step_queries},
                  {"gaps", c.gaps},
                  {"tolerances", tolerances_json(c.tol)}};
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config_json(const std::string& text) {
  static const std::vector<std::string> keys = {
      "command", "sizes", "t_schedule", "t", "t_scale", "delta_policy", "delta", "marked", "rounding",
      "amp_constant", "amp_threshold", "format", "out", "seed", "budget", "chain", "chain_file", "chain_count",
      "k", "per_step_queries", "gaps", "tolerances"};
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    require(j.is_object(), "config must be a JSON object");
    for (const auto& [key, value] : j.items())
      require(std::find(keys.begin(), keys.end(), key) != keys.end(), "unknown config key '" + key + "'");
    read_field(j, "command", c.command);
    read_field(j, "sizes", c.sizes);
    read_field(j, "t_schedule", c.t_schedule);
    read_field(j, "t", c.t);
    read_field(j, "t_scale", c.t_scale);
    read_field(j, "delta_policy", c.delta_policy);
    read_field(j, "delta", c.delta);
    if (j.contains("marked")) {
      const auto m = j.at("marked").get<std::vector<int>>();
      require(m.size() == 2, "marked must hold two coordinates");
      c.marked_x = m[0];
      c.marked_y = m[1];
    }
    read_field(j, "rounding", c.rounding);
    read_field(j, "amp_constant", c.amp_constant);
    read_field(j, "amp_threshold", c.amp_threshold);
    read_field(j, "format", c.format);
    read_field(j, "out", c.out);
    read_field(j, "seed", c.seed);
    read_field(j, "budget", c.budget);
    read_field(j, "chain", c.chain);
    read_field(j, "chain_file", c.chain_file);
    read_field(j, "chain_count", c.chain_count);
    read_field(j, "k", c.k_values);
    read_field(j, "per_step_queries", c.per_step_queries);
    read_field(j, "gaps", c.gaps);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      require(t.is_object(), "tolerances must be a JSON object");
      const json known = tolerances_json(Tolerances{});
      for (const auto& [key, value] : t.items())
        require(known.contains(key), "unknown tolerance key '" + key + "'");
      read_field(t, "phase", c.tol.phase);
      read_field(t, "projection", c.tol.projection);
      read_field(t, "component", c.tol.component);
      read_field(t, "unitarity", c.tol.unitarity);
      read_field(t, "trajectory", c.tol.trajectory);
      read_field(t, "identity", c.tol.identity);
      read_field(t, "discriminant", c.tol.discriminant);
      read_field(t, "szegedy_phase", c.tol.szegedy_phase);
      read_field(t, "isometry", c.tol.isometry);
      read_field(t, "gap_slack", c.tol.gap_slack);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  normalize(c);
  return c;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

Report run_experiment(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  normalize(c);
  if (c.command == "verify-spectrum") return run_verify_spectrum(c);
  if (c.command == "search") return run_search(c);
  if (c.command == "tulsi") return run_tulsi(c);
  if (c.command == "sums") return run_sums(c);
  if (c.command == "szegedy") return run_szegedy(c);
  return run_gap(c);
}

std::string to_csv(const Table& table) {
  std::string out = "# powerwalk v1\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { rec[table.columns[i]] = v; }, row[i]);
    arr.push_back(std::move(rec));
  }
  return arr.dump(2) + "\n";
}

std::string format_summary(const Report& report) {
  std::ostringstream out;
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << "  (" << c.detail << ')';
    out << '\n';
  }
  for (const auto& s : report.scaling) {
    out << "scaling " << s.name << ": min " << fmt(s.stats.min) << ", max " << fmt(s.stats.max) << ", max/min "
        << fmt(s.stats.ratio);
    if (s.fit.valid)
      out << ", log-log slope " << fmt(s.fit.slope) << " (rms residual " << fmt(s.fit.residual) << ")";
    else
      out << ", slope not fitted (fewer than " << kMinSlopePoints << " sizes)";
    out << '\n';
  }
  return out.str();
}

}  // namespace powerwalk
