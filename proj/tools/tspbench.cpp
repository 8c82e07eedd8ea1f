#include "CLI11.hpp"
#include "tsp/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string strategy = "vsr";
  std::string strategies;  // comma list, suite only
  int runs = 0;            // 0: per-command default
  std::uint64_t seed = 1;
  int max_trials = 0;
  double time_limit = 0.0;
  double epsilon = 0.4;
  double beta = 0.99;
  double lambda = 0.1;
  double gamma = 0.9;
  int max_num = 0;
  int candidates = tsp::kDefaultCandidates;
  int neighborhood = tsp::kDefaultAlphaNeighborhood;
  int jobs = 1;
  bool single_pass = false;
  std::string out;
  std::string format = "table";
  std::string optima_file;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--runs", o.runs, "Seeded runs per instance and strategy");
  cmd->add_option("--seed", o.seed, "Base seed; run i uses seed + i");
  cmd->add_option("--max-trials", o.max_trials, "Trial budget per run (0: number of cities)");
  cmd->add_option("--time-limit", o.time_limit, "Per-run wall clock budget in seconds");
  cmd->add_option("--epsilon", o.epsilon, "Initial exploration rate");
  cmd->add_option("--beta", o.beta, "Exploration decay per trial");
  cmd->add_option("--lambda", o.lambda, "Learning rate");
  cmd->add_option("--gamma", o.gamma, "Discount factor");
  cmd->add_option("--max-num", o.max_num, "Stagnant trials before a strategy switch (0: trials/20)");
  cmd->add_option("--candidates", o.candidates, "Candidate edges kept per city");
  cmd->add_option("--neighborhood", o.neighborhood, "Alpha neighborhood size per city");
  cmd->add_option("--jobs", o.jobs, "Parallel workers");
  cmd->add_flag("--single-pass", o.single_pass, "One improvement pass per trial");
  cmd->add_option("--out", o.out, "Write the report here instead of stdout");
  cmd->add_option("--format", o.format, "Report format: table, csv or json");
  cmd->add_option("--optima", o.optima_file, "instance,optimum lookup table");
}

int fill_config(const CommonOpts& o, tsp::SuiteConfig& cfg, bool suite_mode) {
  cfg.runs = o.runs > 0 ? o.runs : (suite_mode ? 10 : 1);
  cfg.jobs = std::max(1, o.jobs);
  cfg.solver.seed = o.seed;
  cfg.solver.max_trials = o.max_trials;
  if (o.time_limit > 0.0) cfg.solver.time_limit = o.time_limit;
  cfg.solver.single_pass = o.single_pass;
  cfg.solver.candidates = o.candidates;
  cfg.solver.alpha_neighborhood = o.neighborhood;
  cfg.solver.rl.epsilon = o.epsilon;
  cfg.solver.rl.beta = o.beta;
  cfg.solver.rl.lambda = o.lambda;
  cfg.solver.rl.gamma = o.gamma;
  cfg.solver.rl.max_num = o.max_num;

  std::string list = suite_mode && !o.strategies.empty() ? o.strategies : o.strategy;
  cfg.strategies.clear();
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    auto s = tsp::parse_strategy(token);
    if (!s) {
      std::cerr << "unknown strategy: " << token << "\n";
      return 2;
    }
    cfg.strategies.push_back(*s);
  }
  if (cfg.strategies.empty()) {
    std::cerr << "no strategy selected\n";
    return 2;
  }

  try {
    cfg.solver.rl.validate();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  std::string optima_path = o.optima_file;
  if (optima_path.empty() && fs::exists("data/optima.csv")) optima_path = "data/optima.csv";
  if (!optima_path.empty()) {
    try {
      cfg.optima = tsp::load_optima(optima_path);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }
  return 0;
}

int write_output(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  f << text;
  if (!f) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  return 0;
}

int report_and_exit(const tsp::SuiteResult& res, const CommonOpts& o) {
  auto format = tsp::parse_format(o.format);
  if (!format) {
    std::cerr << "unknown format: " << o.format << "\n";
    return 2;
  }
  for (const auto& [path, message] : res.failures)
    std::cerr << "failed: " << path << ": " << message << "\n";
  int rc = write_output(tsp::emit_report(res.reports, *format), o.out);
  if (rc != 0) return rc;
  return res.failures.empty() ? 0 : 1;
}

std::vector<std::string> expand_suite_target(const std::string& target) {
  std::vector<std::string> paths;
  if (fs::is_directory(target)) {
    for (const auto& entry : fs::directory_iterator(target))
      if (entry.path().extension() == ".tsp") paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    return paths;
  }
  std::ifstream in(target);
  if (!in) return paths;
  std::string line;
  fs::path base = fs::path(target).parent_path();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!fs::exists(line) && fs::exists(base / line))
      paths.push_back((base / line).string());
    else
      paths.push_back(line);
  }
  return paths;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VSR-LKH style TSP solver and benchmark harness"};
  app.require_subcommand(1);

  CommonOpts solve_opts, suite_opts;
  std::string solve_file, suite_target, tour_out;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("file", solve_file, "TSPLIB .tsp instance")->required();
  solve_cmd->add_option("--strategy", solve_opts.strategy,
                        "vsr, q, sarsa, mc, td, fixq or alpha");
  solve_cmd->add_option("--tour-out", tour_out, "Write the best tour found (TSPLIB .tour)");
  add_common_flags(solve_cmd, solve_opts);

  CLI::App* suite_cmd = app.add_subcommand("suite", "Benchmark a set of instances");
  suite_cmd->add_option("target", suite_target, "Directory of .tsp files, or a list file")
      ->required();
  suite_cmd->add_option("--strategy", suite_opts.strategy, "Single strategy to run");
  suite_cmd->add_option("--strategies", suite_opts.strategies,
                        "Comma list, e.g. vsr,q,sarsa,mc,td,fixq,alpha");
  add_common_flags(suite_cmd, suite_opts);

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed()) {
    tsp::SuiteConfig cfg;
    if (int rc = fill_config(solve_opts, cfg, false)) return rc;
    tsp::SuiteResult res = tsp::run_suite(std::vector<std::string>{solve_file}, cfg);
    int rc = report_and_exit(res, solve_opts);
    if (rc == 0 && !tour_out.empty() && !res.records.empty()) {
      const tsp::RunRecord* best = &res.records.front();
      for (const auto& rec : res.records)
        if (rec.length < best->length) best = &rec;
      try {
        tsp::Instance inst = tsp::load_instance(solve_file);
        auto it = cfg.optima.find(inst.name);
        if (it != cfg.optima.end()) inst.known_optimum = it->second;
        tsp::SolverConfig sc = cfg.solver;
        sc.rl.strategy = cfg.strategies.front();
        sc.seed = cfg.solver.seed + static_cast<std::uint64_t>(best->run);
        tsp::RunResult rerun = tsp::solve(inst, sc);
        tsp::write_tour_file(tour_out, inst.name, rerun.best_tour.order());
      } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
      }
    }
    return rc;
  }

  std::vector<std::string> paths = expand_suite_target(suite_target);
  if (paths.empty()) {
    std::cerr << "no instances found in " << suite_target << "\n";
    return 1;
  }
  tsp::SuiteConfig cfg;
  if (int rc = fill_config(suite_opts, cfg, true)) return rc;
  tsp::SuiteResult res = tsp::run_suite(paths, cfg);
  return report_and_exit(res, suite_opts);
}
