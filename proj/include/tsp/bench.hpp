#pragma once

#include "tsp/policy.hpp"
#include "tsp/solver.hpp"
#include "tsp/tsplib.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsp {

/// Outcome of a single seeded solve.
struct RunRecord {
  std::string instance;
  std::string strategy;
  int run = 0;
  Length length = 0;
  bool hit_optimum = false;
  int trials = 0;
  double seconds = 0.0;
};

/// Aggregate of one instance x strategy cell. Stored values are
/// pre-rounded (average and times to 0.01, gap to 1e-6) so every
/// emitter prints the same thing and round-trips exactly.
struct RunReport {
  std::string instance;
  std::string strategy;
  int runs = 0;
  Length best = 0;
  double average = 0.0;
  Length worst = 0;
  int success = 0;
  double mean_trials = 0.0;
  double mean_time = 0.0;
  std::optional<double> gap;
  std::optional<Length> optimum;
};

struct SuiteConfig {
  SolverConfig solver;  // solver.seed is the base seed; run i uses seed + i
  std::vector<Strategy> strategies{Strategy::VSR};
  int runs = 10;
  int jobs = 1;
  std::map<std::string, Length> optima;
};

struct SuiteResult {
  std::vector<RunReport> reports;  // instance-major, then strategy, as configured
  std::vector<RunRecord> records;  // every run, same ordering with run index last
  std::vector<std::pair<std::string, std::string>> failures;  // path -> error
};

/// Reads an "instance,optimum" lookup table (header line required).
std::map<std::string, Length> load_optima(const std::string& path);

/// Mean relative excess over the optimum; absent when the optimum is
/// unknown.
std::optional<double> gap(const std::vector<Length>& lengths, std::optional<Length> optimum);

/// Prefix sums of report gaps in order; reports without a gap add 0.
std::vector<double> cumulative_gap(const std::vector<RunReport>& reports);

/// Recomputes the aggregate row for one cell of records.
RunReport aggregate(const std::vector<RunRecord>& cell, std::optional<Length> optimum);

SuiteResult run_suite(const std::vector<Instance>& instances, const SuiteConfig& cfg);
SuiteResult run_suite(const std::vector<std::string>& paths, const SuiteConfig& cfg);

enum class ReportFormat { Table, Csv, Json };
std::optional<ReportFormat> parse_format(std::string_view name);

std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format);
std::vector<RunReport> parse_report_csv(const std::string& text);
std::vector<RunReport> parse_report_json(const std::string& text);

}  // namespace tsp
