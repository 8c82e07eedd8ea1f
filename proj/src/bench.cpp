#include "tsp/bench.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tsp {

namespace {

double round_to(double x, double unit) { return std::round(x / unit) * unit; }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void parallel_for(int jobs, int tasks, const std::function<void(int)>& fn) {
  jobs = std::min(jobs, tasks);
  if (jobs <= 1) {
    for (int i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < tasks;) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::int64_t parse_int_field(const std::string& s, const char* what) {
  std::int64_t value = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::runtime_error(std::string("bad ") + what + " value: " + s);
  return value;
}

double parse_double_field(const std::string& s, const char* what) {
  try {
    size_t used = 0;
    double value = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("bad ") + what + " value: " + s);
  }
}

constexpr const char* kCsvHeader =
    "instance,strategy,runs,best,average,worst,success,mean_trials,mean_time,gap,optimum";

}  // namespace

std::map<std::string, Length> load_optima(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open optima file: " + path);
  std::map<std::string, Length> table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line == "instance,optimum") continue;
    auto fields = split_csv_row(line);
    if (fields.size() != 2)
      throw std::runtime_error("optima line " + std::to_string(lineno) + ": expected name,value");
    table[fields[0]] = parse_int_field(fields[1], "optimum");
  }
  return table;
}

std::optional<double> gap(const std::vector<Length>& lengths, std::optional<Length> optimum) {
  if (!optimum || *optimum <= 0 || lengths.empty()) return std::nullopt;
  double sum = 0.0;
  for (Length len : lengths)
    sum += static_cast<double>(len - *optimum) / static_cast<double>(*optimum);
  return sum / static_cast<double>(lengths.size());
}

std::vector<double> cumulative_gap(const std::vector<RunReport>& reports) {
  std::vector<double> out;
  out.reserve(reports.size());
  double acc = 0.0;
  for (const auto& r : reports) {
    if (r.gap) acc += *r.gap;
    out.push_back(acc);
  }
  return out;
}

RunReport aggregate(const std::vector<RunRecord>& cell, std::optional<Length> optimum) {
  if (cell.empty()) throw std::invalid_argument("aggregate of an empty cell");
  RunReport rep;
  rep.instance = cell.front().instance;
  rep.strategy = cell.front().strategy;
  rep.runs = static_cast<int>(cell.size());
  rep.optimum = optimum;
  rep.best = cell.front().length;
  rep.worst = cell.front().length;
  std::vector<Length> lengths;
  lengths.reserve(cell.size());
  double len_sum = 0.0, trial_sum = 0.0, time_sum = 0.0;
  for (const auto& rec : cell) {
    rep.best = std::min(rep.best, rec.length);
    rep.worst = std::max(rep.worst, rec.length);
    rep.success += rec.hit_optimum ? 1 : 0;
    lengths.push_back(rec.length);
    len_sum += static_cast<double>(rec.length);
    trial_sum += rec.trials;
    time_sum += rec.seconds;
  }
  rep.average = round_to(len_sum / rep.runs, 0.01);
  rep.mean_trials = round_to(trial_sum / rep.runs, 0.01);
  rep.mean_time = round_to(time_sum / rep.runs, 0.01);
  if (auto g = gap(lengths, optimum)) rep.gap = round_to(*g, 1e-6);
  return rep;
}

SuiteResult run_suite(const std::vector<Instance>& instances, const SuiteConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (cfg.strategies.empty()) throw std::invalid_argument("no strategies selected");
  cfg.solver.rl.validate();

  SuiteResult result;
  std::vector<Instance> work(instances);
  for (auto& inst : work) {
    auto it = cfg.optima.find(inst.name);
    if (it != cfg.optima.end()) inst.known_optimum = it->second;
  }

  const int ni = static_cast<int>(work.size());
  const int ns = static_cast<int>(cfg.strategies.size());
  const int nr = cfg.runs;

  std::vector<Prep> preps(ni);
  std::mutex fail_mu;
  parallel_for(cfg.jobs, ni, [&](int i) {
    preps[i] = prepare(work[i], cfg.solver.ascent, cfg.solver.alpha_neighborhood);
  });

  result.records.resize(static_cast<size_t>(ni) * ns * nr);
  parallel_for(cfg.jobs, ni * ns * nr, [&](int task) {
    const int i = task / (ns * nr);
    const int s = task / nr % ns;
    const int r = task % nr;
    const Instance& inst = work[i];
    SolverConfig sc = cfg.solver;
    sc.rl.strategy = cfg.strategies[s];
    sc.seed = cfg.solver.seed + static_cast<std::uint64_t>(r);
    RunRecord rec;
    rec.instance = inst.name;
    rec.strategy = strategy_name(cfg.strategies[s]);
    rec.run = r;
    try {
      RunResult res = solve(inst, sc, preps[i]);
      rec.length = res.best_length;
      rec.hit_optimum = res.reached_optimum;
      rec.trials = res.trials_used;
      rec.seconds = res.wall_time;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(fail_mu);
      result.failures.emplace_back(inst.name, e.what());
    }
    result.records[task] = std::move(rec);
  });

  for (int i = 0; i < ni; ++i) {
    for (int s = 0; s < ns; ++s) {
      const auto begin = result.records.begin() + (static_cast<size_t>(i) * ns + s) * nr;
      std::vector<RunRecord> cell(begin, begin + nr);
      result.reports.push_back(aggregate(cell, work[i].known_optimum));
    }
  }
  return result;
}

SuiteResult run_suite(const std::vector<std::string>& paths, const SuiteConfig& cfg) {
  std::vector<Instance> instances;
  std::vector<std::pair<std::string, std::string>> failures;
  for (const auto& path : paths) {
    try {
      instances.push_back(load_instance(path));
    } catch (const std::exception& e) {
      failures.emplace_back(path, e.what());
    }
  }
  SuiteResult result = run_suite(instances, cfg);
  result.failures.insert(result.failures.begin(), failures.begin(), failures.end());
  return result;
}

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  return std::nullopt;
}

namespace {

std::string emit_csv(const std::vector<RunReport>& reports) {
  std::string out = kCsvHeader;
  out.push_back('\n');
  for (const auto& r : reports) {
    out += r.instance;
    out += ',';
    out += r.strategy;
    out += ',';
    out += std::to_string(r.runs);
    out += ',';
    out += std::to_string(r.best);
    out += ',';
    out += format_double(r.average);
    out += ',';
    out += std::to_string(r.worst);
    out += ',';
    out += std::to_string(r.success);
    out += ',';
    out += format_double(r.mean_trials);
    out += ',';
    out += format_double(r.mean_time);
    out += ',';
    if (r.gap) out += format_double(*r.gap);
    out += ',';
    if (r.optimum) out += std::to_string(*r.optimum);
    out.push_back('\n');
  }
  return out;
}

std::string emit_json(const std::vector<RunReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json row;
    row["instance"] = r.instance;
    row["strategy"] = r.strategy;
    row["runs"] = r.runs;
    row["best"] = r.best;
    row["average"] = r.average;
    row["worst"] = r.worst;
    row["success"] = r.success;
    row["mean_trials"] = r.mean_trials;
    row["mean_time"] = r.mean_time;
    row["gap"] = r.gap ? nlohmann::json(*r.gap) : nlohmann::json(nullptr);
    row["optimum"] = r.optimum ? nlohmann::json(*r.optimum) : nlohmann::json(nullptr);
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::string emit_table(const std::vector<RunReport>& reports) {
  const std::vector<std::string> header = {"Instance", "Strategy", "Runs",    "Best",
                                           "Average",  "Worst",    "Success", "Time(s)",
                                           "Trials",   "Gap(%)"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    char time_buf[32], trial_buf[32], avg_buf[32], gap_buf[32];
    std::snprintf(time_buf, sizeof(time_buf), "%.2f", r.mean_time);
    std::snprintf(trial_buf, sizeof(trial_buf), "%.2f", r.mean_trials);
    std::snprintf(avg_buf, sizeof(avg_buf), "%.2f", r.average);
    if (r.gap)
      std::snprintf(gap_buf, sizeof(gap_buf), "%.4f", *r.gap * 100.0);
    else
      std::snprintf(gap_buf, sizeof(gap_buf), "-");
    rows.push_back({r.instance, r.strategy, std::to_string(r.runs), std::to_string(r.best),
                    avg_buf, std::to_string(r.worst),
                    std::to_string(r.success) + "/" + std::to_string(r.runs), time_buf,
                    trial_buf, gap_buf});
  }
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  auto put_row = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << (c ? "  " : "");
      out << row[c] << std::string(width[c] - row[c].size(), ' ');
    }
    out << '\n';
  };
  put_row(header);
  for (const auto& row : rows) put_row(row);
  return out.str();
}

}  // namespace

std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv:
      return emit_csv(reports);
    case ReportFormat::Json:
      return emit_json(reports);
    case ReportFormat::Table:
      return emit_table(reports);
  }
  return {};
}

std::vector<RunReport> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<RunReport> reports;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw std::runtime_error("unexpected report header: " + line);
      saw_header = true;
      continue;
    }
    auto f = split_csv_row(line);
    if (f.size() != 11) throw std::runtime_error("bad report row: " + line);
    RunReport r;
    r.instance = f[0];
    r.strategy = f[1];
    r.runs = static_cast<int>(parse_int_field(f[2], "runs"));
    r.best = parse_int_field(f[3], "best");
    r.average = parse_double_field(f[4], "average");
    r.worst = parse_int_field(f[5], "worst");
    r.success = static_cast<int>(parse_int_field(f[6], "success"));
    r.mean_trials = parse_double_field(f[7], "mean_trials");
    r.mean_time = parse_double_field(f[8], "mean_time");
    if (!f[9].empty()) r.gap = parse_double_field(f[9], "gap");
    if (!f[10].empty()) r.optimum = parse_int_field(f[10], "optimum");
    reports.push_back(std::move(r));
  }
  if (!saw_header) throw std::runtime_error("report csv is missing its header");
  return reports;
}

std::vector<RunReport> parse_report_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  std::vector<RunReport> reports;
  for (const auto& row : arr) {
    RunReport r;
    r.instance = row.at("instance").get<std::string>();
    r.strategy = row.at("strategy").get<std::string>();
    r.runs = row.at("runs").get<int>();
    r.best = row.at("best").get<Length>();
    r.average = row.at("average").get<double>();
    r.worst = row.at("worst").get<Length>();
    r.success = row.at("success").get<int>();
    r.mean_trials = row.at("mean_trials").get<double>();
    r.mean_time = row.at("mean_time").get<double>();
    if (!row.at("gap").is_null()) r.gap = row.at("gap").get<double>();
    if (!row.at("optimum").is_null()) r.optimum = row.at("optimum").get<Length>();
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace tsp
