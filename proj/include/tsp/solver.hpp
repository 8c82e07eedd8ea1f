#pragma once

#include "tsp/candidates.hpp"
#include "tsp/kopt.hpp"
#include "tsp/onetree.hpp"
#include "tsp/policy.hpp"
#include "tsp/tsplib.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>

namespace tsp {

struct SolverConfig {
  int max_trials = 0;  // 0: number of cities
  RLConfig rl;
  std::uint64_t seed = 1;
  std::optional<double> time_limit;  // seconds, checked between episodes
  bool stop_at_optimum = true;
  bool single_pass = false;  // one improvement pass per trial instead of a local optimum
  AscentConfig ascent;
  int candidates = kDefaultCandidates;
  int alpha_neighborhood = kDefaultAlphaNeighborhood;
};

/// Per-instance preparation shared by every run: penalties from the
/// ascent, the alpha table they induce, and the bound w(pi). Immutable
/// once built, safe to share across threads.
struct Prep {
  Penalties pen;
  AlphaTable alpha;
  double lower_bound = 0.0;
};

Prep prepare(const Instance& inst, const AscentConfig& ascent = {},
             int alpha_neighborhood = kDefaultAlphaNeighborhood);

/// Fresh candidate table for one run of the given strategy.
QTable initial_qtable(const Instance& inst, const Prep& prep, Strategy strategy,
                      int K = kDefaultCandidates);

/// The rule set in force for one trial.
struct Policy {
  RLConfig cfg;
  int method = kQLearning;
  double eps = 0.0;
  bool learn = true;
  PolicyCounters* counters = nullptr;
};

struct SearchStats {
  std::uint64_t episodes = 0;  // k-opt attempts started
  std::uint64_t moves = 0;     // improving moves applied
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Tour construction from a random start city. At each step the next
/// city is the first unvisited candidate that shares a guide edge with
/// the current one, else a uniformly random unvisited candidate, else a
/// random unvisited city. With a guide tour the trials perturb the
/// incumbent instead of restarting cold.
Tour choose_initial_tour(const Instance& inst, QTable& qt, std::mt19937_64& rng,
                         const Tour* guide = nullptr);

/// Tries one reinforced k-opt episode from each of the 2n directed tour
/// edges in random order and returns the improved tour at the first
/// applied move, or absent once every edge failed (or the deadline
/// passed).
std::optional<Tour> improvement_pass(const Tour& t, QTable& qt, const Policy& pol,
                                     const Instance& inst, const Penalties& pen,
                                     std::mt19937_64& rng, SearchStats* stats = nullptr,
                                     const Deadline& deadline = {});

struct RunResult {
  Tour best_tour;
  Length best_length = 0;
  int trials_used = 0;
  double wall_time = 0.0;
  bool reached_optimum = false;
  Length initial_length = 0;
  double final_epsilon = 0.0;
  PolicyCounters counters;
  SearchStats stats;
};

RunResult solve(const Instance& inst, const SolverConfig& cfg);
RunResult solve(const Instance& inst, const SolverConfig& cfg, const Prep& prep);

}  // namespace tsp
