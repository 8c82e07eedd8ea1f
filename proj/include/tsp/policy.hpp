#pragma once

#include "tsp/candidates.hpp"
#include "tsp/onetree.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace tsp {

enum class Strategy {
  VSR,            // cycle Q-learning -> Sarsa -> Monte Carlo on stagnation
  QOnly,
  SarsaOnly,
  MCOnly,
  TD,             // cycle Q-learning <-> Sarsa
  FixQ,           // initial Q kept fixed, greedy traversal
  AlphaBaseline,  // plain alpha-ordered candidates, greedy traversal
};

const char* strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

/// Whether the strategy runs any Q updates at all.
inline bool strategy_learns(Strategy s) {
  return s != Strategy::FixQ && s != Strategy::AlphaBaseline;
}

struct RLConfig {
  double epsilon = 0.4;
  double beta = 0.99;
  double lambda = 0.1;
  double gamma = 0.9;
  Strategy strategy = Strategy::VSR;
  int max_num = 0;  // 0: solver derives max_trials / 20

  void validate() const;  // throws std::invalid_argument out of range
};

/// Update methods as numbered by the strategy cycle.
enum Method { kQLearning = 1, kSarsa = 2, kMonteCarlo = 3 };

struct StrategyState {
  int m = kQLearning;
  int num = 0;  // trials since the last improvement
};

StrategyState initial_strategy_state(Strategy s);

/// One (state, action, reward) step of an episode.
struct EpisodeStep {
  int s;
  int a;
  double r;
};

struct Episode {
  std::vector<EpisodeStep> trajectory;
};

struct PolicyCounters {
  std::int64_t q_updates = 0;
  std::int64_t sarsa_updates = 0;
  std::int64_t mc_updates = 0;
  std::int64_t greedy_picks = 0;
  std::int64_t explore_picks = 0;
  std::int64_t method_switches = 0;
};

/// Step reward: penalized cost of the edge removed at this step minus
/// the penalized cost of the edge added. The first step measures the
/// removed edge from p1.
double reward(const Instance& inst, const Penalties& pen, int prev_action, int state,
              int action, bool is_first, int p1);

/// Epsilon-greedy over the candidates of `state`, skipping `excluded`.
/// Greedy takes the highest Q (ties toward the smaller index); with
/// probability eps the pick is uniform over what remains.
std::optional<int> select_action(QTable& qt, int state, const std::vector<int>& excluded,
                                 double eps, std::mt19937_64& rng,
                                 PolicyCounters* counters = nullptr);

void update_q_learning(QTable& qt, int s, int a, double r, int s_next,
                       const RLConfig& cfg, PolicyCounters* counters = nullptr);

/// a_next < 0 marks the terminal step: the bootstrap term is 0.
void update_sarsa(QTable& qt, int s, int a, double r, int s_next, int a_next,
                  const RLConfig& cfg, PolicyCounters* counters = nullptr);

/// Replaces Q of every step by the undiscounted suffix reward sum.
void update_monte_carlo(QTable& qt, const Episode& episode,
                        PolicyCounters* counters = nullptr);

/// Per-trial bookkeeping: improvement resets the stagnation counter;
/// hitting max_num swaps the method for the cycling strategies.
void step_strategy(StrategyState& st, bool improved, Strategy strategy, int max_num,
                   PolicyCounters* counters = nullptr);

}  // namespace tsp
