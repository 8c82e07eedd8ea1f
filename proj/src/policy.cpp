#include "tsp/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace tsp {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::VSR: return "vsr";
    case Strategy::QOnly: return "q";
    case Strategy::SarsaOnly: return "sarsa";
    case Strategy::MCOnly: return "mc";
    case Strategy::TD: return "td";
    case Strategy::FixQ: return "fixq";
    case Strategy::AlphaBaseline: return "alpha";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::VSR, Strategy::QOnly, Strategy::SarsaOnly, Strategy::MCOnly,
                     Strategy::TD, Strategy::FixQ, Strategy::AlphaBaseline})
    if (name == strategy_name(s)) return s;
  return std::nullopt;
}

void RLConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must be in (0,1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must be in [0,1]");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must be in (0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in [0,1]");
  if (max_num < 0) throw std::invalid_argument("max_num must be nonnegative");
}

StrategyState initial_strategy_state(Strategy s) {
  switch (s) {
    case Strategy::SarsaOnly: return {kSarsa, 0};
    case Strategy::MCOnly: return {kMonteCarlo, 0};
    default: return {kQLearning, 0};
  }
}

double reward(const Instance& inst, const Penalties& pen, int prev_action, int state,
              int action, bool is_first, int p1) {
  int from = is_first ? p1 : prev_action;
  std::int64_t removed = penalized_cost_scaled(inst, pen.pi, from, state);
  std::int64_t added = penalized_cost_scaled(inst, pen.pi, state, action);
  return static_cast<double>(removed - added) / kPiScale;
}

std::optional<int> select_action(QTable& qt, int state, const std::vector<int>& excluded,
                                 double eps, std::mt19937_64& rng,
                                 PolicyCounters* counters) {
  const auto& list = qt.list(state);
  auto is_excluded = [&](int j) {
    return std::find(excluded.begin(), excluded.end(), j) != excluded.end();
  };

  int available = 0;
  for (const Candidate& c : list)
    if (!is_excluded(c.j)) ++available;
  if (available == 0) return std::nullopt;

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (eps > 0.0 && coin(rng) < eps) {
    std::uniform_int_distribution<int> pick(0, available - 1);
    int want = pick(rng);
    for (const Candidate& c : list)
      if (!is_excluded(c.j) && want-- == 0) {
        if (counters) ++counters->explore_picks;
        return c.j;
      }
  }
  // list is sorted by q descending with index tie-break, so the first
  // non-excluded entry is the greedy argmax
  for (const Candidate& c : list)
    if (!is_excluded(c.j)) {
      if (counters) ++counters->greedy_picks;
      return c.j;
    }
  return std::nullopt;
}

void update_q_learning(QTable& qt, int s, int a, double r, int s_next,
                       const RLConfig& cfg, PolicyCounters* counters) {
  auto q = qt.lookup(s, a);
  if (!q) {
    qt.set_q(s, a, 0);  // records the miss
    return;
  }
  double target = r + cfg.gamma * qt.max_q(s_next);
  qt.set_q(s, a, (1.0 - cfg.lambda) * *q + cfg.lambda * target);
  if (counters) ++counters->q_updates;
}

void update_sarsa(QTable& qt, int s, int a, double r, int s_next, int a_next,
                  const RLConfig& cfg, PolicyCounters* counters) {
  auto q = qt.lookup(s, a);
  if (!q) {
    qt.set_q(s, a, 0);
    return;
  }
  double bootstrap = 0.0;
  if (a_next >= 0) bootstrap = qt.lookup(s_next, a_next).value_or(0.0);
  double target = r + cfg.gamma * bootstrap;
  qt.set_q(s, a, (1.0 - cfg.lambda) * *q + cfg.lambda * target);
  if (counters) ++counters->sarsa_updates;
}

void update_monte_carlo(QTable& qt, const Episode& episode, PolicyCounters* counters) {
  double suffix = 0.0;
  for (auto it = episode.trajectory.rbegin(); it != episode.trajectory.rend(); ++it) {
    suffix += it->r;
    qt.set_q(it->s, it->a, suffix);
    if (counters) ++counters->mc_updates;
  }
}

void step_strategy(StrategyState& st, bool improved, Strategy strategy, int max_num,
                   PolicyCounters* counters) {
  if (improved) {
    st.num = 0;
    return;
  }
  if (++st.num < max_num) return;
  st.num = 0;
  switch (strategy) {
    case Strategy::VSR:
      st.m = st.m % 3 + 1;
      if (counters) ++counters->method_switches;
      break;
    case Strategy::TD:
      st.m = st.m == kQLearning ? kSarsa : kQLearning;
      if (counters) ++counters->method_switches;
      break;
    default:
      break;  // pinned
  }
}

}  // namespace tsp
