#include "tsp/solver.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace tsp {

namespace {

/// Bound on tree nodes committed per episode, guarding against
/// pathological branching on clustered instances.
constexpr int kEpisodeBudget = 100000;

/// Per-step probability that tour construction keeps following the
/// incumbent. Below 1 the trials stay diverse instead of rebuilding
/// the same tour.
constexpr double kGuideBias = 0.90;

/// Trials without improvement before construction starts ignoring the
/// incumbent, and the spacing of those cold trials afterwards. Both
/// scale with n: small instances recover from a restart within a trial
/// or two, while on large ones a cold trial rarely beats the incumbent
/// and mostly costs time.
int stagnation_start(int n) { return std::max(2, n / 16); }
int stagnation_period(int n) { return std::max(2, n / 32); }

/// A committed step along one chain: action a taken at state s with
/// reward r, the chain continuing from follower f.
struct PathStep {
  int s, a;
  double r;
  int f;
};

struct EpisodeCtx {
  const Tour& t;
  QTable& qt;
  const Policy& pol;
  const Instance& inst;
  const Penalties& pen;
  std::mt19937_64& rng;
  int p1 = 0;
  MoveState banked;
  std::int64_t g_star = 0;
  int budget = kEpisodeBudget;
  std::vector<PathStep> path;         // chain currently walked
  std::vector<PathStep> banked_path;  // chain of the banked close
  std::vector<PathStep> first_path;   // first chain walked to its end
  bool first_done = false;
};

/// Depth-first walk of the chain tree under ms. Candidates are visited
/// in epsilon-greedy draw order, each with both usable sides of the
/// second endpoint; every chain with positive running gain is explored
/// and the best feasible close over the whole tree is banked.
void search_chains(EpisodeCtx& cx, const MoveState& ms) {
  if (ms.k() >= 2) {
    const std::int64_t cg = close_gain_scaled(ms, cx.inst, cx.pen);
    if (cg > cx.g_star && is_feasible_close(ms, cx.t)) {
      cx.g_star = cg;
      cx.banked = ms;
      cx.banked_path = cx.path;
    }
  }
  if (ms.k() < kMaxKOpt) {
    const int s = ms.last();
    std::vector<int> excluded;
    while (cx.budget > 0) {
      auto pick = select_action(cx.qt, s, excluded, cx.pol.eps, cx.rng, cx.pol.counters);
      if (!pick) break;
      const int a = *pick;
      excluded.push_back(a);
      if (ms.in_chain(a) || cx.t.has_edge(s, a) || ms.extension_gain(cx.inst, cx.pen, a) <= 0)
        continue;
      auto [u, v] = cx.t.neighbors(a);
      if (cx.rng() & 1) std::swap(u, v);
      // visit the side whose chain could close profitably first
      MoveState first, second;
      std::int64_t score_first = std::numeric_limits<std::int64_t>::min();
      for (int nb : {u, v}) {
        if (ms.in_chain(nb)) continue;
        MoveState probe = ms;
        probe.extend(cx.inst, cx.pen, a, nb);
        std::int64_t score = std::numeric_limits<std::int64_t>::min() + 1;
        const std::int64_t cg = close_gain_scaled(probe, cx.inst, cx.pen);
        if (cg > 0 && is_feasible_close(probe, cx.t)) score = cg;
        if (first.p.empty()) {
          first = std::move(probe);
          score_first = score;
        } else if (score > score_first) {
          second = std::move(first);
          first = std::move(probe);
        } else {
          second = std::move(probe);
        }
      }
      for (MoveState* child : {&first, &second}) {
        if (child->p.empty() || cx.budget <= 0) continue;
        --cx.budget;
        const int prev = ms.k() > 1 ? ms.p[ms.p.size() - 2] : -1;
        const double r = reward(cx.inst, cx.pen, prev, s, a, ms.k() == 1, cx.p1);
        cx.path.push_back({s, a, r, child->last()});
        search_chains(cx, *child);
        cx.path.pop_back();
      }
    }
  }
  if (!cx.first_done) {
    cx.first_path = cx.path;
    cx.first_done = true;
  }
}

/// The trajectory a learning episode trains on: the chain behind the
/// applied move, or the first fully walked chain when nothing was.
void learn_from_path(EpisodeCtx& cx) {
  const std::vector<PathStep>& steps =
      cx.banked_path.empty() ? cx.first_path : cx.banked_path;
  if (steps.empty()) return;
  const int last = static_cast<int>(steps.size()) - 1;
  if (cx.pol.method == kQLearning) {
    for (const PathStep& st : steps)
      update_q_learning(cx.qt, st.s, st.a, st.r, st.f, cx.pol.cfg, cx.pol.counters);
  } else if (cx.pol.method == kSarsa) {
    for (int i = 0; i <= last; ++i) {
      const int a_next = i < last ? steps[i + 1].a : -1;
      update_sarsa(cx.qt, steps[i].s, steps[i].a, steps[i].r, steps[i].f, a_next, cx.pol.cfg,
                   cx.pol.counters);
    }
  } else {
    Episode ep;
    ep.trajectory.reserve(steps.size());
    for (const PathStep& st : steps) ep.trajectory.push_back({st.s, st.a, st.r});
    update_monte_carlo(cx.qt, ep, cx.pol.counters);
  }
}

/// One reinforced k-opt episode from the directed edge (p1, p2): a
/// depth-first search over candidate chains that banks the best
/// feasible close and applies it when positive. Mutates t only then;
/// touched then receives the chain cities of the applied move.
bool run_episode(Tour& t, int p1, int p2, QTable& qt, const Policy& pol,
                 const Instance& inst, const Penalties& pen, std::mt19937_64& rng,
                 std::vector<int>* touched = nullptr) {
  EpisodeCtx cx{t, qt, pol, inst, pen, rng};
  cx.p1 = p1;
  search_chains(cx, MoveState::start(p1, p2));
  if (pol.learn) learn_from_path(cx);
  if (cx.g_star <= 0) return false;
  apply_move(t, cx.banked);
  if (touched) *touched = cx.banked.p;
  return true;
}

/// Exchange of two adjacent segments, both kept in orientation. This
/// reconnection is unreachable for sequential chains, so it runs as a
/// separate pass once they stall. Added edges come from the candidate
/// lists of their endpoints.
std::optional<Tour> patch_pass(const Tour& t, QTable& qt, const Instance& inst) {
  const int n = t.n();
  std::int64_t best = 0;
  int bi = -1, bj = -1, bk = -1;
  for (int i = 0; i + 2 < n; ++i) {
    const int a = t.at(i);
    const int b = t.at(i + 1);
    for (const Candidate& cd : qt.list(a)) {
      const int pj = t.position(cd.j);
      const int j = pj - 1;
      if (j <= i || j > n - 2) continue;
      const int c = t.at(j);
      const int d = cd.j;
      const std::int64_t base = static_cast<std::int64_t>(inst.dist(a, b)) +
                                inst.dist(c, d) - inst.dist(a, d);
      for (const Candidate& ce : qt.list(b)) {
        const int k = t.position(ce.j);
        if (k < pj || k >= n) continue;
        const int e = ce.j;
        const int f = t.at((k + 1) % n);
        const std::int64_t gain =
            base + inst.dist(e, f) - inst.dist(e, b) - inst.dist(c, f);
        if (gain > best) {
          best = gain;
          bi = i;
          bj = j;
          bk = k;
        }
      }
    }
  }
  if (best <= 0) return std::nullopt;
  std::vector<int> order;
  order.reserve(n);
  for (int idx = 0; idx <= bi; ++idx) order.push_back(t.at(idx));
  for (int idx = bj + 1; idx <= bk; ++idx) order.push_back(t.at(idx));
  for (int idx = bi + 1; idx <= bj; ++idx) order.push_back(t.at(idx));
  for (int idx = bk + 1; idx < n; ++idx) order.push_back(t.at(idx));
  return Tour(order);
}

/// Episode scheduling over a queue of active cities. A successful move
/// reactivates the cities on its chain and retries the same city, so
/// effort concentrates where the tour last changed. Stops once no
/// active city yields a move, or after one move under single_pass.
void optimize_tour(Tour& t, QTable& qt, const Policy& pol, const Instance& inst,
                   const Penalties& pen, std::mt19937_64& rng, SearchStats* stats,
                   const Deadline& deadline, bool single_pass) {
  const int n = t.n();
  std::vector<int> start(n);
  std::iota(start.begin(), start.end(), 0);
  std::shuffle(start.begin(), start.end(), rng);
  std::deque<int> active(start.begin(), start.end());
  std::vector<char> inq(n, 1);
  std::vector<int> touched;
  while (!active.empty()) {
    if (deadline && std::chrono::steady_clock::now() >= *deadline) return;
    const int c = active.front();
    active.pop_front();
    inq[c] = 0;
    bool moved = true;
    while (moved) {
      moved = false;
      for (const int p2 : {t.next(c), t.prev(c)}) {
        if (stats) ++stats->episodes;
        touched.clear();
        if (!run_episode(t, c, p2, qt, pol, inst, pen, rng, &touched)) continue;
        if (stats) ++stats->moves;
        if (single_pass) return;
        for (const int city : touched) {
          if (inq[city]) continue;
          inq[city] = 1;
          active.push_back(city);
        }
        moved = true;
        break;
      }
    }
  }
}

}  // namespace

Prep prepare(const Instance& inst, const AscentConfig& ascent, int alpha_neighborhood) {
  Prep prep;
  prep.pen = subgradient_ascent(inst, ascent);
  OneTree tree = minimum_one_tree(inst, prep.pen);
  prep.alpha = alpha_values(inst, prep.pen, tree, alpha_neighborhood);
  prep.lower_bound = prep.pen.w();
  return prep;
}

QTable initial_qtable(const Instance& inst, const Prep& prep, Strategy strategy, int K) {
  if (strategy == Strategy::AlphaBaseline) return init_alpha_ranked(inst, prep.alpha, K);
  return init_q(inst, prep.alpha, prep.pen, K);
}

Tour choose_initial_tour(const Instance& inst, QTable& qt, std::mt19937_64& rng,
                         const Tour* guide) {
  const int n = inst.n;
  std::vector<char> visited(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int cur = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  visited[cur] = 1;
  order.push_back(cur);
  for (int step = 1; step < n; ++step) {
    int nxt = -1;
    const std::vector<Candidate>& cands = qt.list(cur);
    if (guide && (rng() >> 11) * 0x1.0p-53 < kGuideBias) {
      for (const Candidate& c : cands) {
        if (!visited[c.j] && guide->has_edge(cur, c.j)) {
          nxt = c.j;
          break;
        }
      }
    }
    if (nxt < 0) {
      int alternatives = 0;
      for (const Candidate& c : cands)
        if (!visited[c.j]) ++alternatives;
      if (alternatives > 0) {
        int pick = static_cast<int>(rng() % static_cast<std::uint64_t>(alternatives));
        for (const Candidate& c : cands) {
          if (!visited[c.j] && pick-- == 0) {
            nxt = c.j;
            break;
          }
        }
      }
    }
    if (nxt < 0) {
      int pick = static_cast<int>(rng() % static_cast<std::uint64_t>(n - step));
      for (int j = 0; j < n; ++j) {
        if (!visited[j] && pick-- == 0) {
          nxt = j;
          break;
        }
      }
    }
    visited[nxt] = 1;
    order.push_back(nxt);
    cur = nxt;
  }
  return Tour(std::move(order));
}

std::optional<Tour> improvement_pass(const Tour& t, QTable& qt, const Policy& pol,
                                     const Instance& inst, const Penalties& pen,
                                     std::mt19937_64& rng, SearchStats* stats,
                                     const Deadline& deadline) {
  const int n = t.n();
  std::vector<std::pair<int, int>> edges;
  edges.reserve(2 * n);
  for (int idx = 0; idx < n; ++idx) {
    const int c = t.at(idx);
    edges.emplace_back(c, t.next(c));
    edges.emplace_back(c, t.prev(c));
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  Tour work = t;
  for (const auto& [p1, p2] : edges) {
    if (deadline && std::chrono::steady_clock::now() >= *deadline) return std::nullopt;
    if (stats) ++stats->episodes;
    if (run_episode(work, p1, p2, qt, pol, inst, pen, rng)) {
      if (stats) ++stats->moves;
      return work;
    }
  }
  return std::nullopt;
}

RunResult solve(const Instance& inst, const SolverConfig& cfg) {
  return solve(inst, cfg, prepare(inst, cfg.ascent, cfg.alpha_neighborhood));
}

RunResult solve(const Instance& inst, const SolverConfig& cfg, const Prep& prep) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.rl.validate();
  const int max_trials = cfg.max_trials > 0 ? cfg.max_trials : inst.n;
  const int max_num = cfg.rl.max_num > 0 ? cfg.rl.max_num : std::max(1, max_trials / 20);
  const bool learn = strategy_learns(cfg.rl.strategy);

  std::mt19937_64 rng(cfg.seed);
  QTable qt = initial_qtable(inst, prep, cfg.rl.strategy, cfg.candidates);
  StrategyState st = initial_strategy_state(cfg.rl.strategy);
  double eps = learn ? cfg.rl.epsilon : 0.0;

  Deadline deadline;
  if (cfg.time_limit)
    deadline = t_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(*cfg.time_limit));

  RunResult res;
  Tour best = choose_initial_tour(inst, qt, rng);
  Length best_len = tour_length(inst, best.order());
  res.initial_length = best_len;
  int since_improve = 0;

  for (int trial = 1; trial <= max_trials; ++trial) {
    res.trials_used = trial;
    if (learn) eps *= cfg.rl.beta;
    const Policy pol{.cfg = cfg.rl,
                     .method = st.m,
                     .eps = eps,
                     .learn = learn,
                     .counters = &res.counters};
    // once guided trials stop paying off, cold starts break the orbit
    // around the incumbent's basin
    const bool cold = trial % 3 == 0;
    Tour better = choose_initial_tour(inst, qt, rng, cold ? nullptr : &best);
    while (true) {
      optimize_tour(better, qt, pol, inst, prep.pen, rng, &res.stats, deadline,
                    cfg.single_pass);
      if (cfg.single_pass) break;
      if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
      auto patched = patch_pass(better, qt, inst);
      if (!patched) break;
      better = std::move(*patched);
    }
    const Length len = tour_length(inst, better.order());
    const bool improved = len < best_len;
    since_improve = improved ? 0 : since_improve + 1;
    // ties move the incumbent sideways so later guided trials start from a
    // different tour of the same length
    if (len <= best_len) {
      best = std::move(better);
      best_len = len;
    }
    step_strategy(st, improved, cfg.rl.strategy, max_num, &res.counters);
    if (inst.known_optimum && best_len == *inst.known_optimum) {
      res.reached_optimum = true;
      if (cfg.stop_at_optimum) break;
    }
    if (deadline && std::chrono::steady_clock::now() >= *deadline) break;
  }

  res.best_tour = std::move(best);
  res.best_length = best_len;
  res.final_epsilon = eps;
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

}  // namespace tsp
