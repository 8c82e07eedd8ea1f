#include "doctest.h"
#include "oracles.hpp"
#include "tsp/policy.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace tsp;

TEST_CASE("strategy names round trip") {
  for (Strategy s : {Strategy::VSR, Strategy::QOnly, Strategy::SarsaOnly, Strategy::MCOnly,
                     Strategy::TD, Strategy::FixQ, Strategy::AlphaBaseline})
    CHECK(parse_strategy(strategy_name(s)) == s);
  CHECK(!parse_strategy("nope").has_value());
}

TEST_CASE("config validation bounds") {
  RLConfig ok;
  CHECK_NOTHROW(ok.validate());
  RLConfig bad = ok;
  bad.lambda = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.lambda = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.gamma = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("reward substitutes penalized costs") {
  Instance inst;
  inst.metric = Metric::Explicit;
  inst.n = 4;
  // d(0,1)=10 d(1,2)=7 d(2,3)=4 d(1,3)=9
  inst.set_matrix({0, 10, 6, 5, 10, 0, 7, 9, 6, 7, 0, 4, 5, 9, 4, 0});
  Penalties pen = Penalties::zeros(4);

  // first step: C(p1,s0)=d(0,1)=10, C(s0,a0)=d(1,2)=7
  CHECK(reward(inst, pen, -1, 1, 2, true, 0) == doctest::Approx(3));
  // later step: C(a_prev,s)=d(2,3)=4, C(s,a)=d(3,1)=9
  CHECK(reward(inst, pen, 2, 3, 1, false, 0) == doctest::Approx(-5));

  // penalties shift both edge costs
  pen.pi[1] = 2 * kPiScale;
  CHECK(reward(inst, pen, -1, 1, 2, true, 0) == doctest::Approx((10 + 2) - (7 + 2)));
}

TEST_CASE("episode rewards telescope to the move gain") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 8 + static_cast<int>(rng() % 6);
    Instance inst = oracle::random_euclidean(rng, n);
    Penalties pen = Penalties::zeros(n);
    if (trial % 2)
      for (auto& x : pen.pi) x = static_cast<std::int64_t>(rng() % 8000) - 4000;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Tour t(order);
    int p1 = static_cast<int>(rng() % n);
    int p2 = rng() % 2 ? t.next(p1) : t.prev(p1);
    MoveState ms = MoveState::start(p1, p2);

    double reward_sum = 0.0;
    while (ms.k() < kMaxKOpt) {
      std::vector<std::pair<int, int>> options;
      for (int a = 0; a < n; ++a) {
        if (ms.in_chain(a) || t.has_edge(ms.last(), a)) continue;
        for (int nb : {t.prev(a), t.next(a)})
          if (!ms.in_chain(nb)) options.push_back({a, nb});
      }
      if (options.empty()) break;
      auto [a, nb] = options[rng() % options.size()];
      int state = ms.last();
      int prev_action = ms.k() > 1 ? ms.p[ms.p.size() - 2] : -1;
      reward_sum += reward(inst, pen, prev_action, state, a, ms.k() == 1, p1);
      ms.extend(inst, pen, a, nb);
      CHECK(reward_sum ==
            doctest::Approx(static_cast<double>(ms.gain_sum) / kPiScale).epsilon(1e-9));
    }
  }
}

TEST_CASE("greedy selection takes the top q") {
  QTable qt(1);
  qt.seed(0, {{4, 9.0}, {1, 7.0}, {8, 3.0}});
  std::mt19937_64 rng(1);
  CHECK(select_action(qt, 0, {}, 0.0, rng).value() == 4);
  CHECK(select_action(qt, 0, {4}, 0.0, rng).value() == 1);
  CHECK(select_action(qt, 0, {4, 1}, 0.0, rng).value() == 8);
  CHECK(!select_action(qt, 0, {4, 1, 8}, 0.0, rng).has_value());

  QTable empty(1);
  CHECK(!select_action(empty, 0, {}, 0.0, rng).has_value());
}

TEST_CASE("full exploration is close to uniform") {
  QTable qt(1);
  qt.seed(0, {{1, 9.0}, {2, 7.0}, {3, 3.0}, {4, 1.0}});
  std::mt19937_64 rng(99);
  int counts[5] = {0, 0, 0, 0, 0};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[select_action(qt, 0, {}, 1.0, rng).value()];
  // chi-squared against uniform over 4 cells; 16.27 is the 0.1% cut
  double chi2 = 0.0;
  for (int j = 1; j <= 4; ++j) {
    double expected = draws / 4.0;
    chi2 += (counts[j] - expected) * (counts[j] - expected) / expected;
  }
  CHECK(chi2 < 16.27);
}

TEST_CASE("exploration respects exclusions") {
  QTable qt(1);
  qt.seed(0, {{1, 9.0}, {2, 7.0}, {3, 3.0}});
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    int a = select_action(qt, 0, {2}, 1.0, rng).value();
    CHECK(a != 2);
  }
}

TEST_CASE("q-learning update arithmetic") {
  RLConfig cfg;  // lambda 0.1, gamma 0.9
  QTable qt(2);
  qt.seed(0, {{1, 5.0}});
  qt.seed(1, {{0, 4.0}});  // max over s_next = 4

  update_q_learning(qt, 0, 1, 2.0, 1, cfg);
  CHECK(qt.lookup(0, 1).value() == doctest::Approx(5.06));

  // lambda -> 0 leaves q unchanged
  RLConfig frozen = cfg;
  frozen.lambda = 1e-12;
  QTable qt2(2);
  qt2.seed(0, {{1, 5.0}});
  qt2.seed(1, {{0, 4.0}});
  update_q_learning(qt2, 0, 1, 2.0, 1, frozen);
  CHECK(qt2.lookup(0, 1).value() == doctest::Approx(5.0));

  // fixed point: q = r + gamma * maxnext stays put
  QTable qt3(2);
  qt3.seed(0, {{1, 2.0 + 0.9 * 4.0}});
  qt3.seed(1, {{0, 4.0}});
  update_q_learning(qt3, 0, 1, 2.0, 1, cfg);
  CHECK(qt3.lookup(0, 1).value() == doctest::Approx(2.0 + 0.9 * 4.0));

  // missing pair: counted, no insertion
  QTable qt4(2);
  qt4.seed(0, {{1, 5.0}});
  update_q_learning(qt4, 0, 9, 2.0, 1, cfg);
  CHECK(qt4.missed_writes() == 1);
  CHECK(!qt4.lookup(0, 9).has_value());
}

TEST_CASE("sarsa update arithmetic") {
  RLConfig cfg;
  QTable qt(2);
  qt.seed(0, {{1, 5.0}});
  qt.seed(1, {{0, 1.0}});

  update_sarsa(qt, 0, 1, 2.0, 1, 0, cfg);
  CHECK(qt.lookup(0, 1).value() == doctest::Approx(4.79));

  // terminal step: zero bootstrap
  QTable qt2(2);
  qt2.seed(0, {{1, 5.0}});
  update_sarsa(qt2, 0, 1, 2.0, 1, -1, cfg);
  CHECK(qt2.lookup(0, 1).value() == doctest::Approx(0.9 * 5.0 + 0.1 * 2.0));

  // when a_next is the argmax, sarsa equals q-learning
  QTable a(2), b(2);
  for (QTable* q : {&a, &b}) {
    q->seed(0, {{1, 5.0}});
    q->seed(1, {{0, 4.0}, {1, 2.5}});
  }
  update_q_learning(a, 0, 1, 2.0, 1, cfg);
  update_sarsa(b, 0, 1, 2.0, 1, 0, cfg);  // 0 is argmax at state 1
  CHECK(a.lookup(0, 1).value() == doctest::Approx(b.lookup(0, 1).value()));
}

TEST_CASE("monte carlo replaces with suffix sums") {
  QTable qt(3);
  qt.seed(0, {{1, 100.0}});
  qt.seed(1, {{2, 100.0}});
  qt.seed(2, {{0, 100.0}});
  Episode ep;
  ep.trajectory = {{0, 1, 2.0}, {1, 2, -1.0}, {2, 0, 3.0}};
  update_monte_carlo(qt, ep);
  CHECK(qt.lookup(0, 1).value() == doctest::Approx(4.0));
  CHECK(qt.lookup(1, 2).value() == doctest::Approx(2.0));
  CHECK(qt.lookup(2, 0).value() == doctest::Approx(3.0));

  // idempotent on the same episode
  update_monte_carlo(qt, ep);
  CHECK(qt.lookup(0, 1).value() == doctest::Approx(4.0));

  // single step episode
  QTable single(2);
  single.seed(0, {{1, 9.0}});
  Episode one;
  one.trajectory = {{0, 1, -2.5}};
  update_monte_carlo(single, one);
  CHECK(single.lookup(0, 1).value() == doctest::Approx(-2.5));

  // backward accumulation equals an independent forward recomputation
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    int len = 1 + static_cast<int>(rng() % 4);
    Episode e;
    QTable table(len + 1);
    for (int i = 0; i < len; ++i) {
      table.seed(i, {{i + 1, 0.0}});
      double r = static_cast<double>(static_cast<int>(rng() % 2001) - 1000) / 10.0;
      e.trajectory.push_back({i, i + 1, r});
    }
    update_monte_carlo(table, e);
    for (int t = 0; t < len; ++t) {
      double forward = 0.0;
      for (int u = t; u < len; ++u) forward += e.trajectory[u].r;
      CHECK(table.lookup(t, t + 1).value() == doctest::Approx(forward).epsilon(1e-12));
    }
  }
}

TEST_CASE("strategy stepping follows the cycle") {
  StrategyState st = initial_strategy_state(Strategy::VSR);
  CHECK(st.m == kQLearning);

  // improvements pin the method
  for (int i = 0; i < 10; ++i) step_strategy(st, true, Strategy::VSR, 3);
  CHECK(st.m == kQLearning);
  CHECK(st.num == 0);

  // three stagnant trials -> switch to sarsa
  for (int i = 0; i < 3; ++i) step_strategy(st, false, Strategy::VSR, 3);
  CHECK(st.m == kSarsa);
  CHECK(st.num == 0);
  for (int i = 0; i < 3; ++i) step_strategy(st, false, Strategy::VSR, 3);
  CHECK(st.m == kMonteCarlo);
  // monte carlo wraps back to q-learning
  for (int i = 0; i < 3; ++i) step_strategy(st, false, Strategy::VSR, 3);
  CHECK(st.m == kQLearning);

  StrategyState td = initial_strategy_state(Strategy::TD);
  for (int i = 0; i < 3; ++i) step_strategy(td, false, Strategy::TD, 3);
  CHECK(td.m == kSarsa);
  for (int i = 0; i < 3; ++i) step_strategy(td, false, Strategy::TD, 3);
  CHECK(td.m == kQLearning);

  StrategyState pinned = initial_strategy_state(Strategy::SarsaOnly);
  CHECK(pinned.m == kSarsa);
  for (int i = 0; i < 9; ++i) step_strategy(pinned, false, Strategy::SarsaOnly, 3);
  CHECK(pinned.m == kSarsa);

  StrategyState mc = initial_strategy_state(Strategy::MCOnly);
  CHECK(mc.m == kMonteCarlo);

  // improvement resets the stagnation count mid-window
  StrategyState mixed = initial_strategy_state(Strategy::VSR);
  step_strategy(mixed, false, Strategy::VSR, 3);
  step_strategy(mixed, false, Strategy::VSR, 3);
  step_strategy(mixed, true, Strategy::VSR, 3);
  step_strategy(mixed, false, Strategy::VSR, 3);
  step_strategy(mixed, false, Strategy::VSR, 3);
  CHECK(mixed.m == kQLearning);  // never reached 3 in a row
}
