#include "doctest.h"
#include "oracles.hpp"
#include "tsp/candidates.hpp"

#include <random>

using namespace tsp;

namespace {

std::string data_path(const std::string& rel) { return std::string(TSP_DATA_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("initial q substitutes w over alpha plus d") {
  // One city with two hand-built neighbors.
  Instance inst;
  inst.metric = Metric::Explicit;
  inst.n = 3;
  inst.set_matrix({0, 4, 10, 4, 0, 10, 10, 10, 0});
  AlphaTable alpha;
  alpha.nbrs = {{{1, 0}, {2, 5 * kPiScale}}, {{0, 0}, {2, 0}}, {{0, 0}, {1, 0}}};
  Penalties pen = Penalties::zeros(3);
  pen.w_scaled = 100 * kPiScale;

  QTable qt = init_q(inst, alpha, pen);
  CHECK(qt.lookup(0, 1).value() == doctest::Approx(100.0 / 4));   // alpha 0, d 4
  CHECK(qt.lookup(0, 2).value() == doctest::Approx(100.0 / 15));  // alpha 5, d 10
  CHECK(qt.list(0).front().j == 1);  // lower alpha sorts first at equal d+w
}

TEST_CASE("zero denominator is floored") {
  Instance inst;
  inst.metric = Metric::Euc2D;
  inst.n = 3;
  inst.xs = {0, 0, 5};
  inst.ys = {0, 0, 0};  // cities 0 and 1 coincide
  inst.finalize();
  AlphaTable alpha;
  alpha.nbrs = {{{1, 0}, {2, 0}}, {{0, 0}, {2, 0}}, {{0, 0}, {1, 0}}};
  Penalties pen = Penalties::zeros(3);
  pen.w_scaled = 10 * kPiScale;
  QTable qt = init_q(inst, alpha, pen);
  CHECK(qt.lookup(0, 1).value() == doctest::Approx(10.0 / 1e-6));
  CHECK(std::isfinite(qt.lookup(0, 1).value()));
}

TEST_CASE("top K selection matches the exhaustive rule") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 9;
    Instance inst = oracle::random_euclidean(rng, n);
    Penalties pen = subgradient_ascent(inst);
    OneTree t = minimum_one_tree(inst, pen);
    AlphaTable alpha = alpha_values(inst, pen, t, n - 1);
    QTable qt = init_q(inst, alpha, pen, 5);

    // Reference: score all n-1 neighbors directly from Eq. 7 inputs.
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<double, int>> all;
      for (const auto& e : alpha.nbrs[i]) {
        double denom =
            std::max(static_cast<double>(e.alpha_scaled) / kPiScale + inst.dist(i, e.j), 1e-6);
        all.push_back({pen.w() / denom, e.j});
      }
      std::sort(all.begin(), all.end(), [](auto& a, auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      const auto& kept = qt.list(i);
      REQUIRE(kept.size() == 5);
      for (size_t r = 0; r < kept.size(); ++r) {
        CHECK(kept[r].j == all[r].second);
        CHECK(kept[r].q == doctest::Approx(all[r].first));
      }
    }
  }
}

TEST_CASE("initial q values are positive and sorted") {
  Instance inst = load_instance(data_path("tsplib/eil51.tsp"));
  Penalties pen = subgradient_ascent(inst);
  OneTree t = minimum_one_tree(inst, pen);
  AlphaTable alpha = alpha_values(inst, pen, t);
  QTable qt = init_q(inst, alpha, pen);
  for (int i = 0; i < inst.n; ++i) {
    const auto& l = qt.list(i);
    REQUIRE(l.size() == 5);
    for (size_t r = 0; r < l.size(); ++r) {
      CHECK(l[r].q > 0);
      CHECK(l[r].j != i);
      if (r) CHECK(l[r - 1].q >= l[r].q);
      for (size_t s = r + 1; s < l.size(); ++s) CHECK(l[r].j != l[s].j);
    }
  }
}

TEST_CASE("small n uses all remaining cities") {
  std::mt19937_64 rng(5);
  Instance inst = oracle::random_euclidean(rng, 4);
  Penalties pen = Penalties::zeros(4);
  pen.w_scaled = kPiScale;
  OneTree t = minimum_one_tree(inst, pen);
  AlphaTable alpha = alpha_values(inst, pen, t, 3);
  QTable qt = init_q(inst, alpha, pen, 5);
  for (int i = 0; i < 4; ++i) CHECK(qt.list(i).size() == 3);
}

TEST_CASE("lookup and set_q round trip") {
  QTable qt(2);
  qt.seed(0, {{1, 7.0}});
  CHECK(qt.lookup(0, 1).value() == 7.0);
  CHECK(!qt.lookup(0, 0).has_value());

  qt.set_q(0, 1, 5.06);
  CHECK(qt.lookup(0, 1).value() == 5.06);

  CHECK(qt.missed_writes() == 0);
  qt.set_q(0, 9, 1.0);  // not a candidate
  CHECK(qt.missed_writes() == 1);
  CHECK(!qt.lookup(0, 9).has_value());
}

TEST_CASE("raising the last candidate reorders the greedy argmax") {
  QTable qt(1);
  qt.seed(0, {{3, 9.0}, {7, 5.0}, {2, 1.0}});
  CHECK(qt.list(0).front().j == 3);
  qt.set_q(0, 2, 50.0);
  CHECK(qt.list(0).front().j == 2);
  CHECK(qt.max_q(0) == 50.0);
}

TEST_CASE("q ties resolve toward the smaller index") {
  QTable qt(1);
  qt.seed(0, {{9, 4.0}, {2, 4.0}, {5, 4.0}});
  const auto& l = qt.list(0);
  CHECK(l[0].j == 2);
  CHECK(l[1].j == 5);
  CHECK(l[2].j == 9);
}

TEST_CASE("scaling all q leaves the argmax unchanged") {
  std::mt19937_64 rng(77);
  Instance inst = oracle::random_euclidean(rng, 9);
  Penalties pen = subgradient_ascent(inst);
  OneTree t = minimum_one_tree(inst, pen);
  AlphaTable alpha = alpha_values(inst, pen, t, 8);
  QTable qt = init_q(inst, alpha, pen);
  QTable scaled = qt;
  for (int i = 0; i < 9; ++i)
    for (const auto& c : qt.list(i)) scaled.set_q(i, c.j, c.q * 3.5);
  for (int i = 0; i < 9; ++i) CHECK(qt.list(i).front().j == scaled.list(i).front().j);
}

TEST_CASE("alpha ranked baseline walks candidates in alpha order") {
  Instance inst = load_instance(data_path("tsplib/berlin52.tsp"));
  Penalties pen = subgradient_ascent(inst);
  OneTree t = minimum_one_tree(inst, pen);
  AlphaTable alpha = alpha_values(inst, pen, t);
  QTable qt = init_alpha_ranked(inst, alpha);
  for (int i = 0; i < inst.n; ++i) {
    const auto& l = qt.list(i);
    REQUIRE(l.size() == 5);
    std::int64_t prev = -1;
    for (size_t r = 0; r < l.size(); ++r) {
      CHECK(l[r].q == -static_cast<double>(r + 1));
      std::int64_t a = -1;
      for (const auto& e : alpha.nbrs[i])
        if (e.j == l[r].j) a = e.alpha_scaled;
      REQUIRE(a >= 0);
      CHECK(a >= prev);
      prev = a;
    }
  }
}
