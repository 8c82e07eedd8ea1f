#include "tsp/candidates.hpp"

#include <algorithm>
#include <cmath>

namespace tsp {

namespace {

void sort_by_q(std::vector<Candidate>& list) {
  std::sort(list.begin(), list.end(), [](const Candidate& a, const Candidate& b) {
    if (a.q != b.q) return a.q > b.q;
    return a.j < b.j;
  });
}

bool contains(const std::vector<Candidate>& list, int j) {
  for (const Candidate& c : list)
    if (c.j == j) return true;
  return false;
}

// The candidate edge set is kept symmetric: if j is listed for i, i is
// listed for j as well, so a few nodes end up with more than K entries.
void symmetrize(std::vector<std::vector<Candidate>>& lists, bool ranked) {
  int n = static_cast<int>(lists.size());
  for (int i = 0; i < n; ++i) {
    for (const Candidate& c : lists[i]) {
      if (contains(lists[c.j], i)) continue;
      double q = ranked ? -static_cast<double>(lists[c.j].size() + 1) : c.q;
      lists[c.j].push_back({i, q});
    }
  }
}

}  // namespace

const std::vector<Candidate>& QTable::list(int i) {
  if (dirty_[i]) {
    sort_by_q(lists_[i]);
    dirty_[i] = 0;
  }
  return lists_[i];
}

double QTable::max_q(int i) {
  const auto& l = list(i);
  return l.empty() ? 0.0 : l.front().q;
}

std::optional<double> QTable::lookup(int i, int j) const {
  for (const Candidate& c : lists_[i])
    if (c.j == j) return c.q;
  return std::nullopt;
}

void QTable::set_q(int i, int j, double q) {
  for (Candidate& c : lists_[i]) {
    if (c.j == j) {
      c.q = q;
      dirty_[i] = 1;
      return;
    }
  }
  ++missed_writes_;
}

void QTable::seed(int i, std::vector<Candidate> entries) {
  lists_[i] = std::move(entries);
  dirty_[i] = 1;
}

QTable init_q(const Instance& inst, const AlphaTable& alpha, const Penalties& pen,
              int K) {
  int n = inst.n;
  QTable qt(n);
  double w = pen.w_scaled > 0 ? pen.w() : 1.0;
  std::vector<std::vector<Candidate>> lists(n);
  for (int i = 0; i < n; ++i) {
    auto& scored = lists[i];
    for (const AlphaEntry& e : alpha.nbrs[i]) {
      double denom = static_cast<double>(e.alpha_scaled) / kPiScale + inst.dist(i, e.j);
      scored.push_back({e.j, w / std::max(denom, kInitQDenomFloor)});
    }
    sort_by_q(scored);
    if (static_cast<int>(scored.size()) > K) scored.resize(K);
  }
  symmetrize(lists, false);
  for (int i = 0; i < n; ++i) qt.seed(i, std::move(lists[i]));
  return qt;
}

QTable init_alpha_ranked(const Instance& inst, const AlphaTable& alpha, int K) {
  int n = inst.n;
  QTable qt(n);
  struct Row {
    std::int64_t a;
    Length d;
    int j;
  };
  std::vector<Row> rows;
  std::vector<std::vector<Candidate>> lists(n);
  for (int i = 0; i < n; ++i) {
    rows.clear();
    for (const AlphaEntry& e : alpha.nbrs[i]) rows.push_back({e.alpha_scaled, inst.dist(i, e.j), e.j});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.a != b.a) return a.a < b.a;
      if (a.d != b.d) return a.d < b.d;
      return a.j < b.j;
    });
    if (static_cast<int>(rows.size()) > K) rows.resize(K);
    for (size_t r = 0; r < rows.size(); ++r)
      lists[i].push_back({rows[r].j, -static_cast<double>(r + 1)});
  }
  symmetrize(lists, true);
  for (int i = 0; i < n; ++i) qt.seed(i, std::move(lists[i]));
  return qt;
}

}  // namespace tsp
