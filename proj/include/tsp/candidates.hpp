#pragma once

#include "tsp/onetree.hpp"
#include "tsp/tsplib.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tsp {

inline constexpr int kDefaultCandidates = 5;

struct Candidate {
  int j;
  double q;
};

/// Per-city candidate lists with learnable Q-values. Lists are kept in
/// non-increasing q order lazily: writes mark a city dirty and the next
/// read re-sorts. Ties break toward the smaller city index.
class QTable {
 public:
  QTable() = default;
  explicit QTable(int n) : lists_(n), dirty_(n, 0) {}

  int size() const { return static_cast<int>(lists_.size()); }

  /// Sorted candidate list for city i.
  const std::vector<Candidate>& list(int i);

  /// Largest Q among i's candidates, 0 if the list is empty.
  double max_q(int i);

  std::optional<double> lookup(int i, int j) const;

  /// Replaces Q(i,j). Writing a pair that is not stored is counted and
  /// otherwise ignored: the pair left the candidate set and updates to
  /// it have nowhere to land.
  void set_q(int i, int j, double q);

  void seed(int i, std::vector<Candidate> entries);

  std::int64_t missed_writes() const { return missed_writes_; }

 private:
  std::vector<std::vector<Candidate>> lists_;
  std::vector<char> dirty_;
  std::int64_t missed_writes_ = 0;
};

/// Floor for the denominator of the initial Q-value, for coincident
/// cities where both alpha and distance are 0.
inline constexpr double kInitQDenomFloor = 1e-6;

/// Initial Q(i,j) = w / (alpha(i,j) + d(i,j)), keeping the K best
/// candidates per city out of the alpha neighborhood.
QTable init_q(const Instance& inst, const AlphaTable& alpha, const Penalties& pen,
              int K = kDefaultCandidates);

/// Candidate lists ordered by plain alpha nearness instead: ascending
/// alpha (ties by distance, then index), with Q set to the negated rank
/// so that greedy selection walks the list in alpha order. Used as the
/// non-learning baseline.
QTable init_alpha_ranked(const Instance& inst, const AlphaTable& alpha,
                         int K = kDefaultCandidates);

}  // namespace tsp
