#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mwmlab/state.hpp"

namespace mwmlab {

using Weight = std::int64_t;

struct Edge {
  std::size_t queue = 0;
  std::size_t server = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Non-negative integer edge weights between N queues (rows) and K servers.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t queues, std::size_t servers);
  WeightMatrix(std::initializer_list<std::initializer_list<Weight>> rows);

  std::size_t queues() const { return queues_; }
  std::size_t servers() const { return servers_; }
  Weight at(std::size_t n, std::size_t k) const { return w_[n * servers_ + k]; }
  void set(std::size_t n, std::size_t k, Weight value);

 private:
  std::size_t queues_;
  std::size_t servers_;
  std::vector<Weight> w_;
};

// Set of (queue, server) pairs where no queue and no server repeats. Pairs
// are kept sorted, so comparison operators order matchings lexicographically.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<Edge> pairs);
  Matching(std::initializer_list<Edge> pairs) : Matching(std::vector<Edge>(pairs)) {}

  const std::vector<Edge>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  bool contains(Edge e) const;
  std::optional<std::size_t> server_of(std::size_t queue) const;
  // True when every queue index is < queues and every server index is < servers.
  bool fits(std::size_t queues, std::size_t servers) const;

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<Edge> pairs_;
};

// w[n][k] = x_prev[n] * c[n][k]
WeightMatrix weight_matrix(const QueueState& x_prev, const ConnectivityMatrix& c);

Weight matching_weight(const WeightMatrix& w, const Matching& m);

// MW index: sum of x_prev[n] * c[n][k] over matched pairs.
Weight matching_weight(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m);

// Optimal objective value only (Hungarian method, no tie-breaking work).
Weight max_weight_value(const WeightMatrix& w);

// Maximum weight matching with zero-weight edges dropped. Among optimal
// matchings the lexicographically smallest sorted pair list is returned.
Matching max_weight_matching(const WeightMatrix& w);

inline constexpr std::size_t kMaxEnumerationEdges = 25;

// Every matching of a complete N x K bipartite graph, the empty one first.
// Throws GuardViolation when queues * servers > kMaxEnumerationEdges.
std::vector<Matching> enumerate_matchings(std::size_t queues, std::size_t servers);

}  // namespace mwmlab
