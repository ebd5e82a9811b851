#include <doctest.h>

#include <random>

#include "mwmlab/policies.hpp"
#include "oracles.hpp"

using namespace mwmlab;

namespace {

bool respects_canonical_form(const QueueState& x, const ConnectivityMatrix& c, const Matching& m) {
  for (const Edge& e : m) {
    if (!c.at(e.queue, e.server) || x[e.queue] == 0) return false;
  }
  return m.fits(c.queues(), c.servers());
}

bool has_usable_edge(const QueueState& x, const ConnectivityMatrix& c) {
  for (std::size_t n = 0; n < c.queues(); ++n)
    for (std::size_t k = 0; k < c.servers(); ++k)
      if (c.at(n, k) && x[n] > 0) return true;
  return false;
}

// No usable edge can be added without reusing a queue or server.
bool is_maximal(const QueueState& x, const ConnectivityMatrix& c, const Matching& m) {
  for (std::size_t n = 0; n < c.queues(); ++n) {
    for (std::size_t k = 0; k < c.servers(); ++k) {
      if (!c.at(n, k) || x[n] == 0 || m.server_of(n)) continue;
      bool server_taken = false;
      for (const Edge& e : m) server_taken = server_taken || e.server == k;
      if (!server_taken) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("policy names round-trip") {
  for (PolicyId id : all_policies()) CHECK(parse_policy(policy_name(id)) == id);
  CHECK_FALSE(parse_policy("lcq").has_value());
}

TEST_CASE("decide_mwm examples") {
  CHECK(decide_mwm(QueueState{2, 1}, ConnectivityMatrix{{1, 1}, {1, 1}}) == Matching{{0, 0}, {1, 1}});
  CHECK(matching_weight(QueueState{2, 1}, ConnectivityMatrix::all_ones(2, 2),
                        decide_mwm(QueueState{2, 1}, ConnectivityMatrix::all_ones(2, 2))) == 3);
  CHECK(decide_mwm(QueueState{0, 0}, ConnectivityMatrix::all_ones(2, 2)).empty());

  const QueueState x{5, 1};
  const ConnectivityMatrix c{{0, 1}, {1, 1}};
  CHECK(decide_mwm(x, c) == Matching{{0, 1}, {1, 0}});
  CHECK(matching_weight(x, c, decide_mwm(x, c)) == 6);
  CHECK(oracle::brute_max_weight(weight_matrix(x, c)).weight == 6);
}

TEST_CASE("decide_random_maximal examples") {
  SplitMix64 rng(11);
  CHECK(decide_random_maximal(QueueState{1, 1}, ConnectivityMatrix(2, 2), rng).empty());
  for (int i = 0; i < 50; ++i) {
    CHECK(decide_random_maximal(QueueState{1, 1}, ConnectivityMatrix{{1, 0}, {0, 1}}, rng) ==
          Matching{{0, 0}, {1, 1}});
  }
  int diagonal = 0;
  constexpr int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Matching m = decide_random_maximal(QueueState{1, 1}, ConnectivityMatrix::all_ones(2, 2), rng);
    REQUIRE(m.size() == 2);
    diagonal += m == Matching{{0, 0}, {1, 1}};
  }
  CHECK(std::abs(diagonal / double(draws) - 0.5) <= 0.02);
}

TEST_CASE("decide_greedy_lcq examples") {
  CHECK(decide_greedy_lcq(QueueState{5, 1}, ConnectivityMatrix{{0, 1}, {1, 1}}) == Matching{{0, 1}, {1, 0}});
  CHECK(decide_greedy_lcq(QueueState{0, 0}, ConnectivityMatrix::all_ones(2, 2)).empty());
  CHECK(decide_greedy_lcq(QueueState{3, 3}, ConnectivityMatrix{{1, 0}, {1, 0}}) == Matching{{0, 0}});
  // Longest queue goes first even when it has the higher index.
  CHECK(decide_greedy_lcq(QueueState{1, 4}, ConnectivityMatrix{{1, 0}, {1, 0}}) == Matching{{1, 0}});
}

TEST_CASE("decide_fixed_order examples") {
  const QueueState x{1, 5};
  const ConnectivityMatrix c{{1, 1}, {1, 0}};
  CHECK(decide_fixed_order(x, c) == Matching{{0, 0}});
  CHECK(decide_mwm(x, c) == Matching{{0, 1}, {1, 0}});
  CHECK(decide_fixed_order(QueueState{0, 1}, ConnectivityMatrix::all_ones(2, 2)) == Matching{{1, 0}});
  CHECK(decide_fixed_order(QueueState{1, 1}, ConnectivityMatrix(2, 2)).empty());
}

TEST_CASE("every policy output is a canonical matching; mwm attains the largest MW index") {
  // Exhaustive over N, K <= 3 and queue lengths <= 3.
  SplitMix64 rng(99);
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t k = 1; k <= 3; ++k) {
      std::vector<QueueLength> digits(n, 0);
      for (;;) {
        const QueueState x(digits);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * k)); ++mask) {
          const auto c = ConnectivityMatrix::from_mask(n, k, mask);
          const Matching best = decide_mwm(x, c);
          const Weight best_mw = matching_weight(x, c, best);
          REQUIRE(best_mw == oracle::brute_max_weight(weight_matrix(x, c)).weight);
          for (PolicyId id : all_policies()) {
            const Matching m = decide(id, x, c, rng);
            REQUIRE(respects_canonical_form(x, c, m));
            REQUIRE(matching_weight(x, c, m) <= best_mw);
            if (id != PolicyId::mwm) {
              REQUIRE(is_maximal(x, c, m));
              REQUIRE(has_usable_edge(x, c) == !m.empty());
            }
            ++checked;
          }
        }
        std::size_t pos = 0;
        while (pos < n && digits[pos] == 3) digits[pos++] = 0;
        if (pos == n) break;
        ++digits[pos];
      }
    }
  }
  CHECK(checked > 100000);
}

TEST_CASE("decide_mwm is permutation-equivariant when the optimum is unique") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<QueueLength> len(0, 9);
  int compared = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 4, k = 2;
    std::vector<QueueLength> xs(n);
    for (auto& v : xs) v = len(gen);
    ConnectivityMatrix c(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) c.set(i, j, bit(gen));
    const QueueState x(xs);
    // Count optimal canonical matchings; relabeling is exact only without ties.
    const Weight best = matching_weight(x, c, decide_mwm(x, c));
    int optima = 0;
    for (const auto& pairs : oracle::all_matchings_by_subsets(n, k)) {
      bool positive = true;
      for (const Edge& e : pairs) positive = positive && c.at(e.queue, e.server) && x[e.queue] > 0;
      if (positive && matching_weight(x, c, Matching(pairs)) == best) ++optima;
    }
    if (optima != 1) continue;
    std::vector<std::size_t> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<QueueLength> px(n);
    ConnectivityMatrix pc(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      px[perm[i]] = xs[i];
      for (std::size_t j = 0; j < k; ++j) pc.set(perm[i], j, c.at(i, j));
    }
    std::vector<Edge> expected;
    for (const Edge& e : decide_mwm(x, c)) expected.push_back({perm[e.queue], e.server});
    CHECK(decide_mwm(QueueState(px), pc) == Matching(expected));
    ++compared;
  }
  CHECK(compared > 200);
}
