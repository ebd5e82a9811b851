#include "mwmlab/policies.hpp"

#include <array>
#include <utility>

#include "mwmlab/error.hpp"

namespace mwmlab {

namespace {

constexpr std::array<std::pair<PolicyId, std::string_view>, 4> kPolicies{{
    {PolicyId::mwm, "mwm"},
    {PolicyId::random_maximal, "random_maximal"},
    {PolicyId::greedy_lcq, "greedy_lcq"},
    {PolicyId::fixed_order, "fixed_order"},
}};

constexpr std::array<PolicyId, 4> kPolicyIds{PolicyId::mwm, PolicyId::random_maximal, PolicyId::greedy_lcq,
                                             PolicyId::fixed_order};

void check_dims(const QueueState& x_prev, const ConnectivityMatrix& c) {
  if (x_prev.size() != c.queues()) throw ContractViolation("queue state and connectivity disagree on N");
}

bool usable(const QueueState& x_prev, const ConnectivityMatrix& c, std::size_t n, std::size_t k) {
  return x_prev[n] > 0 && c.at(n, k);
}

}  // namespace

std::string_view policy_name(PolicyId id) {
  for (const auto& [pid, name] : kPolicies) {
    if (pid == id) return name;
  }
  return "unknown";
}

std::optional<PolicyId> parse_policy(std::string_view name) {
  for (const auto& [pid, pname] : kPolicies) {
    if (pname == name) return pid;
  }
  return std::nullopt;
}

std::span<const PolicyId> all_policies() { return kPolicyIds; }

Matching decide_mwm(const QueueState& x_prev, const ConnectivityMatrix& c) {
  check_dims(x_prev, c);
  return max_weight_matching(weight_matrix(x_prev, c));
}

Matching decide_random_maximal(const QueueState& x_prev, const ConnectivityMatrix& c, SplitMix64& rng) {
  check_dims(x_prev, c);
  std::vector<Edge> edges;
  for (std::size_t n = 0; n < c.queues(); ++n) {
    for (std::size_t k = 0; k < c.servers(); ++k) {
      if (usable(x_prev, c, n, k)) edges.push_back({n, k});
    }
  }
  // Fisher-Yates
  for (std::size_t i = edges.size(); i > 1; --i) {
    std::swap(edges[i - 1], edges[rng.below(i)]);
  }
  std::vector<char> queue_used(c.queues(), 0), server_used(c.servers(), 0);
  std::vector<Edge> chosen;
  for (const Edge& e : edges) {
    if (queue_used[e.queue] || server_used[e.server]) continue;
    queue_used[e.queue] = 1;
    server_used[e.server] = 1;
    chosen.push_back(e);
  }
  return Matching(std::move(chosen));
}

Matching decide_greedy_lcq(const QueueState& x_prev, const ConnectivityMatrix& c) {
  check_dims(x_prev, c);
  std::vector<char> queue_used(c.queues(), 0), server_used(c.servers(), 0);
  std::vector<Edge> chosen;
  for (;;) {
    std::optional<Edge> best;
    for (std::size_t n = 0; n < c.queues(); ++n) {
      if (queue_used[n] || x_prev[n] == 0) continue;
      if (best && x_prev[n] <= x_prev[best->queue]) continue;
      for (std::size_t k = 0; k < c.servers(); ++k) {
        if (!server_used[k] && c.at(n, k)) {
          best = Edge{n, k};
          break;
        }
      }
    }
    if (!best) break;
    queue_used[best->queue] = 1;
    server_used[best->server] = 1;
    chosen.push_back(*best);
  }
  return Matching(std::move(chosen));
}

Matching decide_fixed_order(const QueueState& x_prev, const ConnectivityMatrix& c) {
  check_dims(x_prev, c);
  std::vector<char> server_used(c.servers(), 0);
  std::vector<Edge> chosen;
  for (std::size_t n = 0; n < c.queues(); ++n) {
    if (x_prev[n] == 0) continue;
    for (std::size_t k = 0; k < c.servers(); ++k) {
      if (!server_used[k] && c.at(n, k)) {
        server_used[k] = 1;
        chosen.push_back({n, k});
        break;
      }
    }
  }
  return Matching(std::move(chosen));
}

Matching decide(PolicyId id, const QueueState& x_prev, const ConnectivityMatrix& c, SplitMix64& rng) {
  switch (id) {
    case PolicyId::mwm:
      return decide_mwm(x_prev, c);
    case PolicyId::random_maximal:
      return decide_random_maximal(x_prev, c, rng);
    case PolicyId::greedy_lcq:
      return decide_greedy_lcq(x_prev, c);
    case PolicyId::fixed_order:
      return decide_fixed_order(x_prev, c);
  }
  throw ContractViolation("unknown policy");
}

}  // namespace mwmlab
