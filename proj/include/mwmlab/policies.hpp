#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "mwmlab/matching.hpp"
#include "mwmlab/random.hpp"
#include "mwmlab/state.hpp"

namespace mwmlab {

enum class PolicyId { mwm, random_maximal, greedy_lcq, fixed_order };

std::string_view policy_name(PolicyId id);
std::optional<PolicyId> parse_policy(std::string_view name);
std::span<const PolicyId> all_policies();

// Maximum weight matching on w[n][k] = x_prev[n] * c[n][k].
Matching decide_mwm(const QueueState& x_prev, const ConnectivityMatrix& c);

// Maximal matching over usable edges (connected, nonempty queue) built by
// inserting the edges in a uniformly random order.
Matching decide_random_maximal(const QueueState& x_prev, const ConnectivityMatrix& c, SplitMix64& rng);

// Longest connected queue first (lowest index on ties), matched to its
// lowest-index free connected server, until nothing more fits.
Matching decide_greedy_lcq(const QueueState& x_prev, const ConnectivityMatrix& c);

// Queues in index order, each taking its lowest-index free connected server.
Matching decide_fixed_order(const QueueState& x_prev, const ConnectivityMatrix& c);

// `rng` is only consumed by random_maximal.
Matching decide(PolicyId id, const QueueState& x_prev, const ConnectivityMatrix& c, SplitMix64& rng);

}  // namespace mwmlab
