#pragma once

#include <cstdint>

#include "mwmlab/matching.hpp"
#include "mwmlab/random.hpp"
#include "mwmlab/state.hpp"

namespace mwmlab {

// Queue lengths after service and before arrivals:
// x'[n] = max(x_prev[n] - sum_k c[n][k] * I[n][k], 0).
QueueState serve(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m);

// One slot of the queue evolution: serve, then add this slot's arrivals.
// Throws std::overflow_error if a queue length would exceed QueueLength.
QueueState step(const QueueState& x_prev, const ConnectivityMatrix& c, const ArrivalVector& a,
                const Matching& m);

// C(t) for slot t, entry (n, k) drawn at stream position (t, n, k).
ConnectivityMatrix sample_connectivity(const SystemParams& params, const CounterStream& stream,
                                       std::uint64_t slot);

// A(t) for slot t, entry n drawn at stream position (t, n).
ArrivalVector sample_arrivals(const SystemParams& params, const CounterStream& stream,
                              std::uint64_t slot);

}  // namespace mwmlab
