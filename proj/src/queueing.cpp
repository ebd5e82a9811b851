#include "mwmlab/queueing.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "mwmlab/error.hpp"

namespace mwmlab {

QueueState::QueueState(std::vector<QueueLength> lengths) : lengths_(std::move(lengths)) {
  for (QueueLength v : lengths_) {
    if (v < 0) throw ContractViolation("queue length must be non-negative");
  }
}

ConnectivityMatrix::ConnectivityMatrix(std::initializer_list<std::initializer_list<int>> rows)
    : ConnectivityMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t n = 0;
  for (const auto& row : rows) {
    if (row.size() != servers_) throw ContractViolation("ragged connectivity matrix");
    std::size_t k = 0;
    for (int v : row) {
      if (v != 0 && v != 1) throw ContractViolation("connectivity entries must be 0 or 1");
      set(n, k++, v == 1);
    }
    ++n;
  }
}

ConnectivityMatrix ConnectivityMatrix::from_mask(std::size_t queues, std::size_t servers, std::uint64_t mask) {
  ConnectivityMatrix c(queues, servers);
  for (std::size_t i = 0; i < queues * servers; ++i) c.bits_[i] = (mask >> i) & 1U;
  return c;
}

ArrivalVector::ArrivalVector(std::initializer_list<int> arrivals) {
  for (int v : arrivals) {
    if (v != 0 && v != 1) throw ContractViolation("arrivals must be 0 or 1");
    arrivals_.push_back(static_cast<std::uint8_t>(v));
  }
}

void SystemParams::validate() const {
  if (queues < 1) throw ContractViolation("queues must be >= 1");
  if (servers < 1) throw ContractViolation("servers must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("p must lie in [0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractViolation("lambda must lie in [0,1]");
}

QueueState serve(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  if (x_prev.size() != c.queues()) throw ContractViolation("queue state and connectivity disagree on N");
  if (!m.fits(c.queues(), c.servers())) throw ContractViolation("matching does not fit the connectivity matrix");
  std::vector<QueueLength> next = x_prev.values();
  // A matching holds each queue at most once, so at most one unit leaves.
  for (const Edge& e : m) {
    if (c.at(e.queue, e.server) && next[e.queue] > 0) --next[e.queue];
  }
  return QueueState(std::move(next));
}

QueueState step(const QueueState& x_prev, const ConnectivityMatrix& c, const ArrivalVector& a,
                const Matching& m) {
  if (a.size() != x_prev.size()) throw ContractViolation("arrival vector and queue state disagree on N");
  std::vector<QueueLength> next = serve(x_prev, c, m).values();
  for (std::size_t n = 0; n < next.size(); ++n) {
    if (!a[n]) continue;
    if (next[n] == std::numeric_limits<QueueLength>::max()) {
      throw std::overflow_error("queue " + std::to_string(n) + " length overflow");
    }
    ++next[n];
  }
  return QueueState(std::move(next));
}

ConnectivityMatrix sample_connectivity(const SystemParams& params, const CounterStream& stream,
                                       std::uint64_t slot) {
  ConnectivityMatrix c(params.queues, params.servers);
  for (std::size_t n = 0; n < params.queues; ++n) {
    for (std::size_t k = 0; k < params.servers; ++k) c.set(n, k, stream.bernoulli(params.p, slot, n, k));
  }
  return c;
}

ArrivalVector sample_arrivals(const SystemParams& params, const CounterStream& stream, std::uint64_t slot) {
  ArrivalVector a(params.queues);
  for (std::size_t n = 0; n < params.queues; ++n) a.set(n, stream.bernoulli(params.lambda, slot, n));
  return a;
}

}  // namespace mwmlab
