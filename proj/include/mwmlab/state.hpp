#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace mwmlab {

using QueueLength = std::int64_t;

// Queue lengths X(t), one non-negative entry per queue.
class QueueState {
 public:
  QueueState() = default;
  explicit QueueState(std::size_t queues) : lengths_(queues, 0) {}
  explicit QueueState(std::vector<QueueLength> lengths);
  QueueState(std::initializer_list<QueueLength> lengths)
      : QueueState(std::vector<QueueLength>(lengths)) {}

  std::size_t size() const { return lengths_.size(); }
  QueueLength operator[](std::size_t n) const { return lengths_[n]; }
  const std::vector<QueueLength>& values() const { return lengths_; }
  auto begin() const { return lengths_.begin(); }
  auto end() const { return lengths_.end(); }

  friend bool operator==(const QueueState&, const QueueState&) = default;
  friend auto operator<=>(const QueueState&, const QueueState&) = default;

 private:
  std::vector<QueueLength> lengths_;
};

// Binary queue-to-server connectivity C(t), rows are queues.
class ConnectivityMatrix {
 public:
  ConnectivityMatrix() = default;
  ConnectivityMatrix(std::size_t queues, std::size_t servers, bool value = false)
      : queues_(queues), servers_(servers), bits_(queues * servers, value ? 1 : 0) {}
  ConnectivityMatrix(std::initializer_list<std::initializer_list<int>> rows);

  static ConnectivityMatrix all_ones(std::size_t queues, std::size_t servers) {
    return {queues, servers, true};
  }
  // Row-major bit pattern: bit (n * servers + k) of `mask` is entry (n, k).
  static ConnectivityMatrix from_mask(std::size_t queues, std::size_t servers,
                                      std::uint64_t mask);

  std::size_t queues() const { return queues_; }
  std::size_t servers() const { return servers_; }
  bool at(std::size_t n, std::size_t k) const { return bits_[n * servers_ + k] != 0; }
  void set(std::size_t n, std::size_t k, bool value) { bits_[n * servers_ + k] = value ? 1 : 0; }

  friend bool operator==(const ConnectivityMatrix&, const ConnectivityMatrix&) = default;

 private:
  std::size_t queues_ = 0;
  std::size_t servers_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Bernoulli arrivals A(t), one entry in {0,1} per queue.
class ArrivalVector {
 public:
  ArrivalVector() = default;
  explicit ArrivalVector(std::size_t queues) : arrivals_(queues, 0) {}
  ArrivalVector(std::initializer_list<int> arrivals);

  std::size_t size() const { return arrivals_.size(); }
  bool operator[](std::size_t n) const { return arrivals_[n] != 0; }
  void set(std::size_t n, bool value) { arrivals_[n] = value ? 1 : 0; }

  friend bool operator==(const ArrivalVector&, const ArrivalVector&) = default;

 private:
  std::vector<std::uint8_t> arrivals_;
};

// Symmetric system: every queue shares lambda, every link shares p.
struct SystemParams {
  std::size_t queues = 1;
  std::size_t servers = 1;
  double p = 0.0;
  double lambda = 0.0;

  void validate() const;
};

}  // namespace mwmlab
