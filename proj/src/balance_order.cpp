#include "mwmlab/balance_order.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "mwmlab/error.hpp"
#include "mwmlab/format.hpp"
#include "mwmlab/queueing.hpp"

namespace mwmlab {

std::string_view relation_name(OrderRelation r) {
  switch (r) {
    case OrderRelation::reduction:
      return "reduction";
    case OrderRelation::transposition:
      return "transposition";
    case OrderRelation::balancing_interchange:
      return "balancing_interchange";
  }
  return "unknown";
}

std::string_view condition_name(ReallocationCondition c) { return c == ReallocationCondition::c1 ? "C1" : "C2"; }

namespace {

using Vec = std::vector<QueueLength>;

void require_same_length(const QueueState& a, const QueueState& b) {
  if (a.size() != b.size()) throw ContractViolation("queue vectors differ in length");
}

QueueLength sum_of(const Vec& v) { return std::accumulate(v.begin(), v.end(), QueueLength{0}); }

void require_searchable(const QueueState& x) {
  if (x.size() > kMaxSearchQueues) {
    throw GuardViolation("order search limited to N <= " + std::to_string(kMaxSearchQueues) + ", got " +
                         std::to_string(x.size()));
  }
  const QueueLength total = total_occupancy(x);
  if (total > kMaxSearchOccupancy) {
    throw GuardViolation("order search limited to total occupancy <= " + std::to_string(kMaxSearchOccupancy) +
                         ", got " + std::to_string(total));
  }
}

// x_n < x~_n <= x~_m < x_m with a unit moved from m to n.
bool is_unit_balancing(QueueLength from_small, QueueLength to_small, QueueLength from_large, QueueLength to_large) {
  return to_small == from_small + 1 && to_large == from_large - 1 && from_small < to_small && to_small <= to_large &&
         to_large < from_large;
}

// Indices where a and b differ, stopping after three.
std::vector<std::size_t> differing(const QueueState& a, const QueueState& b) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.size() && idx.size() < 3; ++i) {
    if (a[i] != b[i]) idx.push_back(i);
  }
  return idx;
}

Vec sorted_desc(Vec v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double eval_total(const QueueState& x) { return static_cast<double>(total_occupancy(x)); }

double eval_max(const QueueState& x) {
  return x.size() == 0 ? 0.0 : static_cast<double>(*std::max_element(x.begin(), x.end()));
}

double eval_sum_squares(const QueueState& x) {
  double s = 0.0;
  for (QueueLength v : x) s += static_cast<double>(v) * static_cast<double>(v);
  return s;
}

constexpr std::array<CostFunction, 3> kCosts{{
    {"total_occupancy", &eval_total},
    {"max_queue", &eval_max},
    {"sum_of_squares", &eval_sum_squares},
}};

void check_instance(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  if (x_prev.size() != c.queues()) throw ContractViolation("queue state and connectivity disagree on N");
  if (!m.fits(c.queues(), c.servers())) throw ContractViolation("matching does not fit the connectivity matrix");
}

}  // namespace

std::optional<OrderStep> preceq_one(const QueueState& x_tilde, const QueueState& x) {
  require_same_length(x_tilde, x);
  bool dominated = true;
  for (std::size_t i = 0; i < x.size(); ++i) dominated = dominated && x_tilde[i] <= x[i];
  if (dominated) return OrderStep{OrderRelation::reduction, 0, 0};

  const auto idx = differing(x_tilde, x);
  if (idx.size() != 2) return std::nullopt;
  const std::size_t i = idx[0];
  const std::size_t j = idx[1];
  if (x_tilde[i] == x[j] && x_tilde[j] == x[i]) return OrderStep{OrderRelation::transposition, i, j};
  if (is_unit_balancing(x[i], x_tilde[i], x[j], x_tilde[j])) {
    return OrderStep{OrderRelation::balancing_interchange, i, j};
  }
  if (is_unit_balancing(x[j], x_tilde[j], x[i], x_tilde[i])) {
    return OrderStep{OrderRelation::balancing_interchange, j, i};
  }
  return std::nullopt;
}

bool preceq_p(const QueueState& x_tilde, const QueueState& x) {
  require_same_length(x_tilde, x);
  require_searchable(x);
  if (total_occupancy(x_tilde) > total_occupancy(x)) return false;

  // Transpositions make the reachable set closed under permutation, so the
  // search runs over descending-sorted representatives. Single-unit
  // reductions generate every componentwise reduction. States whose total
  // drops below the target's total can never reach it and are pruned.
  const Vec target = sorted_desc(x_tilde.values());
  const QueueLength target_total = sum_of(target);
  std::set<Vec> seen;
  std::deque<Vec> frontier;
  Vec start = sorted_desc(x.values());
  seen.insert(start);
  frontier.push_back(std::move(start));

  auto visit = [&](Vec v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    if (sum_of(v) < target_total) return false;
    if (v == target) return true;
    if (seen.insert(v).second) frontier.push_back(std::move(v));
    return false;
  };

  while (!frontier.empty()) {
    const Vec v = std::move(frontier.front());
    frontier.pop_front();
    if (v == target) return true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > 0) {
        Vec r = v;
        --r[i];
        if (visit(std::move(r))) return true;
      }
      // v is descending, so v[i] >= v[j] for j > i.
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[i] - v[j] >= 2) {
          Vec b = v;
          --b[i];
          ++b[j];
          if (visit(std::move(b))) return true;
        }
      }
    }
  }
  return false;
}

std::vector<QueueState> reachable_below(const QueueState& x) {
  require_searchable(x);
  std::set<Vec> seen{x.values()};
  std::vector<QueueState> order{x};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vec v = order[head].values();
    auto push = [&](Vec w) {
      if (seen.insert(w).second) order.emplace_back(std::move(w));
    };
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > 0) {
        Vec r = v;
        --r[i];
        push(std::move(r));
      }
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (i == j) continue;
        if (i < j && v[i] != v[j]) {
          Vec t = v;
          std::swap(t[i], t[j]);
          push(std::move(t));
        }
        // unit from j (larger) to i (smaller)
        if (v[j] - v[i] >= 2) {
          Vec b = v;
          ++b[i];
          --b[j];
          push(std::move(b));
        }
      }
    }
  }
  return order;
}

QueueLength total_occupancy(const QueueState& x) { return sum_of(x.values()); }

std::span<const CostFunction> registered_costs() { return kCosts; }

const CostFunction* find_cost(std::string_view name) {
  for (const CostFunction& f : kCosts) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::optional<MonotonicityCounterexample> check_monotone(
    const CostFunction& f, std::span<const std::pair<QueueState, QueueState>> pairs) {
  for (const auto& [x_tilde, x] : pairs) {
    if (f.evaluate(x_tilde) > f.evaluate(x)) return MonotonicityCounterexample{f.name, x_tilde, x};
  }
  return std::nullopt;
}

std::optional<ReallocationCondition> classify_reallocation(const QueueState& served, const QueueState& reallocated) {
  require_same_length(served, reallocated);
  bool all_le = true;
  bool some_lt = false;
  for (std::size_t i = 0; i < served.size(); ++i) {
    all_le = all_le && reallocated[i] <= served[i];
    some_lt = some_lt || reallocated[i] < served[i];
  }
  if (all_le && some_lt) return ReallocationCondition::c1;

  const auto idx = differing(reallocated, served);
  if (idx.size() != 2) return std::nullopt;
  const std::size_t i = idx[0];
  const std::size_t j = idx[1];
  if (is_unit_balancing(served[i], reallocated[i], served[j], reallocated[j]) ||
      is_unit_balancing(served[j], reallocated[j], served[i], reallocated[i])) {
    return ReallocationCondition::c2;
  }
  return std::nullopt;
}

std::vector<ReallocationWitness> all_balancing_reallocations(const QueueState& x_prev, const ConnectivityMatrix& c,
                                                             const Matching& m) {
  check_instance(x_prev, c, m);
  const auto candidates = enumerate_matchings(c.queues(), c.servers());
  const QueueState served = serve(x_prev, c, m);
  std::vector<ReallocationWitness> out;
  for (const Matching& alt : candidates) {
    if (auto cond = classify_reallocation(served, serve(x_prev, c, alt))) out.push_back({m, alt, *cond});
  }
  return out;
}

std::optional<ReallocationWitness> find_balancing_reallocation(const QueueState& x_prev,
                                                               const ConnectivityMatrix& c, const Matching& m) {
  check_instance(x_prev, c, m);
  const auto candidates = enumerate_matchings(c.queues(), c.servers());
  const QueueState served = serve(x_prev, c, m);
  for (const Matching& alt : candidates) {
    if (auto cond = classify_reallocation(served, serve(x_prev, c, alt))) return ReallocationWitness{m, alt, *cond};
  }
  return std::nullopt;
}

bool verify_lemma1(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m,
                   const ReallocationWitness& witness) {
  check_instance(x_prev, c, m);
  if (witness.original != m) throw ContractViolation("witness was built for a different matching");
  if (!witness.replacement.fits(c.queues(), c.servers())) throw ContractViolation("witness matching out of range");
  const auto actual = classify_reallocation(serve(x_prev, c, m), serve(x_prev, c, witness.replacement));
  if (actual != witness.condition) throw ContractViolation("witness does not satisfy its claimed condition");
  return matching_weight(x_prev, c, witness.replacement) > matching_weight(x_prev, c, m);
}

bool verify_lemma2_corollary1(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  check_instance(x_prev, c, m);
  const bool below_optimum = matching_weight(x_prev, c, m) < max_weight_value(weight_matrix(x_prev, c));
  const bool has_witness = find_balancing_reallocation(x_prev, c, m).has_value();
  return below_optimum == has_witness;
}

std::optional<std::size_t> distance_to_mwm(const QueueState& x_prev, const ConnectivityMatrix& c,
                                           const Matching& m) {
  check_instance(x_prev, c, m);
  const auto nodes = enumerate_matchings(c.queues(), c.servers());
  const Weight best = max_weight_value(weight_matrix(x_prev, c));
  std::vector<QueueState> served;
  std::vector<Weight> weight;
  served.reserve(nodes.size());
  weight.reserve(nodes.size());
  std::size_t start = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    served.push_back(serve(x_prev, c, nodes[i]));
    weight.push_back(matching_weight(x_prev, c, nodes[i]));
    if (nodes[i] == m) start = i;
  }
  if (start == nodes.size()) throw ContractViolation("matching not found among enumerated matchings");

  std::vector<std::size_t> depth(nodes.size(), nodes.size() + 1);
  std::deque<std::size_t> frontier{start};
  depth[start] = 0;
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    if (weight[i] == best) return depth[i];
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (depth[j] <= nodes.size() || !classify_reallocation(served[i], served[j])) continue;
      depth[j] = depth[i] + 1;
      frontier.push_back(j);
    }
  }
  return std::nullopt;
}

LemmaSweepReport sweep_lemmas(std::size_t queues, std::size_t servers, QueueLength max_length) {
  if (queues == 0 || servers == 0) throw ContractViolation("sweep needs N >= 1 and K >= 1");
  if (max_length < 0) throw ContractViolation("max queue length must be non-negative");
  const auto matchings = enumerate_matchings(queues, servers);  // guards N*K
  const auto t0 = std::chrono::steady_clock::now();
  LemmaSweepReport rep;
  rep.queues = queues;
  rep.servers = servers;
  rep.max_length = max_length;
  constexpr std::size_t kKeptCounterexamples = 10;
  auto note = [&](const QueueState& x, const ConnectivityMatrix& c, const Matching& m, std::string_view check) {
    if (rep.counterexamples.size() < kKeptCounterexamples) rep.counterexamples.push_back({x, c, m, check});
  };

  std::vector<QueueLength> digits(queues, 0);
  const std::uint64_t masks = std::uint64_t{1} << (queues * servers);
  for (;;) {
    const QueueState x(digits);
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      const auto c = ConnectivityMatrix::from_mask(queues, servers, mask);
      for (const Matching& m : matchings) {
        ++rep.instances;
        for (const auto& w : all_balancing_reallocations(x, c, m)) {
          ++rep.witnesses;
          if (!verify_lemma1(x, c, m, w)) {
            ++rep.lemma1_violations;
            note(x, c, m, "lemma1");
          }
        }
        if (!verify_lemma2_corollary1(x, c, m)) {
          ++rep.biconditional_violations;
          note(x, c, m, "lemma2_corollary1");
        }
        if (auto d = distance_to_mwm(x, c, m)) {
          rep.max_distance = std::max(rep.max_distance, *d);
        } else {
          ++rep.unreachable;
          note(x, c, m, "unreachable");
        }
      }
    }
    std::size_t pos = 0;
    while (pos < queues && digits[pos] == max_length) digits[pos++] = 0;
    if (pos == queues) break;
    ++digits[pos];
  }
  rep.elapsed = std::chrono::steady_clock::now() - t0;
  return rep;
}

void write_sweep_report(std::ostream& os, const LemmaSweepReport& r) {
  os << "sweep N=" << r.queues << " K=" << r.servers << " max_x=" << r.max_length << '\n'
     << "  instances: " << r.instances << '\n'
     << "  reallocation witnesses: " << r.witnesses << '\n'
     << "  lemma1 violations: " << r.lemma1_violations << '\n'
     << "  lemma2/corollary1 violations: " << r.biconditional_violations << '\n'
     << "  unreachable optimum: " << r.unreachable << '\n'
     << "  max distance to optimum: " << r.max_distance << '\n'
     << "  elapsed seconds: " << format_number(r.elapsed.count()) << '\n';
  for (const auto& ce : r.counterexamples) {
    os << "  counterexample [" << ce.check << "] x=(";
    for (std::size_t i = 0; i < ce.x_prev.size(); ++i) os << (i ? "," : "") << ce.x_prev[i];
    os << ") c=[";
    for (std::size_t n = 0; n < ce.c.queues(); ++n) {
      os << (n ? ";" : "");
      for (std::size_t k = 0; k < ce.c.servers(); ++k) os << (ce.c.at(n, k) ? '1' : '0');
    }
    os << "] m={";
    bool first = true;
    for (const Edge& e : ce.m) {
      os << (first ? "" : ",") << '(' << e.queue << ',' << e.server << ')';
      first = false;
    }
    os << "}\n";
  }
}

}  // namespace mwmlab
