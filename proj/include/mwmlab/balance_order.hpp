#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "mwmlab/matching.hpp"
#include "mwmlab/state.hpp"

namespace mwmlab {

// -- Balance order on queue-length vectors ----------------------------------

enum class OrderRelation {
  reduction,              // componentwise <=
  transposition,          // two distinct entries swapped
  balancing_interchange,  // one unit moved from a larger entry to a smaller one
};

std::string_view relation_name(OrderRelation r);

// `first`/`second` are the two indices for transposition and interchange
// (for an interchange, `first` gains a unit and `second` loses one).
struct OrderStep {
  OrderRelation kind = OrderRelation::reduction;
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const OrderStep&, const OrderStep&) = default;
};

// Single-relation check: does x_tilde precede x by one reduction,
// transposition or balancing interchange? Reduction is reported first.
std::optional<OrderStep> preceq_one(const QueueState& x_tilde, const QueueState& x);

inline constexpr QueueLength kMaxSearchOccupancy = 24;
inline constexpr std::size_t kMaxSearchQueues = 6;

// Transitive closure of preceq_one, decided by breadth-first search from x.
// Throws GuardViolation if sum(x) > kMaxSearchOccupancy or size > kMaxSearchQueues.
bool preceq_p(const QueueState& x_tilde, const QueueState& x);

// Every vector reachable from x (x included), in breadth-first order.
// Same guard as preceq_p.
std::vector<QueueState> reachable_below(const QueueState& x);

// -- Cost functions monotone in the balance order ----------------------------

QueueLength total_occupancy(const QueueState& x);

struct CostFunction {
  std::string_view name;
  double (*evaluate)(const QueueState&);
};

// Cost functions admitted to the monotone class. Each entry is checked against
// generated order pairs in the test suite before it may stay listed here.
std::span<const CostFunction> registered_costs();
const CostFunction* find_cost(std::string_view name);

// First registered cost violating f(x_tilde) <= f(x) on the given pairs.
struct MonotonicityCounterexample {
  std::string_view cost;
  QueueState x_tilde;
  QueueState x;
};
std::optional<MonotonicityCounterexample> check_monotone(
    const CostFunction& f, std::span<const std::pair<QueueState, QueueState>> pairs);

// -- Balancing server reallocations ------------------------------------------

enum class ReallocationCondition { c1, c2 };

std::string_view condition_name(ReallocationCondition c);

// Compares post-service vectors: C1 is "<= everywhere and < somewhere", C2 is a
// unit balancing transfer between exactly two queues.
std::optional<ReallocationCondition> classify_reallocation(const QueueState& served,
                                                           const QueueState& reallocated);

struct ReallocationWitness {
  Matching original;
  Matching replacement;
  ReallocationCondition condition = ReallocationCondition::c1;
};

// Desk-scale searches below enumerate every matching (N * K <= 25).

std::optional<ReallocationWitness> find_balancing_reallocation(const QueueState& x_prev,
                                                               const ConnectivityMatrix& c,
                                                               const Matching& m);

std::vector<ReallocationWitness> all_balancing_reallocations(const QueueState& x_prev,
                                                             const ConnectivityMatrix& c,
                                                             const Matching& m);

// Strict MW increase from witness.original to witness.replacement. Throws
// ContractViolation if the witness does not satisfy its claimed condition.
bool verify_lemma1(const QueueState& x_prev, const ConnectivityMatrix& c, const Matching& m,
                   const ReallocationWitness& witness);

// MW(m) below the optimum <=> some balancing reallocation of m exists.
bool verify_lemma2_corollary1(const QueueState& x_prev, const ConnectivityMatrix& c,
                              const Matching& m);

// Fewest balancing reallocations leading from m to a matching of maximal MW
// index; nullopt if no such chain exists.
std::optional<std::size_t> distance_to_mwm(const QueueState& x_prev, const ConnectivityMatrix& c,
                                           const Matching& m);

// -- Exhaustive sweep ---------------------------------------------------------

struct LemmaCounterexample {
  QueueState x_prev;
  ConnectivityMatrix c;
  Matching m;
  std::string_view check;  // "lemma1", "lemma2_corollary1", "unreachable"
};

struct LemmaSweepReport {
  std::size_t queues = 0;
  std::size_t servers = 0;
  QueueLength max_length = 0;
  std::size_t instances = 0;          // (x_prev, c, m) triples
  std::size_t witnesses = 0;          // balancing reallocations checked for lemma 1
  std::size_t lemma1_violations = 0;
  std::size_t biconditional_violations = 0;
  std::size_t unreachable = 0;        // no reallocation chain reaches an optimum
  std::size_t max_distance = 0;
  std::chrono::duration<double> elapsed{};
  std::vector<LemmaCounterexample> counterexamples;  // first few, for the report

  std::size_t violations() const { return lemma1_violations + biconditional_violations + unreachable; }
};

// All x_prev in {0..max_length}^N, all 2^(N*K) connectivity matrices, all
// matchings. Throws GuardViolation if N * K exceeds the enumeration bound.
LemmaSweepReport sweep_lemmas(std::size_t queues, std::size_t servers, QueueLength max_length);

void write_sweep_report(std::ostream& os, const LemmaSweepReport& report);

}  // namespace mwmlab
