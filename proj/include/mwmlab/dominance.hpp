#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mwmlab/matching.hpp"
#include "mwmlab/policies.hpp"
#include "mwmlab/state.hpp"

namespace mwmlab {

struct SimConfig {
  SystemParams params;
  std::uint64_t horizon = 1;
  std::size_t replications = 1;
  std::uint64_t seed = 42;
  std::vector<PolicyId> policies;
  std::vector<std::string> costs;  // names from registered_costs()
  std::uint64_t record_interval = 1;
  std::optional<QueueState> initial_state;  // zeros when unset

  void validate() const;
  QueueState start_state() const;
};

struct TraceRecord {
  std::size_t replication = 0;
  std::uint64_t slot = 0;
  PolicyId policy = PolicyId::mwm;
  QueueState state;
  Weight mw_index = 0;
  std::vector<double> costs;  // aligned with SimConfig::costs

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ReplicationTrace {
  std::vector<TraceRecord> records;
  // Hash over every sampled connectivity matrix and arrival vector.
  std::uint64_t input_digest = 0;
};

// One slot as seen by an observer: state after the slot and the MW index of
// the matching used in it.
using SlotObserver = std::function<void(std::uint64_t slot, const QueueState&, Weight mw_index)>;

// Simulates slots 1..horizon under `policy` on the coupled sample path of
// (seed, replication). Returns the input digest.
std::uint64_t simulate_path(const SimConfig& config, std::size_t replication, PolicyId policy,
                            const SlotObserver& observer);

// Records every record_interval-th slot.
ReplicationTrace run_replication(const SimConfig& config, std::size_t replication, PolicyId policy);

// All replications for all policies, ordered by (replication, policy).
std::vector<ReplicationTrace> run_all(const SimConfig& config, std::size_t threads = 0);

// -- Coupled dominance report ---------------------------------------------

// Two-sided Wilson score interval for a binomial proportion at level 0.99.
struct ProportionInterval {
  double low = 0.0;
  double high = 1.0;
};
inline constexpr double kConfidenceZ = 2.5758293035489004;  // standard normal 0.995 quantile
ProportionInterval wilson_interval(std::size_t successes, std::size_t trials, double z = kConfidenceZ);

// Empirical Pr(V > r).
double empirical_ccdf(const std::vector<double>& values, double r);

// t = 1, 2, 4, ... up to horizon, plus the horizon itself.
std::vector<std::uint64_t> sampled_slots(std::uint64_t horizon);

struct CcdfPoint {
  std::uint64_t slot = 0;
  double r = 0.0;
  std::size_t policy_index = 0;  // position in SimConfig::policies
  double ccdf = 0.0;
  ProportionInterval ci;
};

struct CostReport {
  std::string cost;
  double r_max = 0.0;
  std::vector<CcdfPoint> points;            // slot-major, then r, then policy
  std::vector<std::vector<double>> means;   // [policy index][sampled slot index]
};

struct DominanceViolation {
  std::string cost;
  std::uint64_t slot = 0;
  double r = 0.0;
  std::size_t baseline_index = 0;
  double mwm_ccdf = 0.0;
  double baseline_ccdf = 0.0;
  ProportionInterval mwm_ci;
  ProportionInterval baseline_ci;
};

struct MeanViolation {
  std::string cost;
  std::uint64_t slot = 0;
  std::size_t baseline_index = 0;
  double mwm_mean = 0.0;
  double baseline_mean = 0.0;
};

struct GrowthCheck {
  std::size_t policy_index = 0;
  double slope = 0.0;       // mean total occupancy per slot over the final quarter
  double mean_level = 0.0;  // mean total occupancy over the final quarter
  bool growing = false;
};

struct DominanceReport {
  std::vector<PolicyId> policies;
  std::size_t reference_index = 0;  // the mwm entry every other policy is compared with
  std::size_t replications = 0;
  std::vector<std::uint64_t> slots;
  std::vector<CostReport> costs;
  std::vector<DominanceViolation> violations;
  std::vector<MeanViolation> mean_violations;
  std::vector<GrowthCheck> growth;
  bool coupling_intact = true;
};

// Requires an mwm entry plus at least one other entry (which may itself be mwm).
DominanceReport coupled_compare(const SimConfig& config, std::size_t threads = 0);

// -- Per-slot order audit ----------------------------------------------------

inline constexpr std::size_t kAuditMaxQueues = 4;
inline constexpr std::uint64_t kAuditMaxHorizon = 50;

struct OrderAuditFailure {
  std::size_t replication = 0;
  std::uint64_t slot = 0;
  QueueState mwm_state;
  QueueState baseline_state;
};

struct OrderAuditReport {
  PolicyId baseline = PolicyId::mwm;
  std::size_t slots_checked = 0;
  std::size_t slots_holding = 0;
  std::size_t slots_skipped = 0;  // baseline occupancy above the search bound
  std::vector<OrderAuditFailure> failures;

  double fraction_holding() const {
    return slots_checked == 0 ? 1.0 : static_cast<double>(slots_holding) / static_cast<double>(slots_checked);
  }
};

// Checks x_mwm(t) preceq_p x_baseline(t) on coupled paths for every slot.
OrderAuditReport per_slot_preceq_audit(const SimConfig& config, PolicyId baseline, std::size_t threads = 0);

// -- Output ------------------------------------------------------------------

void write_trace_header(std::ostream& os, std::size_t queues);
void write_trace_rows(std::ostream& os, const SimConfig& config, const ReplicationTrace& trace);
void write_dominance_csv(std::ostream& os, const DominanceReport& report, const CostReport& cost);
void write_dominance_summary(std::ostream& os, const DominanceReport& report);
void write_audit_report(std::ostream& os, const OrderAuditReport& report);

// Worker count: explicit value, else MWMLAB_THREADS, else hardware concurrency.
std::size_t resolve_threads(std::size_t requested = 0);

}  // namespace mwmlab
