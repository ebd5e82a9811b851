#include <doctest.h>

#include <limits>
#include <sstream>

#include "mwmlab/balance_order.hpp"
#include "mwmlab/error.hpp"
#include "mwmlab/dominance.hpp"
#include "mwmlab/queueing.hpp"

using namespace mwmlab;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.params = {3, 2, 0.5, 0.3};
  cfg.horizon = 200;
  cfg.replications = 6;
  cfg.seed = 42;
  cfg.policies = {PolicyId::mwm, PolicyId::random_maximal, PolicyId::greedy_lcq, PolicyId::fixed_order};
  for (const auto& f : registered_costs()) cfg.costs.emplace_back(f.name);
  cfg.record_interval = 1;
  return cfg;
}

std::string report_csv(const DominanceReport& rep) {
  std::ostringstream os;
  for (const auto& cr : rep.costs) write_dominance_csv(os, rep, cr);
  write_dominance_summary(os, rep);
  return os.str();
}

}  // namespace

TEST_CASE("run_replication: no arrivals keeps every queue empty") {
  SimConfig cfg = small_config();
  cfg.params.lambda = 0.0;
  for (PolicyId id : all_policies()) {
    const auto trace = run_replication(cfg, 0, id);
    REQUIRE(trace.records.size() == cfg.horizon);
    for (const auto& rec : trace.records) {
      CHECK(rec.state == QueueState(3));
      CHECK(rec.mw_index == 0);
      for (double v : rec.costs) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("run_replication: no connectivity and certain arrivals grows by N per slot") {
  SimConfig cfg = small_config();
  cfg.params = {4, 2, 0.0, 1.0};
  cfg.horizon = 10;
  cfg.costs = {"total_occupancy"};
  for (PolicyId id : all_policies()) {
    const auto trace = run_replication(cfg, 1, id);
    CHECK(trace.records.back().costs[0] == 40.0);
    for (const auto& rec : trace.records) CHECK(rec.costs[0] == static_cast<double>(4 * rec.slot));
  }
}

TEST_CASE("run_replication is deterministic and honours record_interval") {
  SimConfig cfg = small_config();
  cfg.record_interval = 7;
  for (PolicyId id : all_policies()) {
    const auto a = run_replication(cfg, 2, id);
    const auto b = run_replication(cfg, 2, id);
    CHECK(a.records == b.records);
    CHECK(a.input_digest == b.input_digest);
    REQUIRE(a.records.size() == cfg.horizon / 7);
    for (const auto& rec : a.records) CHECK(rec.slot % 7 == 0);
  }
}

TEST_CASE("trace records match an independent re-run of the slot dynamics") {
  const SimConfig cfg = small_config();
  for (PolicyId id : all_policies()) {
    const auto trace = run_replication(cfg, 3, id);
    const PathStreams streams = PathStreams::for_replication(cfg.seed, 3);
    QueueState x(cfg.params.queues);
    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
      const auto c = sample_connectivity(cfg.params, streams.connectivity, t);
      SplitMix64 rng = streams.policy_rng(t);
      const Matching m = decide(id, x, c, rng);
      const Weight mw = matching_weight(x, c, m);
      x = step(x, c, sample_arrivals(cfg.params, streams.arrivals, t), m);
      const auto& rec = trace.records[t - 1];
      REQUIRE(rec.slot == t);
      REQUIRE(rec.state == x);
      REQUIRE(rec.mw_index == mw);
      REQUIRE(rec.costs[0] == static_cast<double>(total_occupancy(x)));
    }
  }
}

TEST_CASE("initial state override") {
  SimConfig cfg = small_config();
  cfg.params.lambda = 0.0;
  cfg.params.p = 0.0;
  cfg.initial_state = QueueState{2, 0, 5};
  const auto trace = run_replication(cfg, 0, PolicyId::mwm);
  CHECK(trace.records.back().state == QueueState{2, 0, 5});
  cfg.initial_state = QueueState{1, 1};
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
}

TEST_CASE("queue overflow aborts with a diagnostic") {
  SimConfig cfg = small_config();
  cfg.params = {1, 1, 0.0, 1.0};
  cfg.horizon = 3;
  cfg.initial_state = QueueState{std::numeric_limits<QueueLength>::max() - 1};
  try {
    (void)run_replication(cfg, 0, PolicyId::mwm);
    FAIL("expected overflow");
  } catch (const std::overflow_error& e) {
    CHECK(std::string(e.what()).find("slot 2") != std::string::npos);
  }
}

TEST_CASE("coupling integrity: every policy reads the same sample path") {
  const SimConfig cfg = small_config();
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    const auto ref = run_replication(cfg, r, PolicyId::mwm).input_digest;
    for (PolicyId id : all_policies()) CHECK(run_replication(cfg, r, id).input_digest == ref);
  }
  CHECK(run_replication(cfg, 0, PolicyId::mwm).input_digest != run_replication(cfg, 1, PolicyId::mwm).input_digest);
  CHECK(coupled_compare(cfg).coupling_intact);
}

TEST_CASE("full connectivity with K >= N makes work-conserving trajectories coincide") {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 3}, {2, 4}}) {
    SimConfig cfg = small_config();
    cfg.params = {n, k, 1.0, 0.6};
    cfg.horizon = 300;
    const auto ref = run_replication(cfg, 0, PolicyId::mwm);
    for (PolicyId id : all_policies()) CHECK(run_replication(cfg, 0, id).records == [&] {
      auto r = ref.records;
      for (auto& rec : r) rec.policy = id;
      return r;
    }());
  }
}

TEST_CASE("N=2, K=2, p=1: mwm and greedy_lcq means coincide") {
  SimConfig cfg = small_config();
  cfg.params = {2, 2, 1.0, 0.1};
  cfg.policies = {PolicyId::mwm, PolicyId::greedy_lcq};
  cfg.horizon = 500;
  cfg.replications = 20;
  const auto rep = coupled_compare(cfg);
  for (const auto& cr : rep.costs) CHECK(cr.means[0] == cr.means[1]);
  CHECK(rep.violations.empty());
}

TEST_CASE("wilson_interval") {
  const auto zero = wilson_interval(0, 10, 1.959963984540054);
  CHECK(zero.low == 0.0);
  CHECK(zero.high == doctest::Approx(0.27753).epsilon(1e-4));
  const auto half = wilson_interval(50, 100, kConfidenceZ);
  CHECK(half.low < 0.5);
  CHECK(half.high > 0.5);
  CHECK(half.low + half.high == doctest::Approx(1.0));
  const auto all = wilson_interval(200, 200);
  CHECK(all.high == 1.0);
  CHECK(all.low == doctest::Approx(200.0 / (200.0 + kConfidenceZ * kConfidenceZ)));
}

TEST_CASE("empirical_ccdf normalization and monotonicity") {
  const std::vector<double> v{0, 0, 1, 3, 3, 7};
  CHECK(empirical_ccdf(v, -1.0) == 1.0);
  CHECK(empirical_ccdf(v, -0.5) == 1.0);
  CHECK(empirical_ccdf(v, 0.0) == doctest::Approx(4.0 / 6));
  CHECK(empirical_ccdf(v, 7.0) == 0.0);
  double prev = 1.0;
  for (double r = -1; r <= 8; r += 0.5) {
    const double c = empirical_ccdf(v, r);
    CHECK(c <= prev);
    prev = c;
  }
}

TEST_CASE("sampled_slots are geometric and end at the horizon") {
  CHECK(sampled_slots(1) == std::vector<std::uint64_t>{1});
  CHECK(sampled_slots(8) == std::vector<std::uint64_t>{1, 2, 4, 8});
  CHECK(sampled_slots(10) == std::vector<std::uint64_t>{1, 2, 4, 8, 10});
  CHECK(sampled_slots(10000).size() == 15);
}

TEST_CASE("coupled_compare: self comparison has identical CCDFs and no violations") {
  SimConfig cfg = small_config();
  cfg.policies = {PolicyId::mwm, PolicyId::mwm};
  const auto rep = coupled_compare(cfg);
  CHECK(rep.violations.empty());
  CHECK(rep.mean_violations.empty());
  for (const auto& cr : rep.costs) {
    CHECK(cr.means[0] == cr.means[1]);
    for (std::size_t i = 0; i + 1 < cr.points.size(); i += 2) CHECK(cr.points[i].ccdf == cr.points[i + 1].ccdf);
  }
}

TEST_CASE("coupled_compare: report invariants") {
  const SimConfig cfg = small_config();
  const auto rep = coupled_compare(cfg);
  REQUIRE(rep.costs.size() == 3);
  for (const auto& cr : rep.costs) {
    CHECK(cr.points.size() == rep.slots.size() * static_cast<std::size_t>(cr.r_max + 1) * cfg.policies.size());
    for (std::size_t i = 0; i < cr.points.size(); ++i) {
      const auto& pt = cr.points[i];
      CHECK(pt.ccdf >= 0.0);
      CHECK(pt.ccdf <= 1.0);
      CHECK(pt.ci.low <= pt.ccdf);
      CHECK(pt.ci.high >= pt.ccdf);
      // Next r for the same (slot, policy) sits P entries later.
      const std::size_t next = i + cfg.policies.size();
      if (next < cr.points.size() && cr.points[next].slot == pt.slot) CHECK(cr.points[next].ccdf <= pt.ccdf);
    }
  }
  for (const auto& g : rep.growth) CHECK_FALSE(g.growing);
}

TEST_CASE("coupled_compare flags growth when a policy is overloaded") {
  SimConfig cfg = small_config();
  cfg.params = {3, 1, 0.5, 0.6};  // arrivals 1.8 per slot, at most one departure
  cfg.horizon = 400;
  cfg.policies = {PolicyId::mwm, PolicyId::fixed_order};
  const auto rep = coupled_compare(cfg);
  for (const auto& g : rep.growth) CHECK(g.growing);
}

TEST_CASE("coupled_compare input validation") {
  SimConfig cfg = small_config();
  cfg.policies = {PolicyId::fixed_order, PolicyId::greedy_lcq};
  CHECK_THROWS_AS(coupled_compare(cfg), ContractViolation);
  cfg.policies = {PolicyId::mwm};
  CHECK_THROWS_AS(coupled_compare(cfg), ContractViolation);
  cfg.policies = {PolicyId::mwm, PolicyId::fixed_order};
  cfg.costs = {"nope"};
  CHECK_THROWS_AS(coupled_compare(cfg), ContractViolation);
}

TEST_CASE("coupled_compare output is identical across thread counts") {
  const SimConfig cfg = small_config();
  const std::string one = report_csv(coupled_compare(cfg, 1));
  CHECK(one == report_csv(coupled_compare(cfg, 3)));
  CHECK(one == report_csv(coupled_compare(cfg, 1)));

  std::ostringstream a, b;
  for (const auto& t : run_all(cfg, 1)) write_trace_rows(a, cfg, t);
  for (const auto& t : run_all(cfg, 4)) write_trace_rows(b, cfg, t);
  CHECK(a.str() == b.str());
}

TEST_CASE("trace CSV layout") {
  SimConfig cfg = small_config();
  cfg.horizon = 2;
  cfg.costs = {"total_occupancy", "max_queue"};
  std::ostringstream os;
  write_trace_header(os, 3);
  write_trace_rows(os, cfg, run_replication(cfg, 0, PolicyId::greedy_lcq));
  const std::string s = os.str();
  CHECK(s.rfind("replication,slot,policy,cost_name,cost_value,mw_index,x_0,x_1,x_2\n", 0) == 0);
  CHECK(s.find("0,1,greedy_lcq,total_occupancy,") != std::string::npos);
  CHECK(s.find(",max_queue,") != std::string::npos);
  CHECK(s.back() == '\n');
}

TEST_CASE("per_slot_preceq_audit") {
  SimConfig cfg = small_config();
  cfg.params = {2, 1, 0.5, 0.2};
  cfg.horizon = 50;
  cfg.replications = 100;

  const auto self = per_slot_preceq_audit(cfg, PolicyId::mwm);
  CHECK(self.failures.empty());
  CHECK(self.slots_checked + self.slots_skipped == 50 * 100);
  CHECK(self.fraction_holding() == 1.0);

  const auto explore = per_slot_preceq_audit(cfg, PolicyId::fixed_order);
  CHECK(explore.fraction_holding() >= 0.0);
  CHECK(explore.fraction_holding() <= 1.0);
  CHECK(explore.slots_holding + explore.failures.size() == explore.slots_checked);
  MESSAGE("mwm vs fixed_order order-audit fraction: " << explore.fraction_holding());

  SimConfig idle = cfg;
  idle.params.lambda = 0.0;
  CHECK(per_slot_preceq_audit(idle, PolicyId::random_maximal).fraction_holding() == 1.0);

  SimConfig wide = cfg;
  wide.params.queues = 5;
  CHECK_THROWS_AS(per_slot_preceq_audit(wide, PolicyId::fixed_order), GuardViolation);
  SimConfig longer = cfg;
  longer.horizon = 51;
  CHECK_THROWS_AS(per_slot_preceq_audit(longer, PolicyId::fixed_order), GuardViolation);
}
