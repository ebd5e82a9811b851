#include "mwmlab/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "mwmlab/balance_order.hpp"
#include "mwmlab/error.hpp"
#include "mwmlab/format.hpp"
#include "mwmlab/queueing.hpp"
#include "mwmlab/random.hpp"
#include "parallel.hpp"

namespace mwmlab {

void SimConfig::validate() const {
  params.validate();
  if (horizon < 1) throw ContractViolation("horizon must be >= 1");
  if (replications < 1) throw ContractViolation("replications must be >= 1");
  if (policies.empty()) throw ContractViolation("at least one policy is required");
  if (record_interval < 1) throw ContractViolation("record_interval must be >= 1");
  for (const auto& name : costs) {
    if (!find_cost(name)) throw ContractViolation("unknown cost function: " + name);
  }
  if (initial_state && initial_state->size() != params.queues) {
    throw ContractViolation("initial state has " + std::to_string(initial_state->size()) + " entries, expected " +
                            std::to_string(params.queues));
  }
}

QueueState SimConfig::start_state() const { return initial_state ? *initial_state : QueueState(params.queues); }

namespace {

// Folds the bits of C(t) and A(t) into the running digest.
std::uint64_t fold_inputs(std::uint64_t digest, std::uint64_t slot, const ConnectivityMatrix& c,
                          const ArrivalVector& a) {
  digest = combine(digest, slot);
  std::uint64_t word = 1;
  auto push = [&](bool bit) {
    word = (word << 1) | (bit ? 1U : 0U);
    if (word >> 62) {
      digest = combine(digest, word);
      word = 1;
    }
  };
  for (std::size_t n = 0; n < c.queues(); ++n) {
    for (std::size_t k = 0; k < c.servers(); ++k) push(c.at(n, k));
  }
  for (std::size_t n = 0; n < a.size(); ++n) push(a[n]);
  return combine(digest, word);
}

std::vector<const CostFunction*> resolve_costs(const SimConfig& config) {
  std::vector<const CostFunction*> out;
  for (const auto& name : config.costs) out.push_back(find_cost(name));
  return out;
}

}  // namespace

std::uint64_t simulate_path(const SimConfig& config, std::size_t replication, PolicyId policy,
                            const SlotObserver& observer) {
  const PathStreams streams = PathStreams::for_replication(config.seed, replication);
  QueueState x = config.start_state();
  std::uint64_t digest = 0;
  // Order within a slot: observe X(t-1), draw C(t), decide, serve, draw A(t), add.
  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    const ConnectivityMatrix c = sample_connectivity(config.params, streams.connectivity, t);
    SplitMix64 rng = streams.policy_rng(t);
    const Matching m = decide(policy, x, c, rng);
    const Weight mw = matching_weight(x, c, m);
    const ArrivalVector a = sample_arrivals(config.params, streams.arrivals, t);
    try {
      x = step(x, c, a, m);
    } catch (const std::overflow_error& e) {
      throw std::overflow_error(std::string(e.what()) + " at slot " + std::to_string(t) + ", replication " +
                                std::to_string(replication) + ", policy " + std::string(policy_name(policy)));
    }
    digest = fold_inputs(digest, t, c, a);
    if (observer) observer(t, x, mw);
  }
  return digest;
}

ReplicationTrace run_replication(const SimConfig& config, std::size_t replication, PolicyId policy) {
  config.validate();
  const auto costs = resolve_costs(config);
  ReplicationTrace trace;
  trace.input_digest = simulate_path(config, replication, policy, [&](std::uint64_t t, const QueueState& x, Weight mw) {
    if (t % config.record_interval != 0) return;
    TraceRecord rec{replication, t, policy, x, mw, {}};
    rec.costs.reserve(costs.size());
    for (const CostFunction* f : costs) rec.costs.push_back(f->evaluate(x));
    trace.records.push_back(std::move(rec));
  });
  return trace;
}

std::vector<ReplicationTrace> run_all(const SimConfig& config, std::size_t threads) {
  config.validate();
  const std::size_t policies = config.policies.size();
  std::vector<ReplicationTrace> out(config.replications * policies);
  detail::parallel_for(out.size(), resolve_threads(threads), [&](std::size_t i) {
    out[i] = run_replication(config, i / policies, config.policies[i % policies]);
  });
  return out;
}

ProportionInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

double empirical_ccdf(const std::vector<double>& values, double r) {
  if (values.empty()) return 0.0;
  const auto above = std::count_if(values.begin(), values.end(), [r](double v) { return v > r; });
  return static_cast<double>(above) / static_cast<double>(values.size());
}

std::vector<std::uint64_t> sampled_slots(std::uint64_t horizon) {
  std::vector<std::uint64_t> slots;
  for (std::uint64_t t = 1; t <= horizon; t *= 2) {
    slots.push_back(t);
    if (t > horizon / 2) break;
  }
  if (slots.empty() || slots.back() != horizon) slots.push_back(horizon);
  return slots;
}

namespace {

// What one (replication, policy) run contributes to the report.
struct RunSummary {
  std::vector<std::vector<double>> values;  // [cost][sampled slot]
  std::uint64_t digest = 0;
  double tail_slope = 0.0;
  double tail_level = 0.0;
};

RunSummary summarize_run(const SimConfig& config, const std::vector<const CostFunction*>& costs,
                         const std::vector<std::uint64_t>& slots, std::size_t replication, PolicyId policy) {
  RunSummary s;
  s.values.assign(costs.size(), {});
  const std::uint64_t tail = std::max<std::uint64_t>(1, config.horizon / 4);
  const std::uint64_t tail_start = config.horizon - tail + 1;
  double n = 0, st = 0, sy = 0, sty = 0, stt = 0;
  std::size_t next = 0;
  s.digest = simulate_path(config, replication, policy, [&](std::uint64_t t, const QueueState& x, Weight) {
    if (next < slots.size() && slots[next] == t) {
      for (std::size_t ci = 0; ci < costs.size(); ++ci) s.values[ci].push_back(costs[ci]->evaluate(x));
      ++next;
    }
    if (t >= tail_start) {
      const double tt = static_cast<double>(t - tail_start);
      const double y = static_cast<double>(total_occupancy(x));
      n += 1;
      st += tt;
      sy += y;
      sty += tt * y;
      stt += tt * tt;
    }
  });
  const double var = stt - st * st / n;
  s.tail_slope = var > 0 ? (sty - st * sy / n) / var : 0.0;
  s.tail_level = sy / n;
  return s;
}

// Nearest-rank 99th percentile.
double percentile99(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

DominanceReport coupled_compare(const SimConfig& config, std::size_t threads) {
  config.validate();
  const auto ref_it = std::find(config.policies.begin(), config.policies.end(), PolicyId::mwm);
  if (ref_it == config.policies.end()) throw ContractViolation("coupled comparison needs the mwm policy");
  if (config.policies.size() < 2) throw ContractViolation("coupled comparison needs at least one baseline");
  if (config.costs.empty()) throw ContractViolation("coupled comparison needs at least one cost function");

  DominanceReport rep;
  rep.policies = config.policies;
  rep.reference_index = static_cast<std::size_t>(ref_it - config.policies.begin());
  rep.replications = config.replications;
  rep.slots = sampled_slots(config.horizon);
  const auto costs = resolve_costs(config);
  const std::size_t P = config.policies.size();
  const std::size_t R = config.replications;
  const std::size_t S = rep.slots.size();

  std::vector<RunSummary> runs(R * P);
  detail::parallel_for(runs.size(), resolve_threads(threads), [&](std::size_t i) {
    runs[i] = summarize_run(config, costs, rep.slots, i / P, config.policies[i % P]);
  });
  auto run = [&](std::size_t r, std::size_t p) -> const RunSummary& { return runs[r * P + p]; };

  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t p = 1; p < P; ++p) rep.coupling_intact = rep.coupling_intact && run(r, p).digest == run(r, 0).digest;
  }

  for (std::size_t p = 0; p < P; ++p) {
    GrowthCheck g{p, 0.0, 0.0, false};
    for (std::size_t r = 0; r < R; ++r) {
      g.slope += run(r, p).tail_slope;
      g.mean_level += run(r, p).tail_level;
    }
    g.slope /= static_cast<double>(R);
    g.mean_level /= static_cast<double>(R);
    const double tail = static_cast<double>(std::max<std::uint64_t>(1, config.horizon / 4));
    g.growing = g.slope * tail > std::max(1.0, 0.1 * g.mean_level);
    rep.growth.push_back(g);
  }

  const std::size_t ref = rep.reference_index;
  for (std::size_t ci = 0; ci < costs.size(); ++ci) {
    CostReport cr;
    cr.cost = std::string(costs[ci]->name);
    std::vector<double> all;
    all.reserve(R * P * S);
    for (const auto& rs : runs) all.insert(all.end(), rs.values[ci].begin(), rs.values[ci].end());
    cr.r_max = std::ceil(percentile99(std::move(all)));
    cr.means.assign(P, std::vector<double>(S, 0.0));

    for (std::size_t s = 0; s < S; ++s) {
      std::vector<std::vector<double>> samples(P, std::vector<double>(R));
      for (std::size_t p = 0; p < P; ++p) {
        double sum = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
          samples[p][r] = run(r, p).values[ci][s];
          sum += samples[p][r];
        }
        cr.means[p][s] = sum / static_cast<double>(R);
      }
      for (std::size_t p = 0; p < P; ++p) {
        if (p != ref && cr.means[ref][s] > cr.means[p][s]) {
          rep.mean_violations.push_back({cr.cost, rep.slots[s], p, cr.means[ref][s], cr.means[p][s]});
        }
      }
      for (double r = 0.0; r <= cr.r_max; r += 1.0) {
        std::vector<CcdfPoint> row(P);
        for (std::size_t p = 0; p < P; ++p) {
          const auto above = static_cast<std::size_t>(
              std::count_if(samples[p].begin(), samples[p].end(), [r](double v) { return v > r; }));
          row[p] = {rep.slots[s], r, p, static_cast<double>(above) / static_cast<double>(R), wilson_interval(above, R)};
        }
        for (std::size_t p = 0; p < P; ++p) {
          if (p == ref) continue;
          // MWM's whole interval sits above the baseline's.
          if (row[ref].ci.low > row[p].ci.high) {
            rep.violations.push_back(
                {cr.cost, rep.slots[s], r, p, row[ref].ccdf, row[p].ccdf, row[ref].ci, row[p].ci});
          }
        }
        cr.points.insert(cr.points.end(), row.begin(), row.end());
      }
    }
    rep.costs.push_back(std::move(cr));
  }
  return rep;
}

OrderAuditReport per_slot_preceq_audit(const SimConfig& config, PolicyId baseline, std::size_t threads) {
  config.validate();
  if (config.params.queues > kAuditMaxQueues) {
    throw GuardViolation("order audit limited to N <= " + std::to_string(kAuditMaxQueues));
  }
  if (config.horizon > kAuditMaxHorizon) {
    throw GuardViolation("order audit limited to horizon <= " + std::to_string(kAuditMaxHorizon));
  }
  std::vector<OrderAuditReport> parts(config.replications);
  detail::parallel_for(parts.size(), resolve_threads(threads), [&](std::size_t r) {
    std::vector<QueueState> mwm_path, base_path;
    simulate_path(config, r, PolicyId::mwm,
                  [&](std::uint64_t, const QueueState& x, Weight) { mwm_path.push_back(x); });
    simulate_path(config, r, baseline, [&](std::uint64_t, const QueueState& x, Weight) { base_path.push_back(x); });
    OrderAuditReport& part = parts[r];
    for (std::size_t i = 0; i < mwm_path.size(); ++i) {
      if (total_occupancy(base_path[i]) > kMaxSearchOccupancy) {
        ++part.slots_skipped;
        continue;
      }
      ++part.slots_checked;
      if (preceq_p(mwm_path[i], base_path[i])) {
        ++part.slots_holding;
      } else {
        part.failures.push_back({r, i + 1, mwm_path[i], base_path[i]});
      }
    }
  });
  OrderAuditReport rep;
  rep.baseline = baseline;
  for (auto& part : parts) {
    rep.slots_checked += part.slots_checked;
    rep.slots_holding += part.slots_holding;
    rep.slots_skipped += part.slots_skipped;
    rep.failures.insert(rep.failures.end(), part.failures.begin(), part.failures.end());
  }
  return rep;
}

namespace {

void write_state(std::ostream& os, const QueueState& x) {
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << format_number(x[i]);
  os << ')';
}

}  // namespace

void write_trace_header(std::ostream& os, std::size_t queues) {
  os << "replication,slot,policy,cost_name,cost_value,mw_index";
  for (std::size_t n = 0; n < queues; ++n) os << ",x_" << n;
  os << '\n';
}

void write_trace_rows(std::ostream& os, const SimConfig& config, const ReplicationTrace& trace) {
  for (const TraceRecord& rec : trace.records) {
    std::string tail;
    for (QueueLength v : rec.state) tail += "," + format_number(v);
    for (std::size_t ci = 0; ci < config.costs.size(); ++ci) {
      os << format_number(static_cast<std::uint64_t>(rec.replication)) << ',' << format_number(rec.slot) << ','
         << policy_name(rec.policy) << ',' << config.costs[ci] << ',' << format_number(rec.costs[ci]) << ','
         << format_number(rec.mw_index) << tail << '\n';
    }
  }
}

void write_dominance_csv(std::ostream& os, const DominanceReport& report, const CostReport& cost) {
  os << "slot,r,policy,ccdf,ci_low,ci_high\n";
  for (const CcdfPoint& pt : cost.points) {
    os << format_number(pt.slot) << ',' << format_number(pt.r) << ',' << policy_name(report.policies[pt.policy_index])
       << ',' << format_number(pt.ccdf) << ',' << format_number(pt.ci.low) << ',' << format_number(pt.ci.high)
       << '\n';
  }
}

void write_dominance_summary(std::ostream& os, const DominanceReport& report) {
  const auto name = [&](std::size_t p) { return policy_name(report.policies[p]); };
  os << "replications: " << report.replications << '\n';
  os << "sampled slots:";
  for (auto t : report.slots) os << ' ' << t;
  os << '\n';
  os << "coupling intact: " << (report.coupling_intact ? "yes" : "NO") << '\n';
  for (const CostReport& cr : report.costs) {
    os << "cost " << cr.cost << " (r_max " << format_number(cr.r_max) << ")\n";
    for (std::size_t p = 0; p < report.policies.size(); ++p) {
      os << "  mean " << name(p) << ':';
      for (double m : cr.means[p]) os << ' ' << format_number(m);
      os << '\n';
    }
  }
  for (const GrowthCheck& g : report.growth) {
    os << "tail growth " << name(g.policy_index) << ": slope " << format_number(g.slope) << " level "
       << format_number(g.mean_level) << (g.growing ? " GROWING (load may exceed capacity)" : "") << '\n';
  }
  os << "mean violations: " << report.mean_violations.size() << '\n';
  for (const auto& v : report.mean_violations) {
    os << "  " << v.cost << " slot " << v.slot << " vs " << name(v.baseline_index) << ": mwm "
       << format_number(v.mwm_mean) << " > " << format_number(v.baseline_mean) << '\n';
  }
  os << "ccdf violations: " << report.violations.size() << '\n';
  for (const auto& v : report.violations) {
    os << "  " << v.cost << " slot " << v.slot << " r " << format_number(v.r) << " vs " << name(v.baseline_index)
       << ": mwm " << format_number(v.mwm_ccdf) << " [" << format_number(v.mwm_ci.low) << ','
       << format_number(v.mwm_ci.high) << "] baseline " << format_number(v.baseline_ccdf) << " ["
       << format_number(v.baseline_ci.low) << ',' << format_number(v.baseline_ci.high) << "]\n";
  }
}

void write_audit_report(std::ostream& os, const OrderAuditReport& report) {
  os << "baseline: " << policy_name(report.baseline) << '\n'
     << "slots checked: " << report.slots_checked << '\n'
     << "slots holding: " << report.slots_holding << '\n'
     << "slots skipped (occupancy above search bound): " << report.slots_skipped << '\n'
     << "fraction holding: " << format_number(report.fraction_holding()) << '\n'
     << "failures: " << report.failures.size() << '\n';
  for (const auto& f : report.failures) {
    os << "  replication " << f.replication << " slot " << f.slot << " mwm ";
    write_state(os, f.mwm_state);
    os << " baseline ";
    write_state(os, f.baseline_state);
    os << '\n';
  }
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MWMLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace mwmlab
