// mwmlab: simulate, verify-lemmas, audit-order, solve-matching.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mwmlab/balance_order.hpp"
#include "mwmlab/config.hpp"
#include "mwmlab/dominance.hpp"
#include "mwmlab/error.hpp"
#include "mwmlab/matching.hpp"

namespace {

using namespace mwmlab;

constexpr int kExitViolations = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Raw flag values, keyed like config-file keys.
struct SimFlags {
  std::string config_path;
  std::map<std::string, std::vector<std::string>> values;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "key = value config file; flags override it");
    add(app, "--queues", "queues", "number of queues N");
    add(app, "--servers", "servers", "number of servers K");
    add(app, "--p", "p", "connectivity probability");
    add(app, "--lambda", "lambda", "arrival probability");
    add(app, "--horizon", "horizon", "slots per replication");
    add(app, "--replications", "replications", "replication count");
    add(app, "--seed", "seed", "base seed");
    add(app, "--policy", "policy", "policy name (repeatable)");
    add(app, "--cost", "cost", "cost function name (repeatable)");
    add(app, "--record-interval", "record_interval", "slots between trace records");
    add(app, "--initial-state", "initial_state", "comma-separated X(0)");
  }

  void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option(flag, values[key], help)->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  }

  ParsedConfig resolve() const {
    KeyValues file;
    if (!config_path.empty()) file = read_config_file(config_path);
    KeyValues flags;
    for (const auto& [key, vs] : values) {
      for (const auto& v : vs) flags.emplace_back(key, v);
    }
    return parse_config(file, flags);
  }
};

void echo_defaults(const ParsedConfig& parsed) {
  for (const auto& d : parsed.defaults_applied) std::cout << "default: " << d << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int run_simulate(const SimFlags& flags, const std::string& out_dir) {
  const ParsedConfig parsed = flags.resolve();
  echo_defaults(parsed);
  const SimConfig& cfg = parsed.config;
  std::filesystem::create_directories(out_dir);

  std::ostringstream trace;
  write_trace_header(trace, cfg.params.queues);
  for (const auto& t : run_all(cfg)) write_trace_rows(trace, cfg, t);
  write_file(std::filesystem::path(out_dir) / "trace.csv", trace.str());
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "trace.csv").string() << '\n';

  const bool has_mwm = std::find(cfg.policies.begin(), cfg.policies.end(), PolicyId::mwm) != cfg.policies.end();
  if (!has_mwm || cfg.policies.size() < 2) {
    std::cout << "dominance report skipped: needs mwm and at least one baseline\n";
    return 0;
  }
  const DominanceReport report = coupled_compare(cfg);
  for (const CostReport& cr : report.costs) {
    std::ostringstream csv;
    write_dominance_csv(csv, report, cr);
    const auto path = std::filesystem::path(out_dir) / ("dominance_" + cr.cost + ".csv");
    write_file(path, csv.str());
    std::cout << "wrote " << path.string() << '\n';
  }
  std::ostringstream summary;
  write_dominance_summary(summary, report);
  write_file(std::filesystem::path(out_dir) / "summary.txt", summary.str());
  std::cout << summary.str();
  return 0;
}

int run_verify(std::size_t max_n, std::size_t max_k, QueueLength max_x, const std::string& report_path) {
  std::ostringstream out;
  std::size_t violations = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (std::size_t k = 1; k <= max_k; ++k) {
      const LemmaSweepReport rep = sweep_lemmas(n, k, max_x);
      write_sweep_report(out, rep);
      violations += rep.violations();
    }
  }
  out << violations << " violations\n";
  std::cout << out.str();
  if (!report_path.empty()) write_file(report_path, out.str());
  return violations == 0 ? 0 : kExitViolations;
}

int run_audit(const SimFlags& flags, const std::string& baseline_name, const std::string& report_path) {
  const auto baseline = parse_policy(baseline_name);
  if (!baseline) throw ConfigError("baseline", "baseline: unknown policy '" + baseline_name + "'");
  const ParsedConfig parsed = flags.resolve();
  echo_defaults(parsed);
  const OrderAuditReport rep = per_slot_preceq_audit(parsed.config, *baseline);
  std::ostringstream out;
  write_audit_report(out, rep);
  std::cout << out.str();
  if (!report_path.empty()) write_file(report_path, out.str());
  return 0;
}

int run_solve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const WeightMatrix w = parse_weight_matrix(buf.str());
  const Matching m = max_weight_matching(w);
  std::cout << "pairs:";
  for (const Edge& e : m) std::cout << " (" << e.queue << ',' << e.server << ')';
  std::cout << "\nweight: " << matching_weight(w, m) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-weight matching scheduling lab"};
  app.require_subcommand(1);

  SimFlags sim_flags;
  std::string out_dir = ".";
  auto* simulate = app.add_subcommand("simulate", "coupled simulation, trace and dominance CSVs");
  sim_flags.attach(*simulate);
  simulate->add_option("--out-dir", out_dir, "directory for trace.csv, dominance_*.csv, summary.txt");

  std::size_t max_n = 2, max_k = 2;
  QueueLength max_x = 3;
  std::string verify_report;
  auto* verify = app.add_subcommand("verify-lemmas", "exhaustive reallocation lemma sweep");
  verify->add_option("--max-n", max_n, "largest queue count")->check(CLI::Range(1, 6));
  verify->add_option("--max-k", max_k, "largest server count")->check(CLI::Range(1, 6));
  verify->add_option("--max-x", max_x, "largest queue length")->check(CLI::NonNegativeNumber);
  verify->add_option("--report", verify_report, "also write the report to this file");

  SimFlags audit_flags;
  std::string baseline = "fixed_order";
  std::string audit_report;
  auto* audit = app.add_subcommand("audit-order", "per-slot balance-order audit of mwm against a baseline");
  audit_flags.attach(*audit);
  audit->add_option("--baseline", baseline, "baseline policy")->capture_default_str();
  audit->add_option("--report", audit_report, "also write the report to this file");

  std::string matrix_path;
  auto* solve = app.add_subcommand("solve-matching", "maximum weight matching of a weight matrix file");
  solve->add_option("file", matrix_path, "first line 'N K', then N rows of K integers")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim_flags, out_dir);
    if (*verify) return run_verify(max_n, max_k, max_x, verify_report);
    if (*audit) return run_audit(audit_flags, baseline, audit_report);
    if (*solve) return run_solve(matrix_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GuardViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
