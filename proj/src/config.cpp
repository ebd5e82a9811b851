#include "mwmlab/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mwmlab/balance_order.hpp"
#include "mwmlab/format.hpp"

namespace mwmlab {

namespace {

constexpr std::array<std::string_view, 11> kKeys{"queues",  "servers", "p",      "lambda",        "horizon",
                                                 "replications", "seed", "policy", "cost", "record_interval",
                                                 "initial_state"};
constexpr std::array<std::string_view, 5> kRequired{"queues", "servers", "p", "lambda", "horizon"};
constexpr std::size_t kDefaultReplications = 100;
constexpr std::uint64_t kDefaultSeed = 42;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& key, std::string_view text, T min_value) {
  T value{};
  const auto t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, key + ": expected an integer, got '" + std::string(text) + "'");
  }
  if (value < min_value) {
    throw ConfigError(key, key + ": value " + std::string(t) + " out of range, must be >= " + format_number(static_cast<std::int64_t>(min_value)));
  }
  return value;
}

double parse_probability(const std::string& key, std::string_view text) {
  double value = 0.0;
  const auto t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, key + ": expected a number, got '" + std::string(text) + "'");
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(key, key + ": value " + std::string(t) + " out of range [0,1]");
  }
  return value;
}

}  // namespace

std::vector<std::string_view> config_keys() { return {kKeys.begin(), kKeys.end()}; }
std::vector<std::string_view> required_config_keys() { return {kRequired.begin(), kRequired.end()}; }

KeyValues parse_config_text(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = normalize_key(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", "config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ParsedConfig parse_config(const KeyValues& file_values, const KeyValues& flag_values) {
  // key -> values from the winning source, in order of appearance
  std::map<std::string, std::vector<std::string>> merged;
  auto absorb = [&](const KeyValues& src, std::map<std::string, std::vector<std::string>>& into) {
    for (const auto& [raw_key, value] : src) {
      const std::string key = normalize_key(raw_key);
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
        throw ConfigError(key, "unknown key '" + key + "'");
      }
      into[key].push_back(value);
    }
  };
  std::map<std::string, std::vector<std::string>> from_flags;
  absorb(file_values, merged);
  absorb(flag_values, from_flags);
  for (auto& [key, values] : from_flags) merged[key] = std::move(values);

  std::vector<std::string> missing;
  for (std::string_view key : kRequired) {
    if (!merged.count(std::string(key))) missing.emplace_back(key);
  }
  if (!missing.empty()) {
    std::string msg = "missing required settings:";
    for (const auto& k : missing) msg += " " + k;
    throw ConfigError(missing.front(), msg);
  }

  ParsedConfig out;
  SimConfig& cfg = out.config;
  auto last = [&](const char* key) -> const std::string& { return merged.at(key).back(); };
  auto has = [&](const char* key) { return merged.count(key) > 0; };

  cfg.params.queues = parse_integer<std::size_t>("queues", last("queues"), 1);
  cfg.params.servers = parse_integer<std::size_t>("servers", last("servers"), 1);
  cfg.params.p = parse_probability("p", last("p"));
  cfg.params.lambda = parse_probability("lambda", last("lambda"));
  cfg.horizon = parse_integer<std::uint64_t>("horizon", last("horizon"), 1);

  if (has("replications")) {
    cfg.replications = parse_integer<std::size_t>("replications", last("replications"), 1);
  } else {
    cfg.replications = kDefaultReplications;
    out.defaults_applied.push_back("replications = " + std::to_string(kDefaultReplications));
  }
  if (has("seed")) {
    cfg.seed = parse_integer<std::uint64_t>("seed", last("seed"), 0);
  } else {
    cfg.seed = kDefaultSeed;
    out.defaults_applied.push_back("seed = " + std::to_string(kDefaultSeed));
  }

  if (has("policy")) {
    for (const auto& v : merged.at("policy")) {
      for (const auto& name : split_list(v)) {
        const auto id = parse_policy(name);
        if (!id) {
          throw ConfigError("policy", "policy: unknown policy '" + name +
                                          "' (expected mwm, random_maximal, greedy_lcq or fixed_order)");
        }
        cfg.policies.push_back(*id);
      }
    }
    if (cfg.policies.empty()) throw ConfigError("policy", "policy: empty policy list");
  } else {
    std::string listed;
    for (PolicyId id : all_policies()) {
      cfg.policies.push_back(id);
      listed += (listed.empty() ? "" : ",") + std::string(policy_name(id));
    }
    out.defaults_applied.push_back("policy = " + listed);
  }

  if (has("cost")) {
    for (const auto& v : merged.at("cost")) {
      for (const auto& name : split_list(v)) {
        if (!find_cost(name)) throw ConfigError("cost", "cost: unknown cost function '" + name + "'");
        cfg.costs.push_back(name);
      }
    }
    if (cfg.costs.empty()) throw ConfigError("cost", "cost: empty cost list");
  } else {
    std::string listed;
    for (const CostFunction& f : registered_costs()) {
      cfg.costs.emplace_back(f.name);
      listed += (listed.empty() ? "" : ",") + std::string(f.name);
    }
    out.defaults_applied.push_back("cost = " + listed);
  }

  if (has("record_interval")) {
    cfg.record_interval = parse_integer<std::uint64_t>("record_interval", last("record_interval"), 1);
  } else {
    cfg.record_interval = std::max<std::uint64_t>(1, cfg.horizon / 100);
    out.defaults_applied.push_back("record_interval = " + std::to_string(cfg.record_interval));
  }

  if (has("initial_state")) {
    std::vector<QueueLength> x;
    for (const auto& item : split_list(last("initial_state"))) {
      x.push_back(parse_integer<QueueLength>("initial_state", item, 0));
    }
    if (x.size() != cfg.params.queues) {
      throw ConfigError("initial_state", "initial_state: expected " + std::to_string(cfg.params.queues) +
                                             " entries, got " + std::to_string(x.size()));
    }
    cfg.initial_state = QueueState(std::move(x));
  } else {
    out.defaults_applied.push_back("initial_state = zeros");
  }

  cfg.validate();
  return out;
}

WeightMatrix parse_weight_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n = 0, k = 0;
  if (!(in >> n >> k) || n < 1 || k < 1) throw ConfigError("", "weight matrix: first line must be 'N K' with N, K >= 1");
  WeightMatrix w(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < k; ++j) {
      long long v = 0;
      if (!(in >> v)) {
        throw ConfigError("", "weight matrix: missing entry at row " + std::to_string(i) + ", column " + std::to_string(j));
      }
      if (v < 0) throw ConfigError("", "weight matrix: negative entry at row " + std::to_string(i));
      w.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
    }
  }
  std::string extra;
  if (in >> extra) throw ConfigError("", "weight matrix: trailing data '" + extra + "'");
  return w;
}

}  // namespace mwmlab
