#include "tangle/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace tangle {
namespace {

constexpr SettingKey kKeys[] = {
    {"scenario.lambda", "tps", "honest transactions per second"},
    {"scenario.arrival", "arrival", "poisson | constant"},
    {"scenario.tau", "tau", "propagation delay in seconds"},
    {"scenario.total", "total", "transactions in the run, genesis included"},
    {"scenario.seed", "seed", "master seed"},
    {"scenario.workers", "workers", "threads for confidence walks"},
    {"tsa.kind", "tsa", "iota | giota | eiota"},
    {"tsa.alpha", "alpha", "walk exponent for iota and giota"},
    {"tsa.threshold", "threshold", "giota left-behind age in seconds"},
    {"tsa.p1", "p1", "eiota uniform threshold"},
    {"tsa.p2", "p2", "eiota low-alpha threshold"},
    {"tsa.alpha_low_min", "alpha-low-min", "eiota low alpha lower bound"},
    {"tsa.alpha_low_max", "alpha-low-max", "eiota low alpha upper bound"},
    {"tsa.alpha_high", "alpha-high", "eiota high alpha"},
    {"tsa.draw", "draw", "eiota strategy draw per walk | issuance"},
    {"tsa.walkers", "walkers", "walkers per walk, shortest path wins"},
    {"tsa.start", "start", "genesis | anchor"},
    {"tsa.start_window", "start-window", "anchor age in seconds"},
    {"tsa.max_retries", "max-retries", "reselections on conflicting pairs"},
    {"tsa.on_exhaustion", "on-exhaustion", "duplicate | throw"},
    {"confidence.runs", "confidence-runs", "tip selections per confidence estimate"},
    {"confidence.sample", "confidence-sample", "estimate a uniform sample of this many transactions (0 = all)"},
    {"attack.kind", "kind", "large_weight | parasite_chain | splitting"},
    {"attack.pa", "pa", "adversary rate as a fraction of the honest rate"},
    {"attack.start", "attack-start", "attack start time in seconds"},
    {"attack.target_lead", "target-lead", "large weight: target search window before the start"},
    {"attack.secret_period", "secret-period", "parasite: seconds until i is published"},
    {"attack.reveal_delay", "reveal-delay", "parasite: seconds from publishing i to the reveal"},
    {"attack.branching", "branching", "parasite: private chains"},
    {"attack.anchor", "anchor", "parasite: main-tangle transaction the chain approves"},
    {"attack.placement_alpha", "placement-alpha", "walk exponent for placing adversary roots"},
    {"attack.omniscient", "omniscient", "adversary reads the full tangle"},
};

bool known(std::string_view key) {
  return std::any_of(std::begin(kKeys), std::end(kKeys), [&](const SettingKey& k) { return k.key == key; });
}

class Reader {
 public:
  explicit Reader(const Settings& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.contains(key); }

  std::string str(const std::string& key, std::string fallback) const {
    const auto it = s_.find(key);
    return it == s_.end() ? fallback : it->second;
  }

  template <class T>
  T num(const std::string& key, T fallback) const {
    const auto it = s_.find(key);
    if (it == s_.end()) return fallback;
    const std::string& v = it->second;
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: '{}' is not a valid number", key, v));
    }
    return out;
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = s_.find(key);
    if (it == s_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: '{}' is not a boolean", key, it->second));
  }

 private:
  const Settings& s_;
};

}  // namespace

std::span<const SettingKey> setting_keys() { return kKeys; }

Settings parse_ini(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("config: {}", e.message()));
  }
  Settings out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw Error(ErrorCode::ConfigInvalid, fmt::format("config: key '{}' outside a section", section));
    for (const auto& [key, value] : body) {
      std::string full = section + "." + key;
      if (!known(full)) throw Error(ErrorCode::ConfigInvalid, fmt::format("config: unknown key '{}'", full));
      out[full] = value.get_value<std::string>();
    }
  }
  return out;
}

Settings read_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, fmt::format("cannot open config '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str());
}

Settings merge(Settings base, const Settings& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

ScenarioConfig build_scenario(const Settings& settings) {
  for (const auto& [k, v] : settings) {
    if (!known(k)) throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown setting '{}'", k));
  }
  const Reader r(settings);
  ScenarioConfig c;
  c.lambda = r.num("scenario.lambda", c.lambda);
  c.arrival = parse_arrival(r.str("scenario.arrival", std::string(to_string(c.arrival))));
  c.delay_tau = r.num("scenario.tau", c.delay_tau);
  c.total_transactions = r.num("scenario.total", c.total_transactions);
  c.master_seed = r.num("scenario.seed", c.master_seed);
  c.workers = r.num("scenario.workers", c.workers);

  const std::string kind = r.str("tsa.kind", "eiota");
  if (kind == "iota") {
    c.tsa.kind = IotaTsa{r.num("tsa.alpha", 5.0)};
  } else if (kind == "giota") {
    // Default left-behind age: 20 mean inter-arrival times.
    c.tsa.kind = GIotaTsa{r.num("tsa.alpha", 5.0), r.num("tsa.threshold", 20.0 / c.lambda)};
  } else if (kind == "eiota") {
    EIotaParams p;
    p.p1 = r.num("tsa.p1", p.p1);
    p.p2 = r.num("tsa.p2", p.p2);
    p.alpha_low.lo = r.num("tsa.alpha_low_min", p.alpha_low.lo);
    p.alpha_low.hi = r.num("tsa.alpha_low_max", p.alpha_low.hi);
    p.alpha_high = r.num("tsa.alpha_high", p.alpha_high);
    const std::string draw = r.str("tsa.draw", "walk");
    if (draw == "walk") {
      p.scope = EIotaParams::DrawScope::Walk;
    } else if (draw == "issuance") {
      p.scope = EIotaParams::DrawScope::Issuance;
    } else {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown draw scope '{}'", draw));
    }
    p.validate();
    c.tsa.kind = EIotaTsa{p};
  } else {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown tsa '{}'", kind));
  }
  c.tsa.n_walkers = r.num("tsa.walkers", c.tsa.n_walkers);
  const std::string start = r.str("tsa.start", "genesis");
  if (start == "genesis") {
    c.tsa.start.kind = StartSite::Kind::Genesis;
  } else if (start == "anchor") {
    c.tsa.start.kind = StartSite::Kind::Anchor;
  } else {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown start site '{}'", start));
  }
  c.tsa.start.window = r.num("tsa.start_window", c.tsa.start.window);
  c.tsa.retry.max_retries = r.num("tsa.max_retries", c.tsa.retry.max_retries);
  const std::string ex = r.str("tsa.on_exhaustion", "duplicate");
  if (ex == "duplicate") {
    c.tsa.retry.on_exhaustion = RetryPolicy::OnExhaustion::DuplicateFirst;
  } else if (ex == "throw") {
    c.tsa.retry.on_exhaustion = RetryPolicy::OnExhaustion::Throw;
  } else {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown on_exhaustion '{}'", ex));
  }

  c.confidence.runs = r.num("confidence.runs", c.confidence.runs);
  c.confidence.sample = r.num("confidence.sample", c.confidence.sample);

  if (r.has("attack.kind")) {
    AttackerConfig a;
    a.kind = parse_attack_kind(r.str("attack.kind", ""));
    a.power_fraction = r.num("attack.pa", a.power_fraction);
    a.start_time = r.num("attack.start", a.start_time);
    a.target_lead = r.num("attack.target_lead", a.target_lead);
    a.secret_period = r.num("attack.secret_period", a.secret_period);
    a.reveal_delay = r.num("attack.reveal_delay", a.reveal_delay);
    a.branching = r.num("attack.branching", a.branching);
    a.anchor = r.num("attack.anchor", a.anchor);
    a.placement_alpha = r.num("attack.placement_alpha", a.placement_alpha);
    a.omniscient = r.flag("attack.omniscient", a.omniscient);
    c.adversary = a;
  }
  c.validate();
  return c;
}

std::string resolved_ini(const ScenarioConfig& c) {
  std::string out = fmt::format("; tanglesim {}\n", kVersion);
  out += fmt::format("[scenario]\nlambda={}\narrival={}\ntau={}\ntotal={}\nseed={}\nworkers={}\n\n", c.lambda,
                     to_string(c.arrival), c.delay_tau, c.total_transactions, c.master_seed, c.workers);
  out += fmt::format("[tsa]\nkind={}\n", c.tsa.name());
  if (const auto* i = std::get_if<IotaTsa>(&c.tsa.kind)) out += fmt::format("alpha={}\n", i->alpha);
  if (const auto* g = std::get_if<GIotaTsa>(&c.tsa.kind)) {
    out += fmt::format("alpha={}\nthreshold={}\n", g->alpha, g->left_behind_threshold);
  }
  if (const auto* e = std::get_if<EIotaTsa>(&c.tsa.kind)) {
    const auto& p = e->params;
    out += fmt::format("p1={}\np2={}\nalpha_low_min={}\nalpha_low_max={}\nalpha_high={}\ndraw={}\n", p.p1, p.p2,
                       p.alpha_low.lo, p.alpha_low.hi, p.alpha_high,
                       p.scope == EIotaParams::DrawScope::Walk ? "walk" : "issuance");
  }
  out += fmt::format("walkers={}\nstart={}\nstart_window={}\nmax_retries={}\non_exhaustion={}\n\n", c.tsa.n_walkers,
                     c.tsa.start.kind == StartSite::Kind::Genesis ? "genesis" : "anchor", c.tsa.start.window,
                     c.tsa.retry.max_retries,
                     c.tsa.retry.on_exhaustion == RetryPolicy::OnExhaustion::Throw ? "throw" : "duplicate");
  out += fmt::format("[confidence]\nruns={}\nsample={}\n", c.confidence.runs, c.confidence.sample);
  if (c.adversary) {
    const auto& a = *c.adversary;
    out += fmt::format(
        "\n[attack]\nkind={}\npa={}\nstart={}\ntarget_lead={}\nsecret_period={}\nreveal_delay={}\nbranching={}\n"
        "anchor={}\nplacement_alpha={}\nomniscient={}\n",
        to_string(a.kind), a.power_fraction, a.start_time, a.target_lead, a.secret_period, a.reveal_delay,
        a.branching, a.anchor, a.placement_alpha, a.omniscient ? "true" : "false");
  }
  return out;
}

}  // namespace tangle
