#include "tangle/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "tangle/adversary.hpp"
#include "tangle/config.hpp"
#include "tangle/parallel.hpp"
#include "tangle/snapshot.hpp"

namespace tangle {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config_path;
  std::string out_dir;
  Settings overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "INI config file");
  sub->add_option("--out", c.out_dir, fmt::format("output directory (default ${} or ./tanglesim-out)", kOutputDirEnv));
  for (const auto& k : setting_keys()) {
    const std::string key(k.key);
    const std::string flag = "--" + std::string(k.flag);
    if (key == "attack.omniscient") {
      sub->add_flag_function(flag, [&c, key](std::int64_t n) { c.overrides[key] = n > 0 ? "true" : "false"; },
                             std::string(k.help));
    } else {
      sub->add_option_function<std::string>(flag, [&c, key](const std::string& v) { c.overrides[key] = v; },
                                            std::string(k.help));
    }
  }
}

Settings settings_of(const Common& c) {
  Settings s = c.config_path.empty() ? Settings{} : read_ini_file(c.config_path);
  return merge(std::move(s), c.overrides);
}

fs::path output_dir(const Common& c) {
  fs::path dir = "tanglesim-out";
  if (!c.out_dir.empty()) {
    dir = c.out_dir;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    dir = env;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  return dir;
}

std::string metrics_csv(const MetricsReport& r) { return fmt::format("{}\n{}\n", kMetricsHeader, to_csv_row(r)); }

void write_run_files(const fs::path& dir, const ScenarioConfig& cfg, const SimulationResult& r) {
  write_text_file(dir / "metrics.csv", metrics_csv(r.report));
  write_text_file(dir / "events.jsonl", r.log.to_jsonl());
  write_text_file(dir / "resolved.ini", resolved_ini(cfg));
}

int cmd_run(const Common& c, bool snapshot, bool dot, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg = build_scenario(settings_of(c));
  if (cfg.adversary) {
    err << "warning: attack settings are ignored by 'run'; use 'attack'\n";
    cfg.adversary.reset();
  }
  const fs::path dir = output_dir(c);
  const SimulationResult r = run(cfg);
  write_run_files(dir, cfg, r);
  write_text_file(dir / "confidence.csv", confidence_csv(r.report));
  if (snapshot) write_text_file(dir / "snapshot.txt", export_snapshot(r.tangle));
  if (dot) write_text_file(dir / "tangle.dot", export_dot(r.tangle));
  out << kMetricsHeader << '\n' << to_csv_row(r.report) << '\n';
  return kExitOk;
}

int cmd_attack(const Common& c, std::ostream& out) {
  const ScenarioConfig cfg = build_scenario(settings_of(c));
  if (!cfg.adversary) throw Error(ErrorCode::ConfigInvalid, "attack needs an attacker: set --kind or [attack] kind");
  const fs::path dir = output_dir(c);
  const AttackOutcome o = run_attack(cfg);
  write_run_files(dir, cfg, o.result);
  const std::string row = to_csv_row(o, cfg);
  write_text_file(dir / "attack.csv", fmt::format("{}\n{}\n", kAttackHeader, row));
  write_text_file(dir / "weight_gap.csv", weight_gap_csv(o));
  out << kAttackHeader << '\n' << row << '\n';
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_compare(const Common& c, const std::string& tsa_list, const std::string& seed_list, unsigned jobs,
                std::ostream& out, std::ostream& err) {
  std::vector<std::string> tsas;
  for (const auto& t : split_list(tsa_list)) {
    if (std::find(tsas.begin(), tsas.end(), t) != tsas.end()) {
      err << fmt::format("warning: tsa '{}' listed twice; running it once\n", t);
    } else {
      tsas.push_back(t);
    }
  }
  if (tsas.size() < 2) throw Error(ErrorCode::ConfigInvalid, "compare needs at least two distinct TSAs");
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split_list(seed_list)) {
    Settings probe{{"scenario.seed", s}};
    seeds.push_back(build_scenario(probe).master_seed);
  }
  if (seeds.empty()) throw Error(ErrorCode::ConfigInvalid, "compare needs at least one seed");

  const Settings base = settings_of(c);
  std::vector<ScenarioConfig> cells;
  for (const auto& t : tsas) {
    for (auto seed : seeds) {
      Settings s = base;
      s["tsa.kind"] = t;
      s["scenario.seed"] = std::to_string(seed);
      ScenarioConfig cfg = build_scenario(s);
      cfg.adversary.reset();
      cells.push_back(std::move(cfg));
    }
  }
  const fs::path dir = output_dir(c);
  std::vector<MetricsReport> reports(cells.size());
  parallel_for(cells.size(), std::max(1u, jobs), [&](std::size_t i) { reports[i] = run(cells[i]).report; });

  std::string rows = fmt::format("{}\n", kMetricsHeader);
  for (const auto& r : reports) rows += to_csv_row(r) + "\n";
  write_text_file(dir / "compare.csv", rows);

  std::string summary = "tsa,runs,total,approved,tips,conf95,walks,compute_walks,wall_s,A0,AL,AH\n";
  for (std::size_t t = 0; t < tsas.size(); ++t) {
    std::vector<double> col[11];
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const auto& r = reports[t * seeds.size() + k];
      const double v[] = {double(r.total), double(r.approved), double(r.tips), double(r.confidence_ge_95),
                          double(r.walks), double(r.compute_walks), r.wall_seconds};
      for (int j = 0; j < 7; ++j) col[j].push_back(v[j]);
      if (r.mixture) {
        col[7].push_back(double(r.mixture->uniform));
        col[8].push_back(double(r.mixture->low));
        col[9].push_back(double(r.mixture->high));
      }
    }
    summary += fmt::format("{},{}", tsas[t], seeds.size());
    for (int j = 0; j < 6; ++j) summary += fmt::format(",{}", median(col[j]));
    summary += fmt::format(",{:.3f}", median(col[6]));
    for (int j = 7; j < 10; ++j) summary += col[j].empty() ? std::string(",") : fmt::format(",{}", median(col[j]));
    summary += '\n';
  }
  write_text_file(dir / "summary.csv", summary);

  std::string resolved = resolved_ini(cells.front());
  resolved += fmt::format("; compare tsas={} seeds={}\n", fmt::join(tsas, ","), fmt::join(seeds, ","));
  write_text_file(dir / "resolved.ini", resolved);
  out << summary;
  return kExitOk;
}

int cmd_confidence(const Common& c, const std::string& snapshot, const std::string& tx_list, std::ostream& out) {
  ScenarioConfig cfg = build_scenario(settings_of(c));
  const TangleState tangle = import_snapshot(read_text_file(snapshot));
  std::vector<TxId> txs;
  for (const auto& s : split_list(tx_list)) {
    std::uint64_t id = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("bad transaction id '{}'", s));
    }
    if (id >= tangle.size()) throw Error(ErrorCode::UnknownTransaction, fmt::format("transaction {}", id));
    txs.push_back(tx_id(id));
  }
  if (txs.empty()) {
    for (std::size_t i = 0; i < tangle.size(); ++i) txs.push_back(tx_id(i));
  }
  const fs::path dir = output_dir(c);
  MetricsReport holder;
  holder.confidences = estimate_confidence_shared(TangleView::full(tangle), txs, cfg.tsa, cfg.confidence.runs,
                                                  cfg.master_seed, cfg.workers);
  const std::string csv = confidence_csv(holder);
  write_text_file(dir / "confidence.csv", csv);
  write_text_file(dir / "resolved.ini", resolved_ini(cfg));
  out << csv;
  return kExitOk;
}

int cmd_export(const Common& c, const std::string& snapshot, const std::string& events, double window,
               std::ostream& out) {
  if (snapshot.empty() && events.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "export needs --snapshot and/or --events");
  }
  const ScenarioConfig cfg = build_scenario(settings_of(c));
  const fs::path dir = output_dir(c);
  if (!snapshot.empty()) {
    const TangleState tangle = import_snapshot(read_text_file(snapshot));
    write_text_file(dir / "tangle.dot", export_dot(tangle));
    out << fmt::format("wrote {} ({} transactions)\n", (dir / "tangle.dot").string(), tangle.size());
  }
  if (!events.empty()) {
    const EventLog log = EventLog::from_jsonl(read_text_file(events));
    const double w = window > 0 ? window : cfg.delay_tau;
    std::string csv = "window_start,window_end,A,A0,AL,AH\n";
    for (const auto& m : record_mixture(log, w)) {
      csv += fmt::format("{},{},{},{},{},{}\n", m.window_start, m.window_end, m.total(), m.uniform, m.low, m.high);
    }
    write_text_file(dir / "mixture.csv", csv);
    out << fmt::format("wrote {}\n", (dir / "mixture.csv").string());
  }
  return kExitOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidPower:
    case ErrorCode::TargetNotConfirmed:
    case ErrorCode::NotEIota:
    case ErrorCode::UnknownTransaction:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangle simulator: IOTA, G-IOTA and E-IOTA tip selection and attack experiments", "tanglesim"};
  app.set_version_flag("--version", fmt::format("tanglesim {}", kVersion));
  app.require_subcommand(1);

  Common c_run, c_attack, c_compare, c_conf, c_export;
  bool snapshot = false, dot = false;
  std::string tsas = "iota,giota,eiota", seeds = "1,2,3,4,5";
  unsigned jobs = 1;
  std::string snap_in, events_in, tx_list;
  double window = 0.0;

  auto* run_cmd = app.add_subcommand("run", "simulate one honest scenario");
  add_common(run_cmd, c_run);
  run_cmd->add_flag("--snapshot", snapshot, "also write snapshot.txt");
  run_cmd->add_flag("--dot", dot, "also write tangle.dot");

  auto* attack_cmd = app.add_subcommand("attack", "run one attack scenario");
  add_common(attack_cmd, c_attack);

  auto* compare_cmd = app.add_subcommand("compare", "run TSAs x seeds and summarize medians");
  add_common(compare_cmd, c_compare);
  compare_cmd->add_option("--tsas", tsas, "comma separated TSA list")->capture_default_str();
  compare_cmd->add_option("--seeds", seeds, "comma separated seed list")->capture_default_str();
  compare_cmd->add_option("--jobs", jobs, "cells run concurrently")->capture_default_str();

  auto* conf_cmd = app.add_subcommand("confidence", "estimate confidence on a saved snapshot");
  add_common(conf_cmd, c_conf);
  conf_cmd->add_option("--snapshot", snap_in, "snapshot file")->required();
  conf_cmd->add_option("--tx", tx_list, "comma separated transaction ids (default all)");

  auto* export_cmd = app.add_subcommand("export", "convert a snapshot to DOT or an event log to mixture tallies");
  add_common(export_cmd, c_export);
  export_cmd->add_option("--snapshot", snap_in, "snapshot file");
  export_cmd->add_option("--events", events_in, "event log (eiota)");
  export_cmd->add_option("--window", window, "mixture window in seconds (default tau)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(c_run, snapshot, dot, out, err);
    if (*attack_cmd) return cmd_attack(c_attack, out);
    if (*compare_cmd) return cmd_compare(c_compare, tsas, seeds, jobs, out, err);
    if (*conf_cmd) return cmd_confidence(c_conf, snap_in, tx_list, out);
    if (*export_cmd) return cmd_export(c_export, snap_in, events_in, window, out);
  } catch (const Error& e) {
    err << fmt::format("error: {}\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace tangle
