#include "tangle/event_log.hpp"

#include <nlohmann/json.hpp>
#include <fmt/format.h>

namespace tangle {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Genesis: return "genesis";
    case EventKind::Issue: return "issue";
    case EventKind::Adversary: return "adversary";
    case EventKind::Reveal: return "reveal";
  }
  return "issue";
}

namespace {

EventKind parse_kind(std::string_view s) {
  for (auto k : {EventKind::Genesis, EventKind::Issue, EventKind::Adversary, EventKind::Reveal}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::IoFailure, fmt::format("unknown event kind '{}'", s));
}

StrategyKind parse_strategy(std::string_view s) {
  for (auto k : {StrategyKind::Uniform, StrategyKind::WeightedLow, StrategyKind::WeightedHigh}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::IoFailure, fmt::format("unknown strategy '{}'", s));
}

}  // namespace

std::string EventRecord::to_json() const {
  std::string out = fmt::format("{{\"time\":{},\"kind\":\"{}\",\"tx_id\":{},", time, to_string(kind), index(tx));
  out += "\"strategy\":[";
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    out += fmt::format("{}\"{}\"", i ? "," : "", to_string(strategies[i].kind));
  }
  out += "],\"alpha\":[";
  for (std::size_t i = 0; i < strategies.size(); ++i) out += fmt::format("{}{}", i ? "," : "", strategies[i].alpha);
  out += "],";
  out += "\"parents\":[";
  for (std::size_t i = 0; i < parents.size(); ++i) out += fmt::format("{}{}", i ? "," : "", index(parents[i]));
  out += "],\"walk_lengths\":[";
  for (std::size_t i = 0; i < walk_lengths.size(); ++i) out += fmt::format("{}{}", i ? "," : "", walk_lengths[i]);
  out += "],\"weighted_computation\":[";
  for (std::size_t i = 0; i < weighted_computation.size(); ++i) {
    out += fmt::format("{}{}", i ? "," : "", weighted_computation[i] ? "true" : "false");
  }
  out += fmt::format("],\"retries\":{},\"fallback\":{}}}", retries, fallback ? "true" : "false");
  return out;
}

EventRecord EventRecord::from_json(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    EventRecord r;
    r.time = j.at("time").get<double>();
    r.kind = parse_kind(j.at("kind").get<std::string>());
    r.tx = tx_id(j.at("tx_id").get<std::size_t>());
    const auto& kinds = j.at("strategy");
    const auto& alphas = j.at("alpha");
    if (kinds.size() != alphas.size()) throw Error(ErrorCode::IoFailure, "strategy and alpha lengths differ");
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      r.strategies.push_back(Strategy{parse_strategy(kinds[i].get<std::string>()), alphas[i].get<double>()});
    }
    for (const auto& p : j.at("parents")) r.parents.push_back(tx_id(p.get<std::size_t>()));
    for (const auto& w : j.at("walk_lengths")) r.walk_lengths.push_back(w.get<std::size_t>());
    for (const auto& w : j.at("weighted_computation")) r.weighted_computation.push_back(w.get<bool>());
    r.retries = j.at("retries").get<int>();
    r.fallback = j.at("fallback").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoFailure, fmt::format("bad event record: {}", e.what()));
  }
}

std::size_t EventLog::walks() const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.kind == EventKind::Issue) n += r.walk_lengths.size();
  }
  return n;
}

std::size_t EventLog::compute_walks() const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.kind != EventKind::Issue) continue;
    for (bool w : r.weighted_computation) n += w ? 1 : 0;
  }
  return n;
}

std::string EventLog::to_jsonl() const {
  std::string out = fmt::format("{{\"log\":\"tangle-events v1\",\"tsa\":\"{}\"}}\n", tsa_);
  for (const auto& r : records_) {
    out += r.to_json();
    out += '\n';
  }
  return out;
}

EventLog EventLog::from_jsonl(std::string_view text) {
  EventLog log;
  bool header = true;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      try {
        const auto j = nlohmann::json::parse(line);
        if (j.value("log", "") != "tangle-events v1") throw Error(ErrorCode::IoFailure, "not an event log");
        log.tsa_ = j.value("tsa", "");
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoFailure, fmt::format("bad event log header: {}", e.what()));
      }
      continue;
    }
    log.append(EventRecord::from_json(line));
  }
  return log;
}

}  // namespace tangle
