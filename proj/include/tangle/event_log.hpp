#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tangle/tsa.hpp"

namespace tangle {

enum class EventKind : std::uint8_t { Genesis, Issue, Adversary, Reveal };

std::string_view to_string(EventKind k);

/// One line of the event log.
///
/// Serialized as a JSON object with this exact field order:
///   time, kind, tx_id, strategy, alpha, parents, walk_lengths,
///   weighted_computation, retries, fallback
/// `strategy` and `alpha` hold one entry per walk ("uniform" |
/// "weighted_low" | "weighted_high"); they are empty for non-walk records.
/// `fallback` marks an issuance whose conflict reselections ran out.
struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::Issue;
  TxId tx{};
  std::vector<Strategy> strategies;
  std::vector<TxId> parents;
  std::vector<std::size_t> walk_lengths;
  std::vector<bool> weighted_computation;
  int retries = 0;
  bool fallback = false;

  std::string to_json() const;
  static EventRecord from_json(std::string_view line);
};

class EventLog {
 public:
  void append(EventRecord r) { records_.push_back(std::move(r)); }
  const std::vector<EventRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Walk executions committed to issuances.
  std::size_t walks() const;
  /// Committed walks that read cumulative weights.
  std::size_t compute_walks() const;
  /// Name of the TSA that produced the log ("iota", "giota", "eiota").
  const std::string& tsa() const { return tsa_; }
  void set_tsa(std::string name) { tsa_ = std::move(name); }

  /// First line is a header `{"log":"tangle-events v1","tsa":...}`, then one
  /// record per line.
  std::string to_jsonl() const;
  static EventLog from_jsonl(std::string_view text);

 private:
  std::vector<EventRecord> records_;
  std::string tsa_;
};

}  // namespace tangle
