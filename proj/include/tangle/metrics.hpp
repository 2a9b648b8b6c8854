#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tangle/event_log.hpp"
#include "tangle/scenario.hpp"

namespace tangle {

struct ConfidenceEstimate {
  TxId tx{};
  int runs = 0;
  int hits = 0;

  double confidence() const { return runs > 0 ? static_cast<double>(hits) / runs : 0.0; }
};

/// Confidence from K independent single-tip selections on `view`: the share
/// of selected tips whose inclusive past cone contains `tx`. Draws come from
/// substreams keyed by (seed, tx, run index).
ConfidenceEstimate estimate_confidence(const TangleView& view, TxId tx, const TsaConfig& tsa, int runs,
                                       std::uint64_t seed, unsigned workers = 1);

/// Convenience overload on the full tangle.
ConfidenceEstimate estimate_confidence(const TangleState& tangle, TxId tx, const TsaConfig& tsa, int runs,
                                       std::uint64_t seed, unsigned workers = 1);

/// Common-random-numbers estimator: one set of K selections (keyed by run
/// index only) scored against every transaction in `txs`.
std::vector<ConfidenceEstimate> estimate_confidence_shared(const TangleView& view, std::span<const TxId> txs,
                                                           const TsaConfig& tsa, int runs, std::uint64_t seed,
                                                           unsigned workers = 1);

/// Approval tallies by strategy class over one time window.
struct ApprovalMixtureStats {
  double window_start = 0.0;
  double window_end = 0.0;
  std::size_t uniform = 0;
  std::size_t low = 0;
  std::size_t high = 0;

  std::size_t total() const { return uniform + low + high; }
};

/// Per-window (length `window`) tallies of walk approvals by strategy class.
/// Throws NotEIota unless the log comes from the mixed-strategy TSA.
std::vector<ApprovalMixtureStats> record_mixture(const EventLog& log, double window);
/// Tallies over the whole log.
ApprovalMixtureStats total_mixture(const EventLog& log);

struct MetricsReport {
  std::string tsa;
  std::uint64_t seed = 0;
  std::size_t total = 0;
  std::size_t approved = 0;
  std::size_t tips = 0;
  std::size_t confidence_ge_95 = 0;
  std::size_t walks = 0;
  std::size_t compute_walks = 0;
  double sim_time = 0.0;
  double wall_seconds = 0.0;
  std::optional<ApprovalMixtureStats> mixture;
  /// Per-transaction estimates behind confidence_ge_95.
  std::vector<ConfidenceEstimate> confidences;
};

inline constexpr std::string_view kMetricsHeader =
    "tsa,seed,total,approved,tips,conf95,walks,compute_walks,wall_s,A0,AL,AH";

/// One metrics.csv row (no trailing newline). The mixture columns are empty
/// for single-strategy TSAs.
std::string to_csv_row(const MetricsReport& r);
/// `tx_id,confidence` rows with header.
std::string confidence_csv(const MetricsReport& r);

/// Counts and confidence statistics for a finished run. Confidence is
/// evaluated on the final tangle with the scenario's own TSA, with shared
/// draws across transactions.
MetricsReport finalize_report(const EventLog& log, const TangleState& tangle, const ScenarioConfig& config,
                              double wall_seconds);

}  // namespace tangle
