#include "tangle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "tangle/parallel.hpp"

namespace tangle {
namespace {

/// Inclusive past cone of `from` as a dense membership vector.
std::vector<char> past_cone_mask(const TangleState& tangle, TxId from) {
  std::vector<char> mask(index(from) + 1, 0);
  std::vector<TxId> stack{from};
  mask[index(from)] = 1;
  while (!stack.empty()) {
    const TxId cur = stack.back();
    stack.pop_back();
    for (TxId p : tangle.tx(cur).parents) {
      if (!mask[index(p)]) {
        mask[index(p)] = 1;
        stack.push_back(p);
      }
    }
  }
  return mask;
}

void add(ApprovalMixtureStats& s, const EventRecord& r) {
  if (r.kind != EventKind::Issue) return;
  for (const Strategy& st : r.strategies) {
    switch (st.kind) {
      case StrategyKind::Uniform: ++s.uniform; break;
      case StrategyKind::WeightedLow: ++s.low; break;
      case StrategyKind::WeightedHigh: ++s.high; break;
    }
  }
}

}  // namespace

ConfidenceEstimate estimate_confidence(const TangleView& view, TxId tx, const TsaConfig& tsa, int runs,
                                       std::uint64_t seed, unsigned workers) {
  if (!view.contains(tx)) {
    throw Error(ErrorCode::UnknownTransaction, fmt::format("transaction {} is not in the view", index(tx)));
  }
  if (runs < 1) throw Error(ErrorCode::ConfigInvalid, "confidence needs at least one run");
  std::vector<char> hit(static_cast<std::size_t>(runs), 0);
  parallel_for(hit.size(), workers, [&](std::size_t r) {
    Rng rng = Rng::substream(seed, Stream::Confidence, index(tx) + 1, r);
    const TxId tip = select_tip(view, tsa, rng).tip;
    hit[r] = view.tangle().in_past_cone(tip, tx) ? 1 : 0;
  });
  return {tx, runs, static_cast<int>(std::count(hit.begin(), hit.end(), 1))};
}

ConfidenceEstimate estimate_confidence(const TangleState& tangle, TxId tx, const TsaConfig& tsa, int runs,
                                       std::uint64_t seed, unsigned workers) {
  if (!tangle.contains(tx)) {
    throw Error(ErrorCode::UnknownTransaction, fmt::format("transaction {}", index(tx)));
  }
  return estimate_confidence(TangleView::full(tangle), tx, tsa, runs, seed, workers);
}

std::vector<ConfidenceEstimate> estimate_confidence_shared(const TangleView& view, std::span<const TxId> txs,
                                                           const TsaConfig& tsa, int runs, std::uint64_t seed,
                                                           unsigned workers) {
  for (TxId t : txs) {
    if (!view.contains(t)) {
      throw Error(ErrorCode::UnknownTransaction, fmt::format("transaction {} is not in the view", index(t)));
    }
  }
  if (runs < 1) throw Error(ErrorCode::ConfigInvalid, "confidence needs at least one run");
  std::vector<std::vector<char>> cones(static_cast<std::size_t>(runs));
  parallel_for(cones.size(), workers, [&](std::size_t r) {
    Rng rng = Rng::substream(seed, Stream::Confidence, 0, r);
    cones[r] = past_cone_mask(view.tangle(), select_tip(view, tsa, rng).tip);
  });
  std::vector<ConfidenceEstimate> out;
  out.reserve(txs.size());
  for (TxId t : txs) {
    int hits = 0;
    for (const auto& cone : cones) hits += (index(t) < cone.size() && cone[index(t)]) ? 1 : 0;
    out.push_back({t, runs, hits});
  }
  return out;
}

std::vector<ApprovalMixtureStats> record_mixture(const EventLog& log, double window) {
  if (log.tsa() != "eiota") {
    throw Error(ErrorCode::NotEIota, fmt::format("mixture statistics need an eiota log, got '{}'", log.tsa()));
  }
  if (!(window > 0)) throw Error(ErrorCode::ConfigInvalid, "window must be positive");
  std::vector<ApprovalMixtureStats> out;
  for (const auto& r : log.records()) {
    if (r.kind != EventKind::Issue) continue;
    const auto w = static_cast<std::size_t>(std::floor(r.time / window));
    while (out.size() <= w) {
      const double lo = static_cast<double>(out.size()) * window;
      out.push_back({lo, lo + window, 0, 0, 0});
    }
    add(out[w], r);
  }
  return out;
}

ApprovalMixtureStats total_mixture(const EventLog& log) {
  ApprovalMixtureStats s;
  for (const auto& r : log.records()) {
    add(s, r);
    s.window_end = std::max(s.window_end, r.time);
  }
  return s;
}

std::string to_csv_row(const MetricsReport& r) {
  std::string row = fmt::format("{},{},{},{},{},{},{},{},{:.3f},", r.tsa, r.seed, r.total, r.approved, r.tips,
                                r.confidence_ge_95, r.walks, r.compute_walks, r.wall_seconds);
  if (r.mixture) {
    row += fmt::format("{},{},{}", r.mixture->uniform, r.mixture->low, r.mixture->high);
  } else {
    row += ",,";
  }
  return row;
}

std::string confidence_csv(const MetricsReport& r) {
  std::string out = "tx_id,confidence\n";
  for (const auto& c : r.confidences) out += fmt::format("{},{}\n", index(c.tx), c.confidence());
  return out;
}

MetricsReport finalize_report(const EventLog& log, const TangleState& tangle, const ScenarioConfig& config,
                              double wall_seconds) {
  MetricsReport report;
  report.tsa = std::string(config.tsa.name());
  report.seed = config.master_seed;
  report.total = tangle.size();
  report.approved = tangle.approved_count();
  report.tips = tangle.tips().size();
  report.walks = log.walks();
  report.compute_walks = log.compute_walks();
  report.sim_time = tangle.tx(tx_id(tangle.size() - 1)).issue_time;
  report.wall_seconds = wall_seconds;
  if (log.tsa() == "eiota") report.mixture = total_mixture(log);

  std::vector<TxId> ids(tangle.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = tx_id(i);
  if (config.confidence.sample > 0 && config.confidence.sample < ids.size()) {
    Rng rng = Rng::substream(config.master_seed, Stream::Confidence, 0, UINT64_MAX);
    for (std::size_t i = 0; i < config.confidence.sample; ++i) {
      std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
    }
    ids.resize(config.confidence.sample);
    std::sort(ids.begin(), ids.end());
  }
  report.confidences = estimate_confidence_shared(TangleView::full(tangle), ids, config.tsa, config.confidence.runs,
                                                  config.master_seed, config.workers);
  report.confidence_ge_95 = static_cast<std::size_t>(
      std::count_if(report.confidences.begin(), report.confidences.end(),
                    [](const ConfidenceEstimate& c) { return c.confidence() >= 0.95; }));
  return report;
}

}  // namespace tangle
