#pragma once

#include <optional>
#include <vector>

#include "tangle/engine.hpp"

namespace tangle {

/// One point of the weight trajectory of the contested pair.
struct GapSample {
  double time = 0.0;
  std::int64_t h_a = 0;
  std::int64_t h_b = 0;
};

struct AttackOutcome {
  AttackKind kind = AttackKind::LargeWeight;
  bool success = false;
  /// Contested pair: (i, j) for large weight and parasite, the two roots for splitting.
  TxId tx_a{};
  TxId tx_b{};
  double confidence_a = 0.0;
  double confidence_b = 0.0;
  std::vector<GapSample> trajectory;
  /// Splitting only: seconds from the fork until the adversary could no
  /// longer offset the honest imbalance within one window (capped at the horizon).
  std::optional<double> split_duration;
  std::size_t adversary_issuances = 0;
  double start_time = 0.0;
  double horizon = 0.0;
  SimulationResult result;
};

/// Publishes j conflicting with an already confirmed honest transaction i,
/// attached to i's own parents, then spends the budget on a chain behind j.
/// Throws TargetNotConfirmed.
AttackOutcome run_large_weight(const ScenarioConfig& scenario);

/// Builds a withheld sub-tangle rooted at j, publishes the conflicting i at
/// start + secret_period and reveals the sub-tangle reveal_delay later.
/// Throws InvalidPower when pa >= 0.5.
AttackOutcome run_parasite(const ScenarioConfig& scenario);

/// Forks the tangle with two conflicting roots and feeds the lighter branch.
AttackOutcome run_splitting(const ScenarioConfig& scenario);

/// Dispatches on scenario.adversary->kind. Throws ConfigInvalid without one.
AttackOutcome run_attack(const ScenarioConfig& scenario);

inline constexpr std::string_view kAttackHeader =
    "kind,tsa,seed,pa,success,tx_a,tx_b,conf_a,conf_b,adversary_tx,split_duration";
std::string to_csv_row(const AttackOutcome& o, const ScenarioConfig& scenario);
/// `time,H_branch_a,H_branch_b` rows.
std::string weight_gap_csv(const AttackOutcome& o);

}  // namespace tangle
