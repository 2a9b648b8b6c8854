#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "tangle/tsa.hpp"

namespace tangle {

enum class Arrival : std::uint8_t { Poisson, Constant };

enum class AttackKind : std::uint8_t { LargeWeight, Parasite, Splitting };

std::string_view to_string(Arrival a);
std::string_view to_string(AttackKind k);
Arrival parse_arrival(std::string_view s);
AttackKind parse_attack_kind(std::string_view s);

struct AttackerConfig {
  AttackKind kind = AttackKind::Splitting;
  /// Adversary issuance rate as a fraction of the honest rate.
  double power_fraction = 0.25;
  /// Simulated time at which the attack starts.
  double start_time = 5.0;
  /// Large weight: the target is the first honest transaction issued at or
  /// after start_time - target_lead.
  double target_lead = 4.0;
  /// Parasite: seconds between the private root j and publishing i.
  double secret_period = 5.0;
  /// Parasite: seconds after publishing i until the sub-tangle is revealed.
  double reveal_delay = 0.0;
  /// Parasite: number of interleaved private chains.
  int branching = 1;
  /// Parasite: main-tangle transaction every private transaction approves.
  std::uint32_t anchor = 0;
  /// Exponent of the weighted walk the adversary uses to place its own roots.
  double placement_alpha = 5.0;
  /// Read the full tangle instead of the delayed view.
  bool omniscient = false;

  void validate() const;
};

struct ConfidenceConfig {
  /// Tip selections per estimate.
  int runs = 100;
  /// Evaluate a uniform sample of this many transactions when positive.
  std::size_t sample = 0;
};

struct ScenarioConfig {
  TsaConfig tsa{};
  double lambda = 2000.0;
  Arrival arrival = Arrival::Poisson;
  double delay_tau = 1.0;
  std::uint64_t total_transactions = 8000;
  std::uint64_t master_seed = 42;
  /// Threads for embarrassingly parallel walk batches; results do not depend on it.
  unsigned workers = 1;
  ConfidenceConfig confidence{};
  std::optional<AttackerConfig> adversary;

  /// Throws ConfigInvalid.
  void validate() const;
  double mean_interarrival() const { return 1.0 / lambda; }
};

}  // namespace tangle
