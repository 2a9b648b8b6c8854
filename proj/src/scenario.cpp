#include "tangle/scenario.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace tangle {

std::string_view to_string(Arrival a) { return a == Arrival::Poisson ? "poisson" : "constant"; }

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::LargeWeight: return "large_weight";
    case AttackKind::Parasite: return "parasite_chain";
    case AttackKind::Splitting: return "splitting";
  }
  return "splitting";
}

Arrival parse_arrival(std::string_view s) {
  if (s == "poisson") return Arrival::Poisson;
  if (s == "constant") return Arrival::Constant;
  throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown arrival mode '{}'", s));
}

AttackKind parse_attack_kind(std::string_view s) {
  if (s == "large_weight" || s == "large-weight") return AttackKind::LargeWeight;
  if (s == "parasite" || s == "parasite_chain" || s == "parasite-chain") return AttackKind::Parasite;
  if (s == "splitting") return AttackKind::Splitting;
  throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown attack kind '{}'", s));
}

void AttackerConfig::validate() const {
  if (!(power_fraction >= 0.0 && power_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("attacker power {} outside [0, 1)", power_fraction));
  }
  if (!(start_time >= 0) || !(target_lead >= 0) || !(secret_period >= 0) || !(reveal_delay >= 0)) {
    throw Error(ErrorCode::ConfigInvalid, "attack times must be non-negative");
  }
  if (!(placement_alpha >= 0) || !std::isfinite(placement_alpha)) {
    throw Error(ErrorCode::ConfigInvalid, "placement_alpha must be a finite value >= 0");
  }
  if (branching < 1) throw Error(ErrorCode::ConfigInvalid, "branching must be at least 1");
}

void ScenarioConfig::validate() const {
  tsa.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::ConfigInvalid, "lambda must be positive");
  if (total_transactions < 1) throw Error(ErrorCode::ConfigInvalid, "total_transactions must be at least 1");
  if (!(delay_tau >= 0.0) || !std::isfinite(delay_tau)) throw Error(ErrorCode::ConfigInvalid, "delay_tau must be >= 0");
  if (workers < 1) throw Error(ErrorCode::ConfigInvalid, "workers must be at least 1");
  if (confidence.runs < 1) throw Error(ErrorCode::ConfigInvalid, "confidence runs must be at least 1");
  if (adversary) adversary->validate();
}

}  // namespace tangle
