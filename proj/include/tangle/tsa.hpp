#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "tangle/rng.hpp"
#include "tangle/view.hpp"

namespace tangle {

// ---------------------------------------------------------------------------
// Strategies

enum class StrategyKind : std::uint8_t { Uniform, WeightedLow, WeightedHigh };

std::string_view to_string(StrategyKind kind);

/// A walk strategy with the exponent it runs at.
struct Strategy {
  StrategyKind kind = StrategyKind::Uniform;
  double alpha = 0.0;

  /// Uniform walks never read cumulative weights.
  bool weighted_computation() const { return kind != StrategyKind::Uniform; }
};

/// Class shares of a strategy mixture: p0 uniform, pL low-alpha, pH high-alpha.
struct Mixture {
  double p0 = 0.0;
  double low = 0.0;
  double high = 0.0;
};

struct AlphaRange {
  double lo = 0.1;
  double hi = 2.0;
};

/// Parameters of the randomized three-strategy selection.
///
/// A draw r in [0, 1) picks Uniform when r < p1, a low-alpha weighted walk
/// when p1 <= r < p2 (alpha resampled from `alpha_low` each draw) and a
/// high-alpha walk otherwise.
struct EIotaParams {
  double p1 = 0.1;
  double p2 = 0.65;
  AlphaRange alpha_low{};
  double alpha_high = 5.0;
  /// Walk: each parent walk draws its own strategy. Issuance: one draw per
  /// selection attempt, shared by both walks.
  enum class DrawScope : std::uint8_t { Walk, Issuance } scope = DrawScope::Walk;

  /// Throws ConfigInvalid unless 0 < p1 < p2 < 1 and 0 < lo <= hi < alpha_high.
  void validate() const;

  Mixture mixture() const { return {p1, p2 - p1, 1.0 - p2}; }

  /// Builds parameters from class shares without validating them. Used for
  /// deliberately degenerate mixtures in attack comparisons.
  static EIotaParams from_mixture_unchecked(Mixture m, AlphaRange low = {}, double alpha_high = 5.0) {
    return {m.p0, m.p0 + m.low, low, alpha_high};
  }
};

Strategy draw_strategy(const EIotaParams& params, Rng& rng);
/// Same as draw_strategy with the branch variate `r` supplied.
Strategy draw_strategy(const EIotaParams& params, double r, Rng& rng);

// ---------------------------------------------------------------------------
// Walks

struct StartSite {
  enum class Kind : std::uint8_t { Genesis, Anchor } kind = Kind::Genesis;
  /// Anchor mode: start at the newest view member issued at least this many
  /// seconds before the view's `now`.
  double window = 0.0;
};

struct WalkerConfig {
  double alpha = 0.0;
  int n_walkers = 1;
  StartSite start{};

  void validate() const;
};

struct WalkTrace {
  Strategy strategy{};
  std::vector<TxId> path;
  TxId tip{};
  bool weighted_computation = false;

  std::size_t steps() const { return path.empty() ? 0 : path.size() - 1; }
};

/// Transition distribution over `children(current)`, proportional to
/// exp(alpha * H(child)) and evaluated with the largest exponent shifted to 0.
std::vector<double> transition_probabilities(const TangleView& view, TxId current, double alpha);

/// One step toward the tips. Throws NoChildren when `current` is a view tip.
TxId walk_step(const TangleView& view, TxId current, double alpha, Rng& rng);

TxId start_site(const TangleView& view, const StartSite& start);

/// Walks from the start site until a tip of the view. With several walkers
/// the one with the shortest path wins; ties go to the lowest tip id.
WalkTrace random_walk(const TangleView& view, const WalkerConfig& config, Rng& rng);

/// A walk under a drawn strategy, with the walker count and start of `base`.
WalkTrace random_walk(const TangleView& view, const Strategy& strategy, const WalkerConfig& base, Rng& rng);

// ---------------------------------------------------------------------------
// Parent selection

struct RetryPolicy {
  int max_retries = 10;
  enum class OnExhaustion : std::uint8_t { DuplicateFirst, Throw } on_exhaustion = OnExhaustion::DuplicateFirst;
};

struct IotaTsa {
  double alpha = 5.0;
};

struct GIotaTsa {
  double alpha = 5.0;
  /// Tips older than this (seconds since issue) count as left behind.
  double left_behind_threshold = 0.01;
};

struct EIotaTsa {
  EIotaParams params{};
};

struct TsaConfig {
  std::variant<IotaTsa, GIotaTsa, EIotaTsa> kind = EIotaTsa{};
  int n_walkers = 1;
  StartSite start{};
  RetryPolicy retry{};

  std::string_view name() const;
  bool is_eiota() const { return std::holds_alternative<EIotaTsa>(kind); }
  void validate() const;
};

struct ParentSelection {
  std::vector<TxId> parents;
  /// One trace per parent walk; each carries its own strategy.
  std::array<WalkTrace, 2> walks{};
  /// Reselections caused by conflicting pairs.
  int retries = 0;
  /// Retries ran out and the first tip was duplicated.
  bool fallback = false;
};

ParentSelection select_parents_iota(const TangleView& view, double alpha, Rng& rng,
                                    const WalkerConfig& base = {}, const RetryPolicy& retry = {});

/// As select_parents_iota, plus a uniformly drawn left-behind tip as a third
/// parent when the view has any.
ParentSelection select_parents_giota(const TangleView& view, double alpha, double left_behind_threshold,
                                     Rng& rng, const WalkerConfig& base = {}, const RetryPolicy& retry = {});

/// Strategies are drawn per walk or per attempt as params.scope says.
ParentSelection select_parents_eiota(const TangleView& view, const EIotaParams& params, Rng& rng,
                                     const WalkerConfig& base = {}, const RetryPolicy& retry = {});

ParentSelection select_parents(const TangleView& view, const TsaConfig& tsa, Rng& rng);

/// A single tip chosen the way the configured TSA chooses one parent.
WalkTrace select_tip(const TangleView& view, const TsaConfig& tsa, Rng& rng);

}  // namespace tangle
