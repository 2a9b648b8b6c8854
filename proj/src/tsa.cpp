#include "tangle/tsa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

namespace tangle {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Uniform: return "uniform";
    case StrategyKind::WeightedLow: return "weighted_low";
    case StrategyKind::WeightedHigh: return "weighted_high";
  }
  return "uniform";
}

void EIotaParams::validate() const {
  if (!(0.0 < p1 && p1 < p2 && p2 < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("need 0 < p1 < p2 < 1, got p1={} p2={}", p1, p2));
  }
  if (!(0.0 < alpha_low.lo && alpha_low.lo <= alpha_low.hi && alpha_low.hi < alpha_high)) {
    throw Error(ErrorCode::ConfigInvalid,
                fmt::format("need 0 < alpha_low [{}, {}] < alpha_high {}", alpha_low.lo, alpha_low.hi, alpha_high));
  }
}

Strategy draw_strategy(const EIotaParams& params, double r, Rng& rng) {
  if (r < params.p1) return {StrategyKind::Uniform, 0.0};
  if (r < params.p2) return {StrategyKind::WeightedLow, rng.uniform(params.alpha_low.lo, params.alpha_low.hi)};
  return {StrategyKind::WeightedHigh, params.alpha_high};
}

Strategy draw_strategy(const EIotaParams& params, Rng& rng) {
  const double r = rng.uniform();
  return draw_strategy(params, r, rng);
}

void WalkerConfig::validate() const {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "alpha must be non-negative");
  if (n_walkers < 1) throw Error(ErrorCode::ConfigInvalid, "n_walkers must be at least 1");
}

std::vector<double> transition_probabilities(const TangleView& view, TxId current, double alpha) {
  const auto kids = view.children(current);
  std::vector<double> p(kids.size(), 0.0);
  if (kids.empty()) return p;
  std::int64_t hmax = view.weight(kids[0]);
  for (TxId c : kids) hmax = std::max(hmax, view.weight(c));
  double total = 0.0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    p[i] = std::exp(alpha * static_cast<double>(view.weight(kids[i]) - hmax));
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

TxId walk_step(const TangleView& view, TxId current, double alpha, Rng& rng) {
  const auto kids = view.children(current);
  if (kids.empty()) {
    throw Error(ErrorCode::NoChildren, fmt::format("transaction {} is a tip of the view", index(current)));
  }
  if (kids.size() == 1) return kids[0];
  if (alpha == 0.0) return kids[rng.below(kids.size())];

  thread_local std::vector<double> mass;
  mass.resize(kids.size());
  std::int64_t hmax = view.weight(kids[0]);
  for (TxId c : kids) hmax = std::max(hmax, view.weight(c));
  double total = 0.0;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    total += std::exp(alpha * static_cast<double>(view.weight(kids[i]) - hmax));
    mass[i] = total;
  }
  const double u = rng.uniform() * total;
  const auto it = std::upper_bound(mass.begin(), mass.end(), u);
  return kids[std::min<std::size_t>(static_cast<std::size_t>(it - mass.begin()), kids.size() - 1)];
}

TxId start_site(const TangleView& view, const StartSite& start) {
  if (start.kind == StartSite::Kind::Genesis) return kGenesis;
  const double cutoff = view.now() - start.window;
  for (std::size_t i = view.tangle().size(); i-- > 1;) {
    const TxId id = tx_id(i);
    if (view.contains(id) && view.tangle().tx(id).issue_time <= cutoff) return id;
  }
  return kGenesis;
}

namespace {

WalkTrace single_walk(const TangleView& view, TxId start, double alpha, Rng& rng) {
  WalkTrace trace;
  trace.path.push_back(start);
  TxId cur = start;
  while (!view.is_tip(cur)) {
    cur = walk_step(view, cur, alpha, rng);
    trace.path.push_back(cur);
  }
  trace.tip = cur;
  return trace;
}

Strategy fixed_strategy(double alpha) {
  return alpha == 0.0 ? Strategy{StrategyKind::Uniform, 0.0} : Strategy{StrategyKind::WeightedHigh, alpha};
}

/// `next_strategy(rng)` supplies the strategy of each walk.
template <class NextStrategy>
ParentSelection select_pair(const TangleView& view, NextStrategy&& next_strategy, Rng& rng,
                            const WalkerConfig& base, const RetryPolicy& retry) {
  ParentSelection sel;
  for (int attempt = 0;; ++attempt) {
    for (auto& walk : sel.walks) {
      const Strategy strategy = next_strategy(rng);
      walk = random_walk(view, strategy, base, rng);
    }
    const std::array<TxId, 2> pair{sel.walks[0].tip, sel.walks[1].tip};
    if (view.tangle().compatible(pair)) {
      sel.parents.assign(pair.begin(), pair.end());
      return sel;
    }
    if (attempt >= retry.max_retries) break;
    ++sel.retries;
  }
  if (retry.on_exhaustion == RetryPolicy::OnExhaustion::Throw) {
    throw Error(ErrorCode::ConflictRetriesExhausted,
                fmt::format("no compatible tip pair after {} reselections", retry.max_retries));
  }
  sel.fallback = true;
  sel.parents = {sel.walks[0].tip, sel.walks[0].tip};
  return sel;
}

}  // namespace

WalkTrace random_walk(const TangleView& view, const Strategy& strategy, const WalkerConfig& base, Rng& rng) {
  const TxId start = start_site(view, base.start);
  WalkTrace best = single_walk(view, start, strategy.alpha, rng);
  for (int w = 1; w < base.n_walkers; ++w) {
    WalkTrace t = single_walk(view, start, strategy.alpha, rng);
    if (t.path.size() < best.path.size() || (t.path.size() == best.path.size() && t.tip < best.tip)) {
      best = std::move(t);
    }
  }
  best.strategy = strategy;
  best.weighted_computation = strategy.weighted_computation();
  return best;
}

WalkTrace random_walk(const TangleView& view, const WalkerConfig& config, Rng& rng) {
  config.validate();
  return random_walk(view, fixed_strategy(config.alpha), config, rng);
}

ParentSelection select_parents_iota(const TangleView& view, double alpha, Rng& rng, const WalkerConfig& base,
                                    const RetryPolicy& retry) {
  return select_pair(view, [alpha](Rng&) { return fixed_strategy(alpha); }, rng, base, retry);
}

ParentSelection select_parents_giota(const TangleView& view, double alpha, double left_behind_threshold, Rng& rng,
                                     const WalkerConfig& base, const RetryPolicy& retry) {
  ParentSelection sel = select_pair(view, [alpha](Rng&) { return fixed_strategy(alpha); }, rng, base, retry);
  const TangleState& tangle = view.tangle();
  std::vector<TxId> left_behind;
  std::array<TxId, 3> triple{sel.parents[0], sel.parents[1], kGenesis};
  for (TxId t : view.tips().items()) {
    if (t == sel.parents[0] || t == sel.parents[1]) continue;
    if (view.now() - tangle.tx(t).issue_time <= left_behind_threshold) continue;
    triple[2] = t;
    if (tangle.compatible(triple)) left_behind.push_back(t);
  }
  if (!left_behind.empty()) sel.parents.push_back(left_behind[rng.below(left_behind.size())]);
  return sel;
}

ParentSelection select_parents_eiota(const TangleView& view, const EIotaParams& params, Rng& rng,
                                     const WalkerConfig& base, const RetryPolicy& retry) {
  if (params.scope == EIotaParams::DrawScope::Walk) {
    return select_pair(view, [&params](Rng& r) { return draw_strategy(params, r); }, rng, base, retry);
  }
  std::size_t n = 0;
  Strategy shared;
  return select_pair(
      view,
      [&](Rng& r) {
        if (n++ % 2 == 0) shared = draw_strategy(params, r);
        return shared;
      },
      rng, base, retry);
}

std::string_view TsaConfig::name() const {
  if (std::holds_alternative<IotaTsa>(kind)) return "iota";
  if (std::holds_alternative<GIotaTsa>(kind)) return "giota";
  return "eiota";
}

void TsaConfig::validate() const {
  if (n_walkers < 1) throw Error(ErrorCode::ConfigInvalid, "n_walkers must be at least 1");
  if (retry.max_retries < 0) throw Error(ErrorCode::ConfigInvalid, "max_retries must be non-negative");
  if (start.window < 0) throw Error(ErrorCode::ConfigInvalid, "start window must be non-negative");
  if (const auto* i = std::get_if<IotaTsa>(&kind); i && !(i->alpha >= 0)) {
    throw Error(ErrorCode::ConfigInvalid, "alpha must be non-negative");
  }
  if (const auto* g = std::get_if<GIotaTsa>(&kind)) {
    if (!(g->alpha >= 0)) throw Error(ErrorCode::ConfigInvalid, "alpha must be non-negative");
    if (!(g->left_behind_threshold >= 0)) throw Error(ErrorCode::ConfigInvalid, "left-behind threshold must be >= 0");
  }
  if (const auto* e = std::get_if<EIotaTsa>(&kind)) e->params.validate();
}

ParentSelection select_parents(const TangleView& view, const TsaConfig& tsa, Rng& rng) {
  const WalkerConfig base{0.0, tsa.n_walkers, tsa.start};
  if (const auto* i = std::get_if<IotaTsa>(&tsa.kind)) return select_parents_iota(view, i->alpha, rng, base, tsa.retry);
  if (const auto* g = std::get_if<GIotaTsa>(&tsa.kind)) {
    return select_parents_giota(view, g->alpha, g->left_behind_threshold, rng, base, tsa.retry);
  }
  return select_parents_eiota(view, std::get<EIotaTsa>(tsa.kind).params, rng, base, tsa.retry);
}

WalkTrace select_tip(const TangleView& view, const TsaConfig& tsa, Rng& rng) {
  const WalkerConfig base{0.0, tsa.n_walkers, tsa.start};
  if (const auto* i = std::get_if<IotaTsa>(&tsa.kind)) return random_walk(view, fixed_strategy(i->alpha), base, rng);
  if (const auto* g = std::get_if<GIotaTsa>(&tsa.kind)) return random_walk(view, fixed_strategy(g->alpha), base, rng);
  const Strategy s = draw_strategy(std::get<EIotaTsa>(tsa.kind).params, rng);
  return random_walk(view, s, base, rng);
}

}  // namespace tangle
