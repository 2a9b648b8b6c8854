#include "tangle/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <fmt/format.h>

namespace tangle {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

struct Milestone {
  double time = kNever;
  std::function<void()> fn;
};

/// Event loop shared by the attacks. Adversary slots fall at
/// from + k / rate (k >= 1), samples on a grid of step dt starting at
/// `from`. Milestones run before slots and samples due at the same time.
void drive(Simulation& sim, double from, double rate, double dt, std::vector<Milestone> milestones,
           const std::function<void()>& act, const std::function<void()>& sample) {
  std::uint64_t k = 1, m = 0;
  auto slot = [&] { return rate > 0 ? from + static_cast<double>(k) / rate : kNever; };
  auto grid = [&] { return from + static_cast<double>(m) * dt; };
  while (!sim.finished()) {
    double next = std::min(slot(), grid());
    for (const auto& ms : milestones) next = std::min(next, ms.time);
    sim.advance_to(next);
    if (sim.finished()) break;
    for (auto& ms : milestones) {
      if (ms.time <= next) {
        ms.fn();
        ms.time = kNever;
      }
      if (sim.finished()) return;
    }
    if (slot() <= next) {
      act();
      ++k;
      if (sim.finished()) break;
    }
    if (grid() <= next) {
      sample();
      ++m;
    }
  }
}

double sample_step(const ScenarioConfig& s) { return s.delay_tau > 0 ? s.delay_tau : 10.0 / s.lambda; }

const AttackerConfig& attacker(const ScenarioConfig& s, AttackKind kind) {
  if (!s.adversary) throw Error(ErrorCode::ConfigInvalid, "scenario has no attacker");
  if (s.adversary->kind != kind) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("attacker kind is {}", to_string(s.adversary->kind)));
  }
  return *s.adversary;
}

void start_attack(Simulation& sim, double start) {
  sim.advance_to(start);
  if (sim.finished()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("transaction budget is spent before t = {}", start));
  }
}

/// Parents for an adversary root: two weighted walks on `view`.
std::vector<TxId> place(const TangleView& view, const AttackerConfig& ac, Rng& rng) {
  return select_parents_iota(view, ac.placement_alpha, rng).parents;
}

void conclude(AttackOutcome& o, Simulation&& sim, const ScenarioConfig& s) {
  o.adversary_issuances = sim.adversary_issuances();
  o.horizon = sim.now();
  o.trajectory.push_back({sim.now(), sim.tangle().cumulative_weight(o.tx_a), sim.tangle().cumulative_weight(o.tx_b)});
  o.result = std::move(sim).finish();
  const TxId pair[] = {o.tx_a, o.tx_b};
  const auto est = estimate_confidence_shared(TangleView::full(o.result.tangle), pair, s.tsa, s.confidence.runs,
                                              s.master_seed, s.workers);
  o.confidence_a = est[0].confidence();
  o.confidence_b = est[1].confidence();
}

}  // namespace

AttackOutcome run_large_weight(const ScenarioConfig& scenario) {
  const AttackerConfig& ac = attacker(scenario, AttackKind::LargeWeight);
  Simulation sim(scenario);
  start_attack(sim, ac.start_time);

  const TangleView& view = sim.adversary_view();
  // Target: the first honest transaction issued at or after start - lead
  // that is confirmed in the adversary's view.
  std::vector<TxId> candidates;
  for (const Transaction& t : sim.tangle().transactions()) {
    if (t.issuer == Issuer::Honest && t.id != kGenesis && t.issue_time >= ac.start_time - ac.target_lead &&
        view.contains(t.id) && !view.children(t.id).empty()) {
      candidates.push_back(t.id);
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::TargetNotConfirmed, "no candidate target has a visible approver");
  std::optional<TxId> target;
  for (const auto& c : estimate_confidence_shared(view, candidates, scenario.tsa, scenario.confidence.runs,
                                                  scenario.master_seed, scenario.workers)) {
    if (c.confidence() >= 0.5) {
      target = c.tx;
      break;
    }
  }
  if (!target) {
    throw Error(ErrorCode::TargetNotConfirmed,
                fmt::format("none of {} candidate targets has confidence >= 0.5", candidates.size()));
  }

  AttackOutcome o;
  o.kind = AttackKind::LargeWeight;
  o.start_time = ac.start_time;
  o.tx_a = *target;
  const ConflictSetId set = sim.open_conflict_set(*target);
  const std::vector<TxId> parents = sim.tangle().tx(*target).parents;
  o.tx_b = sim.attach_adversary(parents, set, false);

  TxId head = o.tx_b;
  auto act = [&] {
    const TxId p[] = {head, o.tx_b};
    head = sim.attach_adversary(p, std::nullopt, false);
  };
  auto sample = [&] {
    o.trajectory.push_back({sim.now(), sim.tangle().cumulative_weight(o.tx_a), sim.tangle().cumulative_weight(o.tx_b)});
  };
  drive(sim, ac.start_time, ac.power_fraction * scenario.lambda, sample_step(scenario), {}, act, sample);
  conclude(o, std::move(sim), scenario);
  o.success = o.confidence_b > o.confidence_a;
  return o;
}

AttackOutcome run_parasite(const ScenarioConfig& scenario) {
  const AttackerConfig& ac = attacker(scenario, AttackKind::Parasite);
  if (ac.power_fraction >= 0.5) {
    throw Error(ErrorCode::InvalidPower, fmt::format("parasite attack needs pa < 0.5, got {}", ac.power_fraction));
  }
  Simulation sim(scenario);
  start_attack(sim, ac.start_time);
  const TxId anchor = tx_id(ac.anchor);
  if (!sim.adversary_view().contains(anchor)) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("anchor {} is not visible at attack time", ac.anchor));
  }

  AttackOutcome o;
  o.kind = AttackKind::Parasite;
  o.start_time = ac.start_time;
  Rng rng = Rng::substream(scenario.master_seed, Stream::Adversary, 0);
  const ConflictSetId set = sim.open_conflict_set();
  o.tx_b = sim.attach_adversary(place(sim.adversary_view(), ac, rng), set, true);

  std::vector<TxId> hidden{o.tx_b};
  std::vector<TxId> heads(static_cast<std::size_t>(ac.branching), o.tx_b);
  std::size_t k = 0;
  bool revealed = false;
  bool published = false;

  auto act = [&] {
    TxId& head = heads[k++ % heads.size()];
    const TxId p[] = {head, anchor};
    head = sim.attach_adversary(p, std::nullopt, !revealed);
    if (!revealed) hidden.push_back(head);
  };
  auto sample = [&] {
    o.trajectory.push_back(
        {sim.now(), published ? sim.tangle().cumulative_weight(o.tx_a) : 0, sim.tangle().cumulative_weight(o.tx_b)});
  };
  std::vector<Milestone> ms;
  ms.push_back({ac.start_time + ac.secret_period, [&] {
                  Rng r = Rng::substream(scenario.master_seed, Stream::Adversary, 1);
                  o.tx_a = sim.attach_adversary(place(sim.honest_view(), ac, r), set, false);
                  published = true;
                }});
  ms.push_back({ac.start_time + ac.secret_period + ac.reveal_delay, [&] {
                  sim.publish(hidden);
                  revealed = true;
                }});
  // Both milestones can share a timestamp; publishing i must come first.
  ms[1].time = std::max(ms[1].time, ms[0].time);
  drive(sim, ac.start_time, ac.power_fraction * scenario.lambda, sample_step(scenario), std::move(ms), act, sample);
  if (!published) throw Error(ErrorCode::ConfigInvalid, "transaction budget is spent before i is published");
  if (!revealed) sim.publish(hidden);
  conclude(o, std::move(sim), scenario);
  o.success = o.confidence_b > o.confidence_a;
  return o;
}

AttackOutcome run_splitting(const ScenarioConfig& scenario) {
  const AttackerConfig& ac = attacker(scenario, AttackKind::Splitting);
  Simulation sim(scenario);
  start_attack(sim, ac.start_time);

  AttackOutcome o;
  o.kind = AttackKind::Splitting;
  o.start_time = ac.start_time;
  Rng rng = Rng::substream(scenario.master_seed, Stream::Adversary, 0);
  const ConflictSetId set = sim.open_conflict_set();
  const std::vector<TxId> roots = place(sim.adversary_view(), ac, rng);
  o.tx_a = sim.attach_adversary(roots, set, false);
  o.tx_b = sim.attach_adversary(roots, set, false);

  std::optional<double> lost;
  std::uint64_t checks = 0;

  auto act = [&] {
    const TangleView& view = sim.adversary_view();
    const TangleState& t = sim.tangle();
    const std::int64_t ha = view.weight(o.tx_a), hb = view.weight(o.tx_b);
    const bool pick_a = ha != hb ? ha < hb : rng.below(2) == 0;
    const TxId root = pick_a ? o.tx_a : o.tx_b;
    std::vector<TxId> branch;
    for (TxId tip : view.tips().items()) {
      if (t.conflict_member(tip, set) == root) branch.push_back(tip);
    }
    std::sort(branch.begin(), branch.end());
    std::vector<TxId> p{root, root};
    if (!branch.empty()) {
      p = {branch[rng.below(branch.size())], branch[rng.below(branch.size())]};
      if (!t.compatible(p)) p = {root, root};
    }
    sim.attach_adversary(p, std::nullopt, false);
  };
  // The split holds from the first check at which honest tip selection
  // reaches both roots (confidence >= 0.05 each) until the first check at
  // which it no longer does.
  std::optional<double> held;
  auto sample = [&] {
    o.trajectory.push_back({sim.now(), sim.tangle().cumulative_weight(o.tx_a), sim.tangle().cumulative_weight(o.tx_b)});
    if (lost) return;
    const TangleView& view = sim.honest_view();
    if (!view.contains(o.tx_a) || !view.contains(o.tx_b)) return;
    const TxId pair[] = {o.tx_a, o.tx_b};
    const auto est = estimate_confidence_shared(view, pair, scenario.tsa, scenario.confidence.runs,
                                                mix64(scenario.master_seed ^ ++checks), scenario.workers);
    const bool both = est[0].confidence() >= 0.05 && est[1].confidence() >= 0.05;
    if (both && !held) held = sim.now();
    if (!both && held) lost = sim.now();
  };
  drive(sim, ac.start_time, ac.power_fraction * scenario.lambda, sample_step(scenario) / 4, {}, act, sample);
  const double end = sim.now();
  conclude(o, std::move(sim), scenario);
  o.split_duration = held ? (lost ? *lost : end) - ac.start_time : 0.0;
  o.success = o.confidence_a >= 0.05 && o.confidence_b >= 0.05;
  return o;
}

AttackOutcome run_attack(const ScenarioConfig& scenario) {
  if (!scenario.adversary) throw Error(ErrorCode::ConfigInvalid, "scenario has no attacker");
  switch (scenario.adversary->kind) {
    case AttackKind::LargeWeight: return run_large_weight(scenario);
    case AttackKind::Parasite: return run_parasite(scenario);
    case AttackKind::Splitting: return run_splitting(scenario);
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown attack kind");
}

std::string to_csv_row(const AttackOutcome& o, const ScenarioConfig& scenario) {
  const double pa = scenario.adversary ? scenario.adversary->power_fraction : 0.0;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", to_string(o.kind), scenario.tsa.name(), scenario.master_seed,
                     pa, o.success ? "true" : "false", index(o.tx_a), index(o.tx_b), o.confidence_a, o.confidence_b,
                     o.adversary_issuances, o.split_duration ? fmt::format("{}", *o.split_duration) : "");
}

std::string weight_gap_csv(const AttackOutcome& o) {
  std::string out = "time,H_branch_a,H_branch_b\n";
  for (const auto& s : o.trajectory) out += fmt::format("{},{},{}\n", s.time, s.h_a, s.h_b);
  return out;
}

}  // namespace tangle
