#include "tangle/engine.hpp"

#include <fmt/format.h>

namespace tangle {

ArrivalSchedule::ArrivalSchedule(const ScenarioConfig& config)
    : mode_(config.arrival),
      lambda_(config.lambda),
      rng_(Rng::substream(config.master_seed, Stream::Arrivals, 0)) {}

double ArrivalSchedule::next() {
  ++count_;
  if (mode_ == Arrival::Constant) {
    last_ = static_cast<double>(count_) / lambda_;
  } else {
    last_ += rng_.exponential(lambda_);
  }
  return last_;
}

std::vector<double> schedule_arrivals(const ScenarioConfig& config, std::size_t count) {
  if (!(config.lambda > 0)) throw Error(ErrorCode::ConfigInvalid, "lambda must be positive");
  ArrivalSchedule s(config);
  std::vector<double> out(count);
  for (double& t : out) t = s.next();
  return out;
}

void SimulationClock::push(double time, SimEventKind kind, TxId tx) {
  queue_.push(SimEvent{time, kind, seq_++, tx});
}

SimEvent SimulationClock::pop() {
  SimEvent e = queue_.top();
  queue_.pop();
  now_ = std::max(now_, e.time);
  return e;
}

Simulation::Simulation(ScenarioConfig config)
    : config_((config.validate(), std::move(config))),
      tangle_(),
      view_(tangle_),
      arrivals_(config_),
      started_(std::chrono::steady_clock::now()) {
  log_.set_tsa(std::string(config_.tsa.name()));
  log_.append(EventRecord{0.0, EventKind::Genesis, kGenesis, {}, {}, {}, {}, 0, false});
  if (config_.adversary) {
    if (config_.adversary->omniscient) {
      omniscient_view_.emplace(tangle_);
    } else {
      adversary_view_.emplace(tangle_);
    }
  }
  if (!finished()) clock_.push(arrivals_.next(), SimEventKind::HonestIssue);
}

void Simulation::process(const SimEvent& e) {
  switch (e.kind) {
    case SimEventKind::Visible:
      view_.reveal(e.tx);
      break;
    case SimEventKind::AdversaryVisible:
      if (adversary_view_) adversary_view_->reveal(e.tx);
      break;
    case SimEventKind::HonestIssue:
      if (!finished()) {
        issue_honest(e.time);
        if (!finished()) clock_.push(arrivals_.next(), SimEventKind::HonestIssue);
      }
      break;
  }
}

void Simulation::issue_honest(double t) {
  view_.set_now(t);
  const TxId id = tx_id(tangle_.size());
  Rng rng = Rng::substream(config_.master_seed, Stream::Selection, index(id));
  ParentSelection sel = select_parents(view_, config_.tsa, rng);

  TxMeta meta;
  meta.issue_time = t;
  meta.visible_time = t + config_.delay_tau;
  meta.issuer = Issuer::Honest;
  const TxId attached = tangle_.attach(sel.parents, meta);

  EventRecord r;
  r.time = t;
  r.kind = EventKind::Issue;
  r.tx = attached;
  r.parents = sel.parents;
  for (const auto& w : sel.walks) {
    r.strategies.push_back(w.strategy);
    r.walk_lengths.push_back(w.steps());
    r.weighted_computation.push_back(w.weighted_computation);
  }
  r.retries = sel.retries;
  r.fallback = sel.fallback;
  log_.append(std::move(r));

  clock_.push(meta.visible_time, SimEventKind::Visible, attached);
  if (adversary_view_) clock_.push(meta.visible_time, SimEventKind::AdversaryVisible, attached);
}

void Simulation::advance_to(double t) {
  while (!clock_.empty() && clock_.top().time <= t) {
    if (finished() && clock_.top().kind == SimEventKind::HonestIssue) {
      clock_.pop();
      continue;
    }
    process(clock_.pop());
  }
  clock_.set_now(std::max(clock_.now(), t));
  view_.set_now(clock_.now());
}

void Simulation::run_to_completion() {
  while (!finished() && !clock_.empty()) process(clock_.pop());
  view_.set_now(clock_.now());
}

const TangleView& Simulation::adversary_view() {
  if (omniscient_view_) {
    *omniscient_view_ = TangleView::full(tangle_);
    omniscient_view_->set_now(now());
    return *omniscient_view_;
  }
  if (adversary_view_) {
    adversary_view_->set_now(now());
    return *adversary_view_;
  }
  return view_;
}

TxId Simulation::attach_adversary(std::span<const TxId> parents, std::optional<ConflictSetId> conflict_set,
                                  bool withheld) {
  TxMeta meta;
  meta.issue_time = now();
  meta.visible_time = withheld ? kWithheld : now() + config_.delay_tau;
  meta.issuer = Issuer::Adversary;
  meta.conflict_set = conflict_set;
  const TxId id = tangle_.attach(parents, meta);
  ++adversary_count_;

  log_.append(EventRecord{now(), EventKind::Adversary, id, {}, {parents.begin(), parents.end()}, {}, {},
                          0, false});
  if (adversary_view_) adversary_view_->reveal(id);
  if (!withheld) clock_.push(meta.visible_time, SimEventKind::Visible, id);
  return id;
}

void Simulation::publish(std::span<const TxId> ids) {
  const double visible = now() + config_.delay_tau;
  for (TxId id : ids) {
    if (tangle_.tx(id).visible_time != kWithheld) continue;
    tangle_.publish(id, visible);
    log_.append(EventRecord{now(), EventKind::Reveal, id, {}, {}, {}, {}, 0, false});
    clock_.push(visible, SimEventKind::Visible, id);
  }
}

double Simulation::wall_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
}

SimulationResult Simulation::finish() && {
  const double wall = wall_seconds();
  MetricsReport report = finalize_report(log_, tangle_, config_, wall);
  return SimulationResult{std::move(tangle_), std::move(log_), std::move(report)};
}

SimulationResult run(const ScenarioConfig& config) {
  Simulation sim(config);
  sim.run_to_completion();
  return std::move(sim).finish();
}

}  // namespace tangle
