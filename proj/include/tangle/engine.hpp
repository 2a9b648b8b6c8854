#pragma once

#include <chrono>
#include <optional>
#include <queue>
#include <vector>

#include "tangle/event_log.hpp"
#include "tangle/metrics.hpp"
#include "tangle/scenario.hpp"

namespace tangle {

/// Issue times of honest transactions 1..count: k/lambda in constant mode,
/// cumulative exponential gaps with mean 1/lambda in poisson mode.
std::vector<double> schedule_arrivals(const ScenarioConfig& config, std::size_t count);

/// Lazily generated honest arrival stream.
class ArrivalSchedule {
 public:
  explicit ArrivalSchedule(const ScenarioConfig& config);
  double next();

 private:
  Arrival mode_;
  double lambda_;
  std::uint64_t count_ = 0;
  double last_ = 0.0;
  Rng rng_;
};

enum class SimEventKind : std::uint8_t { Visible = 0, AdversaryVisible = 1, HonestIssue = 2 };

struct SimEvent {
  double time = 0.0;
  SimEventKind kind = SimEventKind::HonestIssue;
  std::uint64_t seq = 0;
  TxId tx{};
};

/// Event queue ordered by (time, kind, sequence). Visibility events at a
/// given time are applied before issuances at that same time.
class SimulationClock {
 public:
  void push(double time, SimEventKind kind, TxId tx = {});
  bool empty() const { return queue_.empty(); }
  const SimEvent& top() const { return queue_.top(); }
  SimEvent pop();
  double now() const { return now_; }
  void set_now(double t) { now_ = t; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
};

struct SimulationResult {
  TangleState tangle;
  EventLog log;
  MetricsReport report;
};

/// Discrete-event driver for honest issuance.
///
/// Each honest issuance reads the delayed view (transactions whose
/// visible_time has passed), runs the configured parent selection with an
/// RNG substream keyed by (seed, transaction id) and attaches with
/// visible_time = issue_time + tau. Adversaries interleave their own actions
/// through advance_to / attach_adversary / publish.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const ScenarioConfig& config() const { return config_; }
  const TangleState& tangle() const { return tangle_; }
  const EventLog& log() const { return log_; }
  double now() const { return clock_.now(); }
  /// Total transaction count reached.
  bool finished() const { return tangle_.size() >= config_.total_transactions; }

  /// Processes every event with time <= t, then sets the clock to t.
  void advance_to(double t);
  /// Processes events until the transaction budget is spent.
  void run_to_completion();

  /// What honest nodes currently see.
  const TangleView& honest_view() const { return view_; }
  /// What the adversary currently sees: the honest view plus its own
  /// transactions, or the full tangle when omniscient.
  const TangleView& adversary_view();

  /// Attaches an adversary transaction at the current time. Withheld
  /// transactions stay invisible until publish().
  TxId attach_adversary(std::span<const TxId> parents, std::optional<ConflictSetId> conflict_set, bool withheld);
  /// Makes withheld transactions visible after the propagation delay.
  void publish(std::span<const TxId> ids);
  ConflictSetId open_conflict_set(TxId member) { return tangle_.open_conflict_set(member); }
  ConflictSetId open_conflict_set() { return tangle_.open_conflict_set(); }

  std::size_t adversary_issuances() const { return adversary_count_; }
  double wall_seconds() const;

  /// Final metrics; consumes the simulation state.
  SimulationResult finish() &&;

 private:
  void process(const SimEvent& e);
  void issue_honest(double t);

  ScenarioConfig config_;
  TangleState tangle_;
  TangleView view_;
  std::optional<TangleView> adversary_view_;
  std::optional<TangleView> omniscient_view_;
  SimulationClock clock_;
  ArrivalSchedule arrivals_;
  EventLog log_;
  std::size_t adversary_count_ = 0;
  std::chrono::steady_clock::time_point started_;
};

/// Runs an honest scenario to completion.
SimulationResult run(const ScenarioConfig& config);

}  // namespace tangle
