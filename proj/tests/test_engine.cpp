#include <doctest.h>

#include <numeric>

#include "tangle/engine.hpp"
#include "tangle/snapshot.hpp"

using namespace tangle;

namespace {

ScenarioConfig small(TsaConfig tsa = {}, std::uint64_t total = 1500) {
  ScenarioConfig c;
  c.tsa = tsa;
  c.lambda = 200;
  c.delay_tau = 0.5;
  c.total_transactions = total;
  c.master_seed = 7;
  c.confidence.runs = 40;
  c.confidence.sample = 60;
  return c;
}

std::string without_wall(std::string row) {
  // wall_s is the ninth column.
  std::size_t start = 0;
  for (int i = 0; i < 8; ++i) start = row.find(',', start) + 1;
  return row.erase(start, row.find(',', start) - start);
}

}  // namespace

TEST_CASE("constant arrivals are evenly spaced") {
  ScenarioConfig c;
  c.arrival = Arrival::Constant;
  c.lambda = 2000;
  const auto t = schedule_arrivals(c, 3);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(0.0005));
  CHECK(t[1] == doctest::Approx(0.0010));
  CHECK(t[2] == doctest::Approx(0.0015));
}

TEST_CASE("poisson inter-arrivals have mean 1/lambda") {
  ScenarioConfig c;
  c.arrival = Arrival::Poisson;
  c.lambda = 2000;
  const auto t = schedule_arrivals(c, 100000);
  CHECK(t.back() / 100000 == doctest::Approx(1.0 / 2000).epsilon(0.01));
  CHECK(std::is_sorted(t.begin(), t.end()));
}

TEST_CASE("clock orders visibility before issuance at equal times") {
  SimulationClock clock;
  clock.push(1.0, SimEventKind::HonestIssue);
  clock.push(1.0, SimEventKind::Visible, tx_id(3));
  clock.push(0.5, SimEventKind::HonestIssue);
  clock.push(1.0, SimEventKind::Visible, tx_id(4));
  CHECK(clock.pop().time == 0.5);
  CHECK(clock.pop().tx == tx_id(3));
  CHECK(clock.pop().tx == tx_id(4));
  CHECK(clock.pop().kind == SimEventKind::HonestIssue);
  CHECK(clock.empty());
}

TEST_CASE("honest run invariants for every tsa") {
  for (const TsaConfig& tsa : {TsaConfig{IotaTsa{}}, TsaConfig{GIotaTsa{5.0, 0.1}}, TsaConfig{EIotaTsa{}}}) {
    const ScenarioConfig c = small(tsa);
    const SimulationResult r = run(c);
    const TangleState& t = r.tangle;
    CHECK(t.size() == c.total_transactions);
    CHECK(r.log.walks() == 2 * (c.total_transactions - 1));
    CHECK(r.report.walks == r.log.walks());
    CHECK(t.approved_count() + t.tips().size() == t.size());
    CHECK(r.report.approved + r.report.tips == r.report.total);
    for (std::size_t i = 1; i < t.size(); ++i) {
      const Transaction& x = t.tx(tx_id(i));
      CHECK(x.visible_time == doctest::Approx(x.issue_time + c.delay_tau));
      for (TxId p : x.parents) {
        CHECK(index(p) < i);
        CHECK(t.tx(p).visible_time <= x.issue_time);
      }
    }
    if (tsa.is_eiota()) {
      CHECK(r.report.compute_walks < r.report.walks);
      REQUIRE(r.report.mixture.has_value());
      CHECK(r.report.mixture->total() == r.report.walks);
    } else {
      CHECK(r.report.compute_walks == r.report.walks);
      CHECK_FALSE(r.report.mixture.has_value());
    }
  }
}

TEST_CASE("zero delay lets every issuance see all previous transactions") {
  ScenarioConfig c = small({IotaTsa{}}, 300);
  c.delay_tau = 0.0;
  c.arrival = Arrival::Constant;
  const SimulationResult r = run(c);
  // With full visibility each new transaction approves one of the current tips,
  // so the tip count never grows beyond a couple.
  CHECK(r.tangle.tips().size() <= 2);
}

TEST_CASE("results do not depend on the worker count") {
  ScenarioConfig a = small({EIotaTsa{}}, 1200);
  ScenarioConfig b = a;
  a.workers = 1;
  b.workers = 8;
  const SimulationResult ra = run(a), rb = run(b);
  CHECK(ra.log.to_jsonl() == rb.log.to_jsonl());
  CHECK(export_snapshot(ra.tangle) == export_snapshot(rb.tangle));
  CHECK(without_wall(to_csv_row(ra.report)) == without_wall(to_csv_row(rb.report)));
  CHECK(confidence_csv(ra.report) == confidence_csv(rb.report));
}

TEST_CASE("same seed reproduces and another seed differs") {
  const ScenarioConfig a = small({IotaTsa{}}, 600);
  ScenarioConfig b = a;
  b.master_seed = 8;
  CHECK(run(a).log.to_jsonl() == run(a).log.to_jsonl());
  CHECK(run(a).log.to_jsonl() != run(b).log.to_jsonl());
}

TEST_CASE("a one-transaction run holds only genesis") {
  const SimulationResult r = run(small({}, 1));
  CHECK(r.tangle.size() == 1);
  CHECK(r.report.walks == 0);
  CHECK(r.report.tips == 1);
}

TEST_CASE("event log round trips through jsonl") {
  const SimulationResult r = run(small({EIotaTsa{}}, 300));
  const std::string text = r.log.to_jsonl();
  const EventLog back = EventLog::from_jsonl(text);
  CHECK(back.to_jsonl() == text);
  CHECK(back.tsa() == "eiota");
  CHECK(back.walks() == r.log.walks());
  CHECK(text.find("{\"time\":") != std::string::npos);
  const auto first_issue = text.find("\"kind\":\"issue\"");
  REQUIRE(first_issue != std::string::npos);
  const std::string line = text.substr(text.rfind('\n', first_issue) + 1, text.find('\n', first_issue) - text.rfind('\n', first_issue) - 1);
  const char* order[] = {"\"time\"", "\"kind\"", "\"tx_id\"", "\"strategy\"", "\"alpha\"", "\"parents\"",
                         "\"walk_lengths\"", "\"weighted_computation\"", "\"retries\"", "\"fallback\""};
  std::size_t at = 0;
  for (const char* key : order) {
    const auto pos = line.find(key);
    REQUIRE_MESSAGE(pos != std::string::npos, key);
    CHECK(pos >= at);
    at = pos;
  }
}

TEST_CASE("invalid scenarios are ConfigInvalid") {
  ScenarioConfig c;
  c.lambda = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.delay_tau = -1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.total_transactions = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}
