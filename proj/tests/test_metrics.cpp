#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tangle/engine.hpp"
#include "tangle/metrics.hpp"

using namespace tangle;

namespace {

ScenarioConfig eiota_run(std::uint64_t total = 2000) {
  ScenarioConfig c;
  c.lambda = 200;
  c.delay_tau = 0.5;
  c.total_transactions = total;
  c.master_seed = 3;
  c.confidence.runs = 50;
  c.confidence.sample = 40;
  return c;
}

}  // namespace

TEST_CASE("confidence is hits over runs") {
  const ConfidenceEstimate e{tx_id(4), 100, 97};
  CHECK(e.confidence() == doctest::Approx(0.97));
  CHECK(ConfidenceEstimate{}.confidence() == 0.0);
}

TEST_CASE("genesis is always confirmed") {
  const TangleState t = oracle::random_tangle(4, 300);
  for (const TsaConfig& tsa : {TsaConfig{IotaTsa{}}, TsaConfig{EIotaTsa{}}}) {
    const auto e = estimate_confidence(t, kGenesis, tsa, 100, 1);
    CHECK(e.runs == 100);
    CHECK(e.hits == 100);
  }
}

TEST_CASE("tip confidence matches its hitting probability") {
  const TangleState t = oracle::diamond_tangle();
  const auto exact = oracle::hitting_probabilities(t, 0.0);
  constexpr int kRuns = 40000;
  for (std::size_t i : {7u, 8u, 9u}) {
    const auto e = estimate_confidence(t, tx_id(i), TsaConfig{IotaTsa{0.0}}, kRuns, 11);
    const double p = exact[i];
    CHECK(std::abs(e.confidence() - p) <= 3 * std::sqrt(p * (1 - p) / kRuns));
  }
}

TEST_CASE("shared draws keep ancestors at least as confident as descendants") {
  const TangleState t = oracle::random_tangle(17, 400);
  std::vector<TxId> all;
  for (std::size_t i = 0; i < t.size(); ++i) all.push_back(tx_id(i));
  const auto est = estimate_confidence_shared(TangleView::full(t), all, TsaConfig{IotaTsa{1.0}}, 200, 5);
  REQUIRE(est.size() == t.size());
  for (std::size_t i = 1; i < t.size(); ++i) {
    for (TxId p : t.tx(tx_id(i)).parents) CHECK(est[index(p)].hits >= est[i].hits);
  }
}

TEST_CASE("shared estimator agrees with the single-transaction one in distribution") {
  const TangleState t = oracle::random_tangle(6, 200);
  const TxId x = tx_id(150);
  const TxId one[] = {x};
  const auto shared = estimate_confidence_shared(TangleView::full(t), one, TsaConfig{IotaTsa{0.5}}, 20000, 2);
  const auto single = estimate_confidence(t, x, TsaConfig{IotaTsa{0.5}}, 20000, 9);
  const double p = single.confidence();
  CHECK(std::abs(shared[0].confidence() - p) <= 4 * std::sqrt(p * (1 - p) / 20000 * 2) + 1e-9);
}

TEST_CASE("confidence does not depend on the worker count") {
  const TangleState t = oracle::random_tangle(8, 300);
  std::vector<TxId> some{tx_id(10), tx_id(100), tx_id(250)};
  const auto a = estimate_confidence_shared(TangleView::full(t), some, TsaConfig{EIotaTsa{}}, 300, 4, 1);
  const auto b = estimate_confidence_shared(TangleView::full(t), some, TsaConfig{EIotaTsa{}}, 300, 4, 8);
  for (std::size_t i = 0; i < some.size(); ++i) CHECK(a[i].hits == b[i].hits);
}

TEST_CASE("mixture tallies add up") {
  const SimulationResult r = run(eiota_run());
  const auto total = total_mixture(r.log);
  CHECK(total.total() == r.log.walks());
  CHECK(total.uniform + total.low + total.high == total.total());
  const auto windows = record_mixture(r.log, 0.5);
  std::size_t sum = 0;
  for (const auto& w : windows) {
    CHECK(w.total() == w.uniform + w.low + w.high);
    CHECK(w.window_end == doctest::Approx(w.window_start + 0.5));
    sum += w.total();
  }
  CHECK(sum == total.total());
  const double n = static_cast<double>(total.total());
  CHECK(total.uniform / n == doctest::Approx(0.10).epsilon(0.25));
  CHECK(total.low / n == doctest::Approx(0.55).epsilon(0.1));
  CHECK(total.high / n == doctest::Approx(0.35).epsilon(0.15));
  CHECK(r.report.compute_walks == total.low + total.high);
}

TEST_CASE("mixture of a single-strategy log is NotEIota") {
  ScenarioConfig c = eiota_run(200);
  c.tsa = TsaConfig{IotaTsa{}};
  const SimulationResult r = run(c);
  try {
    (void)record_mixture(r.log, 1.0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEIota);
  }
  CHECK_FALSE(r.report.mixture.has_value());
  const std::string row = to_csv_row(r.report);
  CHECK(row.substr(row.size() - 3) == ",,,");
}

TEST_CASE("report counts") {
  const SimulationResult r = run(eiota_run(800));
  CHECK(r.report.tsa == "eiota");
  CHECK(r.report.total == 800);
  CHECK(r.report.confidences.size() == 40);
  std::size_t ge = 0;
  for (const auto& e : r.report.confidences) ge += e.confidence() >= 0.95;
  CHECK(r.report.confidence_ge_95 == ge);
  CHECK(confidence_csv(r.report).rfind("tx_id,confidence\n", 0) == 0);
  CHECK(std::string(kMetricsHeader) == "tsa,seed,total,approved,tips,conf95,walks,compute_walks,wall_s,A0,AL,AH");
}
