#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "oracles.hpp"
#include "tangle/tsa.hpp"

using namespace tangle;

namespace {

TangleState timed(const std::vector<std::vector<std::uint32_t>>& parents, const std::vector<double>& times) {
  TangleState t;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    std::vector<TxId> ps;
    for (auto p : parents[i]) ps.push_back(tx_id(p));
    TxMeta m;
    m.issue_time = m.visible_time = times[i];
    t.attach(ps, m);
  }
  return t;
}

// Genesis has two children with cumulative weights 3 and 1.
TangleState three_one() { return oracle::from_parents({{0, 0}, {0, 0}, {1, 1}, {3, 3}}); }

}  // namespace

TEST_CASE("transition probabilities for weights 3 and 1") {
  const TangleState t = three_one();
  const TangleView v = TangleView::full(t);
  REQUIRE(v.weight(tx_id(1)) == 3);
  REQUIRE(v.weight(tx_id(2)) == 1);
  const auto p0 = transition_probabilities(v, kGenesis, 0.0);
  REQUIRE(p0.size() == 2);
  CHECK(p0[0] == doctest::Approx(0.5));
  CHECK(p0[1] == doctest::Approx(0.5));
  const auto p5 = transition_probabilities(v, kGenesis, 5.0);
  CHECK(p5[0] == doctest::Approx(1.0 / (1.0 + std::exp(-10.0))).epsilon(1e-12));
  CHECK(p5[1] == doctest::Approx(std::exp(-10.0) / (1.0 + std::exp(-10.0))).epsilon(1e-9));
}

TEST_CASE("transition probabilities sum to one and stay finite at large alpha") {
  const TangleState t = oracle::random_tangle(21, 400);
  const TangleView v = TangleView::full(t);
  for (double alpha : {0.0, 0.5, 5.0, 50.0, 1000.0}) {
    for (std::size_t i = 0; i < 50; ++i) {
      if (v.children(tx_id(i)).empty()) continue;
      const auto p = transition_probabilities(v, tx_id(i), alpha);
      double s = 0.0;
      for (double x : p) {
        CHECK(std::isfinite(x));
        s += x;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("very large alpha follows the heaviest child") {
  const TangleState t = three_one();
  const TangleView v = TangleView::full(t);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) CHECK(walk_step(v, kGenesis, 50.0, rng) == tx_id(1));
}

TEST_CASE("walk_step on a tip is NoChildren") {
  const TangleState t = three_one();
  const TangleView v = TangleView::full(t);
  Rng rng(1);
  try {
    (void)walk_step(v, tx_id(2), 1.0, rng);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoChildren);
  }
}

TEST_CASE("walk tip frequencies match the exact hitting distribution") {
  const TangleState t = oracle::diamond_tangle();
  const TangleView v = TangleView::full(t);
  constexpr int kWalks = 100000;
  for (double alpha : {0.0, 1.0, 5.0}) {
    const auto exact = oracle::hitting_probabilities(t, alpha);
    std::vector<int> hits(t.size());
    Rng rng(static_cast<std::uint64_t>(alpha * 10) + 3);
    WalkerConfig cfg;
    cfg.alpha = alpha;
    for (int k = 0; k < kWalks; ++k) ++hits[index(random_walk(v, cfg, rng).tip)];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double p = exact[i];
      const double sigma = std::sqrt(p * (1 - p) / kWalks);
      CHECK_MESSAGE(std::abs(hits[i] / double(kWalks) - p) <= 3 * sigma + 1e-9, "alpha ", alpha, " tx ", i);
      if (!v.is_tip(tx_id(i))) CHECK(hits[i] == 0);
    }
  }
}

TEST_CASE("walk hitting distribution on random tangles") {
  for (std::uint64_t seed : {2u, 9u}) {
    const TangleState t = oracle::random_tangle(seed, 40);
    const TangleView v = TangleView::full(t);
    const auto exact = oracle::hitting_probabilities(t, 0.5);
    constexpr int kWalks = 100000;
    std::vector<int> hits(t.size());
    Rng rng(seed);
    WalkerConfig cfg;
    cfg.alpha = 0.5;
    for (int k = 0; k < kWalks; ++k) ++hits[index(random_walk(v, cfg, rng).tip)];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double p = exact[i];
      CHECK(std::abs(hits[i] / double(kWalks) - p) <= 3 * std::sqrt(p * (1 - p) / kWalks) + 1e-9);
    }
  }
}

TEST_CASE("draw thresholds") {
  const EIotaParams p;
  Rng rng(4);
  const Strategy u = draw_strategy(p, 0.05, rng);
  CHECK(u.kind == StrategyKind::Uniform);
  CHECK(u.alpha == 0.0);
  CHECK_FALSE(u.weighted_computation());
  const Strategy l = draw_strategy(p, 0.5, rng);
  CHECK(l.kind == StrategyKind::WeightedLow);
  CHECK(l.alpha >= 0.1);
  CHECK(l.alpha <= 2.0);
  const Strategy h = draw_strategy(p, 0.9, rng);
  CHECK(h.kind == StrategyKind::WeightedHigh);
  CHECK(h.alpha == 5.0);
  CHECK(draw_strategy(p, 0.1, rng).kind == StrategyKind::WeightedLow);
  CHECK(draw_strategy(p, 0.65, rng).kind == StrategyKind::WeightedHigh);
}

TEST_CASE("draw frequencies and low alpha spread") {
  const EIotaParams p;
  Rng rng(8);
  constexpr int kDraws = 100000;
  std::map<StrategyKind, int> n;
  double lo = 10, hi = -1, sum = 0;
  int low = 0;
  for (int i = 0; i < kDraws; ++i) {
    const Strategy s = draw_strategy(p, rng);
    ++n[s.kind];
    if (s.kind == StrategyKind::WeightedLow) {
      lo = std::min(lo, s.alpha);
      hi = std::max(hi, s.alpha);
      sum += s.alpha;
      ++low;
    }
  }
  const std::map<StrategyKind, double> want{
      {StrategyKind::Uniform, 0.10}, {StrategyKind::WeightedLow, 0.55}, {StrategyKind::WeightedHigh, 0.35}};
  for (const auto& [k, share] : want) {
    CHECK(std::abs(n[k] / double(kDraws) - share) <= 3 * std::sqrt(share * (1 - share) / kDraws));
  }
  CHECK(lo < 0.15);
  CHECK(hi > 1.95);
  CHECK(sum / low == doctest::Approx(1.05).epsilon(0.02));
}

TEST_CASE("invalid mixture parameters are ConfigInvalid") {
  EIotaParams p;
  p.p1 = 0.7;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.alpha_low.hi = 6.0;
  CHECK_THROWS_AS(p.validate(), Error);
  CHECK_NOTHROW(EIotaParams{}.validate());
}

TEST_CASE("per-walk draws differ within an issuance, shared draws do not") {
  const TangleState t = oracle::random_tangle(30, 200);
  const TangleView v = TangleView::full(t);
  EIotaParams walk;
  EIotaParams shared;
  shared.scope = EIotaParams::DrawScope::Issuance;
  Rng r1(5), r2(5);
  int differ = 0;
  for (int i = 0; i < 500; ++i) {
    const auto a = select_parents_eiota(v, walk, r1);
    differ += a.walks[0].strategy.kind != a.walks[1].strategy.kind;
    const auto b = select_parents_eiota(v, shared, r2);
    CHECK(b.walks[0].strategy.kind == b.walks[1].strategy.kind);
    CHECK(b.walks[0].strategy.alpha == b.walks[1].strategy.alpha);
  }
  CHECK(differ > 100);
}

TEST_CASE("conflicting tips trigger reselection and the fallback") {
  TangleState t;
  const ConflictSetId set = t.open_conflict_set();
  TxMeta m;
  m.conflict_set = set;
  const TxId g[] = {kGenesis, kGenesis};
  t.attach(g, m);
  t.attach(g, m);
  const TangleView v = TangleView::full(t);

  int retried = 0, rare = 0;
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const auto sel = select_parents_iota(v, 0.0, rng);
    CHECK(t.compatible(sel.parents));
    retried += sel.retries > 0;
    if (sel.fallback) {
      ++rare;
      CHECK(sel.parents[0] == sel.parents[1]);
    }
  }
  CHECK(retried > 800);
  CHECK(rare < 10);  // 2^-11 per attempt

  RetryPolicy none;
  none.max_retries = 0;
  int fallbacks = 0;
  for (int i = 0; i < 200; ++i) {
    const auto sel = select_parents_iota(v, 0.0, rng, {}, none);
    if (sel.fallback) {
      ++fallbacks;
      CHECK(sel.parents[0] == sel.parents[1]);
    }
  }
  CHECK(fallbacks > 50);

  RetryPolicy strict = none;
  strict.on_exhaustion = RetryPolicy::OnExhaustion::Throw;
  int thrown = 0;
  for (int i = 0; i < 200; ++i) {
    try {
      (void)select_parents_iota(v, 0.0, rng, {}, strict);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConflictRetriesExhausted);
      ++thrown;
    }
  }
  CHECK(thrown > 50);
}

TEST_CASE("left-behind tip becomes the third parent") {
  const TangleState t = timed({{0, 0}, {0, 0}, {2, 2}, {3, 3}}, {0.1, 1.0, 5.0, 5.5});
  TangleView v = TangleView::full(t);
  v.set_now(6.0);
  Rng rng(3);
  const auto sel = select_parents_giota(v, 50.0, 3.0, rng);
  REQUIRE(sel.parents.size() == 3);
  CHECK(sel.parents[0] == tx_id(4));
  CHECK(sel.parents[1] == tx_id(4));
  CHECK(sel.parents[2] == tx_id(1));

  const auto none = select_parents_giota(v, 50.0, 10.0, rng);
  CHECK(none.parents.size() == 2);
}

TEST_CASE("third parent is drawn uniformly among left-behind tips") {
  const TangleState t = timed({{0, 0}, {0, 0}, {0, 0}, {0, 0}, {4, 4}, {5, 5}}, {0.1, 0.2, 0.3, 1.0, 5.0, 5.5});
  TangleView v = TangleView::full(t);
  v.set_now(6.0);
  Rng rng(3);
  std::map<std::size_t, int> third;
  int three = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto sel = select_parents_giota(v, 50.0, 3.0, rng);
    if (sel.parents.size() == 3) {
      ++three;
      ++third[index(sel.parents[2])];
      CHECK(sel.parents[2] != sel.parents[0]);
      CHECK(sel.parents[2] != sel.parents[1]);
    }
  }
  CHECK(three == 3000);
  for (std::size_t id : {1u, 2u, 3u}) CHECK(std::abs(third[id] / 3000.0 - 1.0 / 3) < 0.04);
}

TEST_CASE("genesis-only view selects genesis twice") {
  const TangleState t;
  const TangleView v = TangleView::full(t);
  Rng rng(1);
  for (const TsaConfig& cfg : {TsaConfig{IotaTsa{}}, TsaConfig{GIotaTsa{}}, TsaConfig{EIotaTsa{}}}) {
    const auto sel = select_parents(v, cfg, rng);
    REQUIRE(sel.parents.size() == 2);
    CHECK(sel.parents[0] == kGenesis);
    CHECK(sel.parents[1] == kGenesis);
    CHECK(sel.walks[0].steps() == 0);
  }
}

TEST_CASE("walk along a chain reaches its end") {
  const TangleState t = oracle::from_parents({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
  const TangleView v = TangleView::full(t);
  Rng rng(1);
  for (double a : {0.0, 5.0}) {
    WalkerConfig cfg;
    cfg.alpha = a;
    const auto tr = random_walk(v, cfg, rng);
    CHECK(tr.tip == tx_id(5));
    CHECK(tr.steps() == 5);
    CHECK(tr.path.front() == kGenesis);
  }
}

TEST_CASE("several walkers keep the shortest path") {
  // Genesis -> 1 (tip) and genesis -> 2 -> 3 -> 4 (tip).
  const TangleState t = oracle::from_parents({{0, 0}, {0, 0}, {2, 2}, {3, 3}});
  const TangleView v = TangleView::full(t);
  Rng rng(2);
  WalkerConfig cfg;
  cfg.n_walkers = 16;
  int short_wins = 0;
  for (int i = 0; i < 200; ++i) short_wins += random_walk(v, cfg, rng).tip == tx_id(1);
  CHECK(short_wins == 200);
}

TEST_CASE("anchor start begins at an older transaction") {
  const TangleState t = timed({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {1, 2, 3, 4});
  TangleView v = TangleView::full(t);
  v.set_now(4.5);
  StartSite s;
  s.kind = StartSite::Kind::Anchor;
  s.window = 2.0;
  CHECK(start_site(v, s) == tx_id(2));
  s.window = 100.0;
  CHECK(start_site(v, s) == kGenesis);
}
