#include <doctest.h>

#include "macsim/checkers.hpp"
#include "macsim/enumerate.hpp"
#include "macsim/protocols/store_collect.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

ExperimentConfig sc_config(int n, std::vector<std::vector<ScOp>> ops) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::StoreCollect;
  cfg.n = n;
  cfg.sc_ops = std::move(ops);
  cfg.record = RecordLevel::Full;
  return cfg;
}

HistoryEvent inv_store(Clock t, NodeId node, const std::string& v, std::int64_t seq) {
  HistoryEvent e;
  e.time = t;
  e.node = node;
  e.is_store = true;
  e.is_inv = true;
  e.value = v;
  e.seq = seq;
  return e;
}
HistoryEvent resp_store(Clock t, NodeId node) {
  HistoryEvent e;
  e.time = t;
  e.node = node;
  e.is_store = true;
  return e;
}
HistoryEvent inv_collect(Clock t, NodeId node) {
  HistoryEvent e;
  e.time = t;
  e.node = node;
  e.is_inv = true;
  return e;
}
HistoryEvent resp_collect(Clock t, NodeId node, View v) {
  HistoryEvent e;
  e.time = t;
  e.node = node;
  e.view = std::move(v);
  return e;
}

}  // namespace

TEST_CASE("merge_views: newer wins, conflict at equal seq is a fault") {
  View empty, v{{1, {"a", 0}}};
  CHECK(merge_views(empty, v) == v);
  View older{{1, {"a", 1}}}, newer{{1, {"b", 2}}};
  CHECK(merge_views(older, newer) == newer);
  CHECK(merge_views(newer, older) == newer);
  View conflict{{1, {"x", 1}}};
  CHECK_THROWS_AS(merge_views(older, conflict), EngineFault);
}

TEST_CASE("merge_views is commutative, associative, idempotent (property)") {
  HashRng rng(7, 99);
  auto random_view = [&] {
    View v;
    for (NodeId node = 0; node < 4; ++node) {
      if (rng.coin()) {
        std::int64_t seq = static_cast<std::int64_t>(rng.below(4));
        v[node] = ViewEntry{"v" + std::to_string(node) + "_" + std::to_string(seq), seq};
      }
    }
    return v;
  };
  for (int iter = 0; iter < 300; ++iter) {
    View a = random_view(), b = random_view(), c = random_view();
    CHECK(merge_views(a, b) == merge_views(b, a));
    CHECK(merge_views(merge_views(a, b), c) == merge_views(a, merge_views(b, c)));
    CHECK(merge_views(a, a) == a);
    View ab = merge_views(a, b);
    CHECK(merge_views(ab, b) == ab);
  }
}

TEST_CASE("solo node: store then collect returns the stored value") {
  auto cfg = sc_config(1, {{ScOp{true, "a"}, ScOp{false, ""}}});
  cfg.adversary = "lockstep";
  Trace t = run(cfg);
  CHECK(t.verdict == RunVerdict::Completed);
  REQUIRE(t.history.size() == 4);
  const HistoryEvent& resp = t.history.back();
  CHECK(!resp.is_store);
  CHECK(!resp.is_inv);
  REQUIRE(resp.view.count(0) == 1);
  CHECK(resp.view.at(0).value == "a");
  CHECK(check_regularity(t.history).pass);
}

TEST_CASE("completed store is visible to a later collect") {
  // node 0: store(a); node 1: collect. Lockstep order completes the store
  // broadcast before the collect is invoked on node 1's second turn.
  auto cfg = sc_config(2, {{ScOp{true, "a"}}, {ScOp{false, ""}, ScOp{false, ""}}});
  cfg.adversary = "lockstep";
  Trace t = run(cfg);
  CHECK(t.verdict == RunVerdict::Completed);
  CHECK(check_regularity(t.history).pass);
  // the last collect's view must contain ("a", node 0)
  const HistoryEvent* last_collect = nullptr;
  for (const auto& e : t.history) {
    if (!e.is_store && !e.is_inv) last_collect = &e;
  }
  REQUIRE(last_collect != nullptr);
  REQUIRE(last_collect->view.count(0) == 1);
  CHECK(last_collect->view.at(0).value == "a");
}

TEST_CASE("concurrent store/collect: both interleavings legal, all regular") {
  // exhaustive over schedules: collect may or may not see the concurrent
  // store, but every history is regular
  auto cfg = sc_config(2, {{ScOp{true, "a"}}, {ScOp{false, ""}}});
  EnumerateOptions opt;
  opt.max_depth = 14;
  bool saw_with = false, saw_without = false;
  std::int64_t leaves = enumerate_schedules(
      cfg,
      [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<StoreCollectNode>(i, cfg.sc_ops[static_cast<std::size_t>(i)]);
      },
      opt,
      [&](const MacSim& sim) {
        const Trace& t = sim.trace();
        Verdict v = check_regularity(t.history);
        CHECK(v.pass);
        for (const auto& e : t.history) {
          if (!e.is_store && !e.is_inv) {
            if (e.view.count(0)) saw_with = true;
            else saw_without = true;
          }
        }
      });
  CHECK(leaves > 0);
  CHECK(saw_with);
  CHECK(saw_without);
}

TEST_CASE("regularity checker: synthetic Property I violation") {
  // store_1(5) responded at t=2; collect at t=3..4 returns no entry for 1
  std::vector<HistoryEvent> h{
      inv_store(1, 1, "5", 0),
      resp_store(2, 1),
      inv_collect(3, 2),
      resp_collect(4, 2, View{}),
  };
  Verdict v = check_regularity(h);
  CHECK(!v.pass);
  CHECK(v.witness.find("Property I") != std::string::npos);
}

TEST_CASE("regularity checker: fresher completed store missed") {
  std::vector<HistoryEvent> h{
      inv_store(1, 1, "old", 0),
      resp_store(2, 1),
      inv_store(3, 1, "new", 1),
      resp_store(4, 1),
      inv_collect(5, 2),
      resp_collect(6, 2, View{{1, {"old", 0}}}),
  };
  Verdict v = check_regularity(h);
  CHECK(!v.pass);
  CHECK(v.witness.find("Property I") != std::string::npos);
}

TEST_CASE("regularity checker: synthetic Property II violation") {
  // c1 returns the newer (still-open) store's value; the later c2 regresses
  // to the older one. Freshness is intact for both collects (the newer store
  // completes only after c2 was invoked), so only monotonicity is violated.
  std::vector<HistoryEvent> h{
      inv_store(1, 1, "v0", 0),
      resp_store(2, 1),
      inv_store(3, 1, "v1", 1),
      inv_collect(4, 2),
      resp_collect(5, 2, View{{1, {"v1", 1}}}),
      inv_collect(6, 3),
      resp_collect(7, 3, View{{1, {"v0", 0}}}),
      resp_store(8, 1),
  };
  Verdict v = check_regularity(h);
  CHECK(!v.pass);
  CHECK(v.witness.find("Property II") != std::string::npos);
}

TEST_CASE("history export round-trips") {
  auto cfg = sc_config(2, {{ScOp{true, "a"}}, {ScOp{false, ""}}});
  Trace t = run(cfg);
  auto back = history_from_jsonl(history_to_jsonl(t.history));
  REQUIRE(back.size() == t.history.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].time == t.history[i].time);
    CHECK(back[i].node == t.history[i].node);
    CHECK(back[i].is_store == t.history[i].is_store);
    CHECK(back[i].is_inv == t.history[i].is_inv);
    CHECK(back[i].view == t.history[i].view);
  }
}

TEST_CASE("wait-freedom: every op of a live node completes under fair schedules") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::StoreCollect;
    cfg.n = 3;
    cfg.f = 2;
    cfg.crash_hazard = 0.002;
    cfg.seed = seed;
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    // non-crashed nodes: inv/resp counts match
    std::vector<int> open(static_cast<std::size_t>(cfg.n), 0);
    for (const auto& e : t.history) open[static_cast<std::size_t>(e.node)] += e.is_inv ? 1 : -1;
    for (NodeId i = 0; i < cfg.n; ++i) {
      if (!t.crashed[static_cast<std::size_t>(i)]) CHECK(open[static_cast<std::size_t>(i)] == 0);
    }
    CHECK(check_regularity(t.history).pass);
  }
}

TEST_CASE("regularity holds over random adversarial runs with crashes") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::StoreCollect;
    cfg.n = 3;
    cfg.f = 2;
    cfg.crash_hazard = 0.01;
    cfg.adversary = seed % 2 ? "random" : "delay";
    cfg.seed = seed;
    Trace t = run(cfg);
    Verdict v = check_regularity(t.history);
    if (!v.pass) {
      FAIL("seed ", seed, ": ", v.witness);
    }
  }
}
