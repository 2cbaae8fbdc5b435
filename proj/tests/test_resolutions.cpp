#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>

#include "doctest.h"
#include "pcsp/corpus.hpp"
#include "pcsp/resolutions.hpp"

using namespace pcsp;

namespace {

// Deterministic resolutions of an acyclic graph, counted combinatorially:
// a deadlocked occurrence resolves one way, any other occurrence picks one
// transition and multiplies the counts of the target occurrences.
long count_oracle(Plts& g, int s, std::map<int, long>& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  auto trs = g.step(s);
  long total = trs.empty() ? 1 : 0;
  for (const auto& tr : trs) {
    long prod = 1;
    for (const auto& [u, p] : tr.target) prod *= count_oracle(g, u, memo);
    total += prod;
  }
  memo[s] = total;
  return total;
}

long count_oracle(Plts& g, const Dist& d) {
  std::map<int, long> memo;
  long prod = 1;
  for (const auto& [s, p] : d) prod *= count_oracle(g, s, memo);
  return prod;
}

}  // namespace

TEST_CASE("the deadlocked process has exactly one empty resolution") {
  TestApplication app = apply_test(parse_term("a.w"), parse_term("0"));
  auto all = enumerate_deterministic_resolutions(*app.graph, app.init);
  REQUIRE(all.size() == 1);
  CHECK(check_resolution(*app.graph, all[0], app.init));
  CHECK(w_of(all[0], app.omega) == Vec{0});
  for (const auto& node : all[0].nodes) CHECK(!node.move.has_value());
}

TEST_CASE("the two-coin composition has two deterministic resolutions") {
  TestApplication app =
      apply_test(parse_term("a.w1 [] b.w2"), parse_term("a.0 |~| b.0"));
  auto all = enumerate_deterministic_resolutions(*app.graph, app.init);
  REQUIRE(all.size() == 2);
  std::set<Vec> ws;
  for (const auto& r : all) {
    CHECK(check_resolution(*app.graph, r, app.init));
    ws.insert(w_of(r, app.omega));
  }
  CHECK(ws == std::set<Vec>{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});

  OutcomeSet w = w_set(app, app.init);
  CHECK(w.points == std::vector<Vec>{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});
}

TEST_CASE("a two-by-two nondeterministic tree has four resolutions") {
  // both internal choices stay visible to the resolving function
  TestApplication app = apply_test(
      parse_term("a.(b.w |~| c.w) [] w"),
      parse_term("a.(b.0 |~| c.0) |~| b.0"));
  auto all = enumerate_deterministic_resolutions(*app.graph, app.init);
  CHECK(static_cast<long>(all.size()) == count_oracle(*app.graph, app.init));
  for (const auto& r : all) CHECK(check_resolution(*app.graph, r, app.init));
}

TEST_CASE("enumeration size matches the combinatorial count") {
  Rng rng(13);
  std::vector<std::string> alphabet{"a", "b"};
  for (int i = 0; i < 20; ++i) {
    TermPtr t = gen_test(rng, alphabet, 2);
    TermPtr p = gen_process(rng, alphabet, 2, false);
    TestApplication app = apply_test(t, p);
    long expect = count_oracle(*app.graph, app.init);
    if (expect > 400) continue;
    auto all = enumerate_deterministic_resolutions(*app.graph, app.init);
    CHECK(static_cast<long>(all.size()) == expect);
    for (const auto& r : all) CHECK(check_resolution(*app.graph, r, app.init));
  }
}

TEST_CASE("resolution probabilities follow the chosen branches") {
  Plts g({"a", "b"});
  Dist d = g.build(parse_term("a.(b.0 |+1/4| 0) |~| b.0"));
  auto all = enumerate_deterministic_resolutions(g, d);
  REQUIRE(all.size() == 2);
  std::map<std::vector<std::string>, Rat> seen;
  for (const auto& r : all) {
    CHECK(pr(r, {}) == 1);
    seen[{"", "a"}] += pr(r, {"", "a"});
    seen[{"", "a", "b"}] += pr(r, {"", "a", "b"});
    seen[{"", "b"}] += pr(r, {"", "b"});
  }
  CHECK(seen[{"", "a"}] == 1);
  CHECK(seen[{"", "a", "b"}] == Rat(1, 4));
  CHECK(seen[{"", "b"}] == 1);
}

TEST_CASE("success tuples of deterministic resolutions span the result set") {
  Rng rng(37);
  std::vector<std::string> alphabet{"a", "b"};
  for (int i = 0; i < 25; ++i) {
    TermPtr t = gen_test(rng, alphabet, 3, 2);
    TermPtr p = gen_process(rng, alphabet, 3, false);
    TestApplication app = apply_test(t, p);
    OutcomeSet via_res = w_set(app, app.init);
    OutcomeSet direct = results_vector(app);
    CHECK(via_res.points == direct.points);
    CHECK(via_res.mode == SetMode::ConvexVertices);
  }
}

TEST_CASE("synthesis realises interior targets, rejects outside ones") {
  TestApplication app =
      apply_test(parse_term("a.w1 [] b.w2"), parse_term("a.0 |~| b.0"));

  for (Vec target : {Vec{Rat(1), Rat(0)},
                     Vec{Rat(0), Rat(1)},
                     Vec{Rat(1, 2), Rat(1, 2)},
                     Vec{Rat(1, 3), Rat(2, 3)}}) {
    auto r = synthesize_resolution(app, app.init, target);
    REQUIRE(r.has_value());
    CHECK(check_resolution(*app.graph, *r, app.init));
    CHECK(w_of(*r, app.omega) == target);
  }

  CHECK(!synthesize_resolution(app, app.init, {Rat(1), Rat(1)}).has_value());
  CHECK(!synthesize_resolution(app, app.init, {Rat(3, 4), Rat(3, 4)})
             .has_value());
}

TEST_CASE("every vertex of a random result set round-trips") {
  Rng rng(41);
  std::vector<std::string> alphabet{"a", "b"};
  for (int i = 0; i < 15; ++i) {
    TermPtr t = gen_test(rng, alphabet, 3, 2);
    TermPtr p = gen_process(rng, alphabet, 3, false);
    TestApplication app = apply_test(t, p);
    for (const Vec& v : results_vector(app).points) {
      auto r = synthesize_resolution(app, app.init, v);
      REQUIRE(r.has_value());
      CHECK(check_resolution(*app.graph, *r, app.init));
      CHECK(w_of(*r, app.omega) == v);
    }
  }
}

TEST_CASE("corrupted resolutions fail the check") {
  TestApplication app =
      apply_test(parse_term("a.w1 [] b.w2"), parse_term("a.0 |~| b.0"));
  auto all = enumerate_deterministic_resolutions(*app.graph, app.init);
  REQUIRE(!all.empty());
  Resolution good = all[0];
  REQUIRE(check_resolution(*app.graph, good, app.init));

  Resolution bad = good;
  for (auto& node : bad.nodes)
    if (node.move) {
      node.move->first = "b";
      break;
    }
  CHECK(!check_resolution(*app.graph, bad, app.init));

  bad = good;
  bad.init.begin()->second = Rat(1, 2);
  CHECK(!check_resolution(*app.graph, bad, app.init));

  bad = good;
  for (auto& node : bad.nodes)
    if (node.move) {
      for (auto& [u, q] : node.move->second) q /= 2;
      break;
    }
  CHECK(!check_resolution(*app.graph, bad, app.init));

  // a moveless node must sit on a deadlocked state
  bad = good;
  for (auto& node : bad.nodes)
    if (node.move) {
      node.move.reset();
      break;
    }
  CHECK(!check_resolution(*app.graph, bad, app.init));
}
