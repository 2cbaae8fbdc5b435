// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Every numeric comparison is exact rational equality; each criterion also
// carries a wall-clock budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "pcsp/axioms.hpp"
#include "pcsp/corpus.hpp"
#include "pcsp/jsonio.hpp"
#include "pcsp/logic.hpp"
#include "pcsp/resolutions.hpp"
#include "pcsp/simulation.hpp"
#include "pcsp/testing.hpp"

using namespace pcsp;

namespace {

struct Fail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void need(bool ok, const std::string& what) {
  if (!ok) throw Fail(what);
}

Vec v1(Rat x) { return {std::move(x)}; }

const char* kPfig = "a.((b.d.0 [] c.e.0) |+1/2| (b.f.0 [] c.g.0))";
const char* kQfig = "a.((b.d.0 [] c.g.0) |+1/2| (b.f.0 [] c.e.0))";
const char* kTfig = "a.((b.d.w |+1/2| c.e.w) |~| (b.f.w |+1/2| c.g.w))";

// 1: exact scalar outcome sets of the distinguishing test on the twin pair.
void criterion1() {
  TestApplication ap = apply_test(parse_term(kTfig), parse_term(kPfig));
  TestApplication aq = apply_test(parse_term(kTfig), parse_term(kQfig));
  OutcomeSet rp = results_state(ap);
  OutcomeSet rq = results_state(aq);
  need(rp.points == std::vector<Vec>{v1(0), v1(Rat(1, 2)), v1(1)},
       "left state outcomes are not {0, 1/2, 1}");
  need(rq.points == std::vector<Vec>{v1(Rat(1, 2))},
       "right state outcomes are not {1/2}");
}

// 2: vector outcome hulls of the two coins, and the hull sensitivity of the
// Hoare comparison.
void criterion2() {
  TermPtr tc = parse_term("a.w1 [] b.w2");
  TestApplication ap = apply_test(tc, parse_term("a.0 |+1/2| b.0"));
  TestApplication aq = apply_test(tc, parse_term("a.0 |~| b.0"));
  OutcomeSet rp = results_vector(ap);
  OutcomeSet rq = results_vector(aq);
  need(rp.mode == SetMode::ConvexVertices && rq.mode == SetMode::ConvexVertices,
       "vector results are not vertex sets");
  need(rp.points == std::vector<Vec>{{Rat(1, 2), Rat(1, 2)}},
       "coin outcomes are not hull{(1/2,1/2)}");
  need(rq.points == std::vector<Vec>{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}},
       "choice outcomes are not hull{(0,1),(1,0)}");
  need(compare(OrderKind::Hoare, rp, rq), "Hoare order fails on hulls");
  OutcomeSet rawp = raw_set(rp.omega, rp.points);
  OutcomeSet rawq = raw_set(rq.omega, rq.points);
  need(!compare(OrderKind::Hoare, rawp, rawq),
       "Hoare order holds on raw vertex sets");
}

// 3: simulation verdicts separating the coin from its external square.
void criterion3() {
  TermPtr pc = parse_term("a.0 |+1/2| b.0");
  TermPtr twice = parse_term("(a.0 |+1/2| b.0) |~| (a.0 |+1/2| b.0)");
  TermPtr ext = desugar(parse_term("(a.0 |+1/2| b.0) [] (a.0 |+1/2| b.0)"));
  need(sim_leq(twice, pc), "doubled coin not below the coin");
  need(sim_leq(pc, twice), "coin not below the doubled coin");
  need(sim_leq(pc, ext), "coin not below its external square");
  need(!fsim_leq(ext, pc), "external square below the coin in failures");
}

// 4: self-satisfaction of characteristic formulas on every distribution
// reachable in a seeded corpus.
void criterion4() {
  Rng rng(101);
  std::vector<std::string> alphabet{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    Plts g(alphabet);
    Dist init = g.build(gen_process(rng, alphabet, 3));
    std::set<Dist> seen{init};
    std::set<int> visited;
    std::vector<int> todo;
    for (const auto& [s, p] : init)
      if (visited.insert(s).second) todo.push_back(s);
    while (!todo.empty()) {
      int s = todo.back();
      todo.pop_back();
      for (const auto& tr : g.step(s)) {
        seen.insert(tr.target);
        for (const auto& [u, p] : tr.target)
          if (visited.insert(u).second) todo.push_back(u);
      }
    }
    for (const Dist& d : seen) {
      auto w = sat(g, d, char_formula(g, d, Logic::F));
      need(w.has_value(), "distribution fails its own characteristic formula");
      need(check_sat_witness(g, d, char_formula(g, d, Logic::F), *w),
           "self-satisfaction witness does not check");
    }
  }
}

// 5: satisfaction agrees with dominance of the characteristic test's target
// in the composed outcome set, in both directions for the ref-free logic.
void criterion5() {
  Rng rng(103);
  std::vector<std::string> alphabet{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    Logic kind = i % 2 == 0 ? Logic::F : Logic::L;
    TermPtr p = gen_process(rng, alphabet, 2);
    FormulaPtr f = gen_formula(rng, alphabet, 3, kind);
    Plts g(alphabet);
    bool holds = sat(g, g.build(p), f).has_value();

    CharTest ct = char_test(f);
    TestApplication app = apply_test(ct.test, p, &alphabet, &ct.omega);
    OutcomeSet out = results_vector(app);
    need(dominated_point_exists(out, ct.target, Dir::Le) == holds,
         "downward dominance disagrees with satisfaction");
    if (kind == Logic::L)
      need(dominated_point_exists(out, ct.target, Dir::Ge) == holds,
           "upward dominance disagrees on a ref-free formula");
  }
}

long res_count(Plts& g, int s, std::map<int, long>& memo, long cap) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  auto trs = g.step(s);
  long total = trs.empty() ? 1 : 0;
  for (const auto& tr : trs) {
    long prod = 1;
    for (const auto& [u, p] : tr.target) {
      prod *= res_count(g, u, memo, cap);
      if (prod > cap) break;
    }
    total += prod;
    if (total > cap) break;
  }
  memo[s] = total;
  return total;
}

// 6: the resolution route and the direct route compute the same vertex
// sets, and every vertex is realised by a checkable synthesised resolution.
void criterion6() {
  Rng rng(107);
  std::vector<std::string> alphabet{"a", "b"};
  int done = 0;
  while (done < 100) {
    int depth = 2 + done % 3;
    TermPtr t = gen_test(rng, alphabet, depth, 2);
    TermPtr p = gen_process(rng, alphabet, 3, false);
    TestApplication app = apply_test(t, p);
    std::map<int, long> memo;
    long count = 1;
    for (const auto& [s, q] : app.init)
      count *= res_count(*app.graph, s, memo, 20000);
    if (count > 20000) continue;
    ++done;

    OutcomeSet via_res = w_set(app, app.init);
    OutcomeSet direct = results_vector(app);
    need(via_res.points == direct.points,
         "resolution outcomes differ from direct outcomes");
    for (const Vec& v : direct.points) {
      auto r = synthesize_resolution(app, app.init, v);
      need(r.has_value(), "vertex not realised by any resolution");
      need(check_resolution(*app.graph, *r, app.init),
           "synthesised resolution does not check");
      need(w_of(*r, app.omega) == v,
           "synthesised resolution misses its target");
    }
  }
}

// 7: soundness of every axiom schema, at 100 seeded instances per schema:
// equational schemas hold in both failure-simulation directions, the may
// schemas in the simulation order, the must schemas in the failure order.
void criterion7() {
  Rng rng(109);
  std::vector<std::string> alphabet{"a", "b"};
  auto sub = [&]() { return desugar(gen_process(rng, alphabet, 2, false)); };
  auto act = [&]() { return alphabet[rng.below(2)]; };
  // state-sorted schema slots: guarded terms keep the box products shallow
  auto gsub = [&]() -> TermPtr {
    switch (rng.below(4)) {
      case 0:
        return mk_nil();
      case 1:
        return mk_prefix(act(), sub());
      case 2:
        return mk_extern(mk_prefix(act(), sub()), mk_prefix(act(), sub()));
      default:
        return mk_intern(mk_prefix(act(), sub()), mk_prefix(act(), sub()));
    }
  };

  auto eq_schema = [&](AxiomId id, std::function<TermPtr()> make) {
    for (int i = 0; i < 100; ++i) {
      TermPtr l = make();
      auto r = apply_step(Theory::Eq, l, Step{{}, id, true, {}});
      need(r.has_value(), std::string(axiom_name(id)) + " instance rejected");
      need(fsim_leq(l, *r), std::string(axiom_name(id)) + " fails left-to-right");
      need(fsim_leq(*r, l), std::string(axiom_name(id)) + " fails right-to-left");
    }
  };
  auto ord_schema = [&](Theory th, AxiomId id,
                        std::function<std::pair<TermPtr, std::vector<TermPtr>>()>
                            make) {
    for (int i = 0; i < 100; ++i) {
      auto [l, aux] = make();
      auto r = apply_step(th, l, Step{{}, id, true, aux});
      need(r.has_value(), std::string(axiom_name(id)) + " instance rejected");
      bool ok = th == Theory::May ? sim_leq(l, *r) : fsim_leq(l, *r);
      need(ok, std::string(axiom_name(id)) + " violates its order");
    }
  };

  eq_schema(AxiomId::P1, [&] {
    TermPtr s = sub();
    return mk_prob(rng.frac(), s, s);
  });
  eq_schema(AxiomId::P2, [&] { return mk_prob(rng.frac(), sub(), sub()); });
  eq_schema(AxiomId::P3, [&] {
    return mk_prob(rng.frac(), mk_prob(rng.frac(), sub(), sub()), sub());
  });
  eq_schema(AxiomId::I1, [&] {
    TermPtr s = sub();
    return mk_intern(s, s);
  });
  eq_schema(AxiomId::I2, [&] { return mk_intern(sub(), sub()); });
  eq_schema(AxiomId::I3, [&] {
    return mk_intern(mk_intern(sub(), sub()), sub());
  });
  eq_schema(AxiomId::E1, [&] { return mk_extern(gsub(), mk_nil()); });
  eq_schema(AxiomId::E2, [&] { return mk_extern(gsub(), gsub()); });
  eq_schema(AxiomId::E3, [&] {
    return mk_extern(mk_extern(gsub(), gsub()), gsub());
  });
  eq_schema(AxiomId::EI, [&] {
    std::string a = act();
    return mk_extern(mk_prefix(a, sub()), mk_prefix(a, sub()));
  });
  eq_schema(AxiomId::D1, [&] {
    return mk_extern(gsub(), mk_prob(rng.frac(), gsub(), gsub()));
  });
  eq_schema(AxiomId::D2, [&] {
    return mk_extern(mk_prefix(act(), sub()), mk_intern(gsub(), gsub()));
  });
  eq_schema(AxiomId::D3, [&] {
    return mk_extern(mk_intern(gsub(), gsub()), mk_intern(gsub(), gsub()));
  });

  ord_schema(Theory::May, AxiomId::May0, [&] {
    TermPtr l = mk_extern(mk_prefix(act(), sub()), mk_prefix(act(), sub()));
    return std::pair{l, std::vector<TermPtr>{}};
  });
  ord_schema(Theory::May, AxiomId::May1, [&] {
    return std::pair{sub(), std::vector<TermPtr>{sub()}};
  });
  ord_schema(Theory::May, AxiomId::May2, [&] {
    return std::pair{mk_nil(), std::vector<TermPtr>{sub()}};
  });
  ord_schema(Theory::May, AxiomId::May3, [&] {
    TermPtr l = mk_prefix(act(), mk_prob(rng.frac(), sub(), sub()));
    return std::pair{l, std::vector<TermPtr>{}};
  });
  ord_schema(Theory::May, AxiomId::May4, [&] {
    return std::pair{mk_prob(rng.frac(), sub(), sub()),
                     std::vector<TermPtr>{}};
  });
  ord_schema(Theory::Must, AxiomId::Must1, [&] {
    return std::pair{mk_intern(sub(), sub()), std::vector<TermPtr>{}};
  });

  // convexity schema: a guard over the arm actions joined with arms whose
  // leaves prefix the same action
  auto must2_arm = [&](const std::string& a, TermPtr* head) {
    int leaves = 1 + rng.below(2);
    std::vector<TermPtr> qs;
    TermPtr arm = nullptr;
    Rat w = rng.frac();
    for (int j = 0; j < leaves; ++j) {
      TermPtr q = sub();
      qs.push_back(q);
      TermPtr leaf = mk_extern(mk_prefix(a, q), gsub());
      arm = arm ? mk_prob(w, leaf, arm) : leaf;
    }
    TermPtr body = qs.back();
    if (qs.size() == 2) body = mk_prob(w, qs[0], qs[1]);
    *head = mk_prefix(a, body);
    return arm;
  };
  ord_schema(Theory::Must, AxiomId::Must2, [&] {
    int arms = 1 + rng.below(2);
    std::vector<TermPtr> heads(static_cast<size_t>(arms));
    std::vector<TermPtr> parts;
    TermPtr guard = nullptr;
    for (int k = 0; k < arms; ++k) {
      std::string a = arms == 2 ? alphabet[static_cast<size_t>(k)] : act();
      parts.push_back(must2_arm(a, &heads[static_cast<size_t>(k)]));
      TermPtr g = mk_prefix(a, sub());
      guard = guard ? mk_extern(guard, g) : g;
    }
    TermPtr spine = parts.back();
    for (size_t k = parts.size() - 1; k-- > 0;)
      spine = mk_intern(parts[k], spine);
    return std::pair{mk_intern(guard, spine), std::vector<TermPtr>{}};
  });
  ord_schema(Theory::Must, AxiomId::Must2P, [&] {
    std::string a = act();
    TermPtr head = nullptr;
    TermPtr arm = must2_arm(a, &head);
    TermPtr l = mk_intern(mk_prefix(a, sub()), arm);
    return std::pair{l, std::vector<TermPtr>{head}};
  });
}

// 8: on the exhaustive small-term corpora, proof search succeeds exactly
// when the corresponding simulation order holds, and every derivation it
// returns replays.
void criterion8() {
  auto run = [](std::vector<TermPtr> corpus, size_t expected) {
    need(corpus.size() == expected, "corpus size drifted");
    for (TermPtr p : corpus)
      for (TermPtr q : corpus) {
        auto may = synth_derivation(Theory::May, p, q);
        need(may.has_value() == sim_leq(p, q),
             "may proof search disagrees with simulation");
        if (may)
          need(check_derivation(Theory::May, *may),
               "may derivation does not replay");
        auto must = synth_derivation(Theory::Must, p, q);
        need(must.has_value() == fsim_leq(p, q),
             "must proof search disagrees with failure simulation");
        if (must)
          need(check_derivation(Theory::Must, *must),
               "must derivation does not replay");
      }
  };
  run(enumerate_ncsp(2, 1), 100);
  run(enumerate_ncsp(1, 2), 222);
}

// 9: weak derivative polytopes are linear in the source distribution.
void criterion9() {
  Rng rng(113);
  std::vector<std::string> alphabet{"a", "b"};
  for (int i = 0; i < 200; ++i) {
    Plts g(alphabet);
    Dist d1 = g.build(gen_process(rng, alphabet, 3, false));
    Dist d2 = g.build(gen_process(rng, alphabet, 3, false));
    Rat w = rng.frac();
    DistPolytope p1 = weak_tau_derivatives(g, d1);
    DistPolytope p2 = weak_tau_derivatives(g, d2);
    DistPolytope pm =
        weak_tau_derivatives(g, dist_mix({{w, d1}, {Rat(1) - w, d2}}));

    auto coords = [&](const std::vector<Dist>& ds) {
      std::vector<Vec> out;
      for (const Dist& d : ds) {
        Vec v(static_cast<size_t>(g.num_states()), Rat(0));
        for (const auto& [s, p] : d) v[static_cast<size_t>(s)] = p;
        out.push_back(std::move(v));
      }
      return hull_reduce(std::move(out));
    };
    std::vector<Dist> mixed;
    for (auto& [v, ch] : mix_vertex_sets({{w, &p1}, {Rat(1) - w, &p2}}))
      mixed.push_back(v);
    need(coords(pm.verts) == coords(mixed),
         "mixture derivative differs from the mixed polytopes");
  }
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  void (*fn)();
};

const Criterion kCriteria[] = {
    {1, "state outcome sets of the distinguishing test", 1, criterion1},
    {2, "vector outcome hulls and hull-sensitive comparison", 1, criterion2},
    {3, "simulation verdicts on the coin landmarks", 5, criterion3},
    {4, "characteristic formulas satisfied by their sources", 60, criterion4},
    {5, "characteristic tests decide satisfaction", 120, criterion5},
    {6, "resolution outcomes match direct outcomes", 120, criterion6},
    {7, "axiom schemas sound for their orders", 300, criterion7},
    {8, "proof search complete on exhaustive corpora", 600, criterion8},
    {9, "weak derivatives linear under mixture", 60, criterion9},
};

}  // namespace

int main() {
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
      c.fn();
    } catch (const std::exception& e) {
      err = e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (err.empty() && secs > c.budget_s)
      err = "budget exceeded (" + std::to_string(c.budget_s) + " s)";
    if (err.empty()) {
      std::printf("PASS criterion %d: %s (%.2f s)\n", c.id, c.name, secs);
    } else {
      std::printf("FAIL criterion %d: %s: %s (%.2f s)\n", c.id, c.name,
                  err.c_str(), secs);
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
