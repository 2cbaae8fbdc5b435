#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pcsp/axioms.hpp"
#include "pcsp/corpus.hpp"
#include "pcsp/jsonio.hpp"

using namespace pcsp;

namespace {

TermPtr T(const std::string& text) { return parse_term(text); }

std::optional<TermPtr> root(Theory th, const std::string& src, AxiomId id,
                            bool fwd, std::vector<TermPtr> aux = {}) {
  return apply_step(th, T(src), Step{{}, id, fwd, std::move(aux)});
}

}  // namespace

TEST_CASE("initial actions") {
  CHECK(inits(T("0")).empty());
  CHECK(inits(T("a.b.0")) == std::vector<std::string>{"a"});
  CHECK(inits(T("a.0 |~| b.0")) == std::vector<std::string>{""});
  CHECK(inits(T("b.0 [] a.0")) == std::vector<std::string>{"a", "b"});
  CHECK(inits(T("a.0 |+1/2| b.0")) == std::vector<std::string>{"a", "b"});
  CHECK(inits(T("a.0 |[a]| a.b.0")) == std::vector<std::string>{""});
  CHECK(inits(T("a.0 |[a]| b.0")) == std::vector<std::string>{"b"});
  CHECK(inits(T("a.0 |[b]| b.0")) == std::vector<std::string>{"a"});
}

TEST_CASE("probabilistic normal forms merge and order the states") {
  CHECK(prob_normal_form(T("a.0 |+1/2| a.0")) == T("a.0"));
  CHECK(prob_normal_form(T("a.0")) == T("a.0"));
  CHECK(prob_normal_form(T("a.0 |+1/3| (a.0 |+1/2| b.0)")) ==
        prob_normal_form(T("b.0 |+1/3| a.0")));
  CHECK(prob_normal_form(T("a.0 |+1/4| b.0")) ==
        prob_normal_form(T("b.0 |+3/4| a.0")));
  CHECK(prob_normal_form(T("a.0 |+1/4| b.0")) !=
        prob_normal_form(T("a.0 |+3/4| b.0")));

  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    TermPtr t = desugar(gen_process(rng, {"a", "b"}, 3, false));
    TermPtr n = prob_normal_form(t);
    CHECK(prob_normal_form(n) == n);
  }
}

TEST_CASE("normal form shapes") {
  CHECK(is_normal_form(T("0")));
  CHECK(is_normal_form(T("a.0")));
  CHECK(is_normal_form(T("a.0 [] b.0")));
  CHECK(is_normal_form(T("a.0 [] (b.0 [] c.0)")));
  CHECK(is_normal_form(T("(a.0 [] b.0) |~| c.0")));
  CHECK(is_normal_form(T("a.(b.0 |+1/2| c.0)")));
  CHECK(!is_normal_form(T("(a.0 [] b.0) [] c.0")));
  CHECK(!is_normal_form(T("(a.0 |~| b.0) [] c.0")));
  CHECK(!is_normal_form(T("a.0 [] (b.0 |+1/2| c.0)")));
  CHECK(!is_normal_form(T("0 [] a.0")));
}

TEST_CASE("probabilistic axioms") {
  CHECK(root(Theory::Eq, "a.0 |+1/3| a.0", AxiomId::P1, true) == T("a.0"));
  CHECK(root(Theory::Eq, "a.0 |+1/3| b.0", AxiomId::P1, true) ==
        std::nullopt);
  CHECK(root(Theory::Eq, "a.0", AxiomId::P1, false,
             {T("a.0 |+2/5| a.0")}) == T("a.0 |+2/5| a.0"));
  CHECK(root(Theory::Eq, "a.0", AxiomId::P1, false,
             {T("a.0 |+2/5| b.0")}) == std::nullopt);

  CHECK(root(Theory::Eq, "a.0 |+1/3| b.0", AxiomId::P2, true) ==
        T("b.0 |+2/3| a.0"));
  CHECK(root(Theory::Eq, "a.0 |+1/3| b.0", AxiomId::P2, false) ==
        T("b.0 |+2/3| a.0"));

  TermPtr nested = T("(a.0 |+1/2| b.0) |+1/2| c.0");
  auto flat = root(Theory::Eq, "(a.0 |+1/2| b.0) |+1/2| c.0", AxiomId::P3,
                   true);
  CHECK(flat == T("a.0 |+1/4| (b.0 |+1/3| c.0)"));
  CHECK(apply_step(Theory::Eq, *flat, Step{{}, AxiomId::P3, false, {}}) ==
        nested);
}

TEST_CASE("internal choice axioms") {
  CHECK(root(Theory::Eq, "a.0 |~| a.0", AxiomId::I1, true) == T("a.0"));
  CHECK(root(Theory::Eq, "a.0 |~| b.0", AxiomId::I1, true) == std::nullopt);
  CHECK(root(Theory::Eq, "a.0", AxiomId::I1, false) == T("a.0 |~| a.0"));
  CHECK(root(Theory::Eq, "a.0 |~| b.0", AxiomId::I2, true) ==
        T("b.0 |~| a.0"));
  CHECK(root(Theory::Eq, "(a.0 |~| b.0) |~| c.0", AxiomId::I3, true) ==
        T("a.0 |~| (b.0 |~| c.0)"));
  CHECK(root(Theory::Eq, "a.0 |~| (b.0 |~| c.0)", AxiomId::I3, false) ==
        T("(a.0 |~| b.0) |~| c.0"));
}

TEST_CASE("external choice axioms") {
  CHECK(root(Theory::Eq, "a.0 [] 0", AxiomId::E1, true) == T("a.0"));
  CHECK(root(Theory::Eq, "0 [] a.0", AxiomId::E1, true) == std::nullopt);
  CHECK(root(Theory::Eq, "a.0", AxiomId::E1, false) == T("a.0 [] 0"));
  CHECK(root(Theory::Eq, "a.0 [] b.0", AxiomId::E2, true) ==
        T("b.0 [] a.0"));
  CHECK(root(Theory::Eq, "(a.0 [] b.0) [] c.0", AxiomId::E3, true) ==
        T("a.0 [] (b.0 [] c.0)"));
  CHECK(root(Theory::Eq, "a.0 [] (b.0 [] c.0)", AxiomId::E3, false) ==
        T("(a.0 [] b.0) [] c.0"));
}

TEST_CASE("choices over equal prefixes collapse into each other") {
  CHECK(root(Theory::Eq, "a.b.0 [] a.c.0", AxiomId::EI, true) ==
        T("a.b.0 |~| a.c.0"));
  CHECK(root(Theory::Eq, "a.b.0 |~| a.c.0", AxiomId::EI, false) ==
        T("a.b.0 [] a.c.0"));
  CHECK(root(Theory::Eq, "a.b.0 [] c.d.0", AxiomId::EI, true) ==
        std::nullopt);

  CHECK(root(Theory::May, "a.0 [] b.0", AxiomId::May0, true) ==
        T("a.0 |~| b.0"));
  CHECK(root(Theory::May, "a.0 |~| b.0", AxiomId::May0, false) ==
        T("a.0 [] b.0"));
  CHECK(root(Theory::Eq, "a.0 [] b.0", AxiomId::May0, true) == std::nullopt);
  CHECK(root(Theory::Must, "a.0 [] b.0", AxiomId::May0, true) ==
        std::nullopt);
}

TEST_CASE("distribution axioms") {
  CHECK(root(Theory::Eq, "a.0 [] (b.0 |+1/3| c.0)", AxiomId::D1, true) ==
        T("(a.0 [] b.0) |+1/3| (a.0 [] c.0)"));
  CHECK(root(Theory::Eq, "(a.0 [] b.0) |+1/3| (a.0 [] c.0)", AxiomId::D1,
             false) == T("a.0 [] (b.0 |+1/3| c.0)"));

  CHECK(root(Theory::Eq, "a.0 [] (b.0 |~| c.0)", AxiomId::D2, true) ==
        T("(a.0 [] b.0) |~| (a.0 [] c.0)"));
  CHECK(root(Theory::Eq, "(a.0 [] b.0) |~| (a.0 [] c.0)", AxiomId::D2,
             false) == T("a.0 [] (b.0 |~| c.0)"));
  CHECK(root(Theory::Eq, "(a.0 |+1/2| d.0) [] (b.0 |~| c.0)", AxiomId::D2,
             true) == std::nullopt);

  TermPtr d3 = T("(a.0 |~| b.0) [] (c.0 |~| d.0)");
  auto spread = apply_step(Theory::Eq, d3, Step{{}, AxiomId::D3, true, {}});
  CHECK(spread ==
        T("(a.0 [] (c.0 |~| d.0)) |~| ((b.0 [] (c.0 |~| d.0)) |~| "
          "(((a.0 |~| b.0) [] c.0) |~| ((a.0 |~| b.0) [] d.0)))"));
  CHECK(apply_step(Theory::Eq, *spread, Step{{}, AxiomId::D3, false, {}}) ==
        d3);
}

TEST_CASE("inequational axioms obey their theory and orientation") {
  CHECK(root(Theory::May, "a.0", AxiomId::May1, true, {T("b.0")}) ==
        T("a.0 |~| b.0"));
  CHECK(root(Theory::Eq, "a.0", AxiomId::May1, true, {T("b.0")}) ==
        std::nullopt);
  CHECK(root(Theory::May, "a.0", AxiomId::May1, false, {T("b.0")}) ==
        std::nullopt);

  CHECK(root(Theory::May, "0", AxiomId::May2, true, {T("a.b.0")}) ==
        T("a.b.0"));
  CHECK(root(Theory::May, "c.0", AxiomId::May2, true, {T("a.b.0")}) ==
        std::nullopt);

  CHECK(root(Theory::May, "a.(b.0 |+1/4| c.0)", AxiomId::May3, true) ==
        T("a.b.0 |+1/4| a.c.0"));
  CHECK(root(Theory::May, "a.(b.0 |+1/4| c.0)", AxiomId::May3, false) ==
        std::nullopt);

  CHECK(root(Theory::May, "a.0 |+1/4| b.0", AxiomId::May4, true) ==
        T("a.0 |~| b.0"));
  CHECK(root(Theory::Must, "a.0 |+1/4| b.0", AxiomId::May4, true) ==
        std::nullopt);

  CHECK(root(Theory::Must, "a.0 |~| b.0", AxiomId::Must1, true) == T("b.0"));
  CHECK(root(Theory::May, "a.0 |~| b.0", AxiomId::Must1, true) ==
        std::nullopt);
  CHECK(root(Theory::Must, "a.0 |~| b.0", AxiomId::Must1, false) ==
        std::nullopt);
}

TEST_CASE("the convexity axiom folds matching arms into a choice") {
  CHECK(root(Theory::Must,
             "(a.0 [] b.0) |~| ((a.c.0 [] b.0) |~| (b.d.0 [] a.0))",
             AxiomId::Must2, true) == T("a.c.0 [] b.d.0"));
  CHECK(root(Theory::Must,
             "a.0 |~| ((a.c.0 [] 0) |+1/2| (a.d.0 [] 0))",
             AxiomId::Must2, true) == T("a.(c.0 |+1/2| d.0)"));
  // an arm mixing two actions does not fold
  CHECK(root(Theory::Must, "a.0 |~| ((a.c.0 [] 0) |+1/2| (b.d.0 [] 0))",
             AxiomId::Must2, true) == std::nullopt);
  // the guard must not enable actions outside the arms
  CHECK(root(Theory::Must, "(a.0 [] b.0) |~| (a.c.0 [] 0)", AxiomId::Must2,
             true) == std::nullopt);
  CHECK(root(Theory::Eq,
             "(a.0 [] b.0) |~| ((a.c.0 [] b.0) |~| (b.d.0 [] a.0))",
             AxiomId::Must2, true) == std::nullopt);
}

TEST_CASE("the derivative-based convexity rule checks its premises") {
  CHECK(root(Theory::Must, "a.0 |~| (a.b.0 [] a.c.0)", AxiomId::Must2P, true,
             {T("a.b.0")}) == T("a.b.0"));
  CHECK(root(Theory::Must, "a.0 |~| (a.b.0 [] a.c.0)", AxiomId::Must2P, true,
             {T("a.c.0")}) == T("a.c.0"));
  CHECK(root(Theory::Must, "a.0 |~| (a.b.0 [] a.c.0)", AxiomId::Must2P, true,
             {T("a.d.0")}) == std::nullopt);
  CHECK(root(Theory::Must, "a.0 |~| (a.b.0 |+1/2| a.c.0)", AxiomId::Must2P,
             true, {T("a.(b.0 |+1/2| c.0)")}) == T("a.(b.0 |+1/2| c.0)"));
  // the guard enables an action no premise covers
  CHECK(root(Theory::Must, "(a.0 [] b.0) |~| (a.b.0 [] a.c.0)",
             AxiomId::Must2P, true, {T("a.b.0")}) == std::nullopt);
  CHECK(root(Theory::May, "a.0 |~| (a.b.0 [] a.c.0)", AxiomId::Must2P, true,
             {T("a.b.0")}) == std::nullopt);
}

TEST_CASE("probabilistic reshuffles in one step") {
  CHECK(root(Theory::Eq, "a.0 |+1/2| (b.0 |+1/2| a.0)", AxiomId::Prob, true,
             {T("(a.0 |+3/4| b.0)")}) == T("a.0 |+3/4| b.0"));
  CHECK(root(Theory::Eq, "a.0", AxiomId::Prob, true, {T("b.0")}) ==
        std::nullopt);
}

TEST_CASE("steps apply at deep positions through every operator") {
  CHECK(apply_step(Theory::Eq, T("a.(b.0 |~| b.0)"),
                   Step{{0}, AxiomId::I1, true, {}}) == T("a.b.0"));
  CHECK(apply_step(Theory::Eq, T("(c.0 |+1/2| (a.0 [] 0)) |~| d.0"),
                   Step{{0, 1}, AxiomId::E1, true, {}}) ==
        T("(c.0 |+1/2| a.0) |~| d.0"));
  CHECK(apply_step(Theory::Eq, T("a.0"), Step{{0, 0}, AxiomId::I1, false,
                                              {}}) == std::nullopt);
  CHECK(apply_step(Theory::Eq, T("a.0 |~| b.0"),
                   Step{{1}, AxiomId::E1, true, {}}) == std::nullopt);
}

TEST_CASE("rewriting to normal form stays inside the equational theory") {
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    TermPtr t = desugar(gen_process(rng, {"a", "b"}, 3, false));
    Derivation d = normal_form(t);
    CHECK(d.src == t);
    CHECK(is_normal_form(d.dst));
    CHECK(check_derivation(Theory::Eq, d));
  }
  CHECK_THROWS_AS(normal_form(desugar(T("a.0 |[a]| a.0"))),
                  std::invalid_argument);
}

TEST_CASE("hand derivation from the coin to its doubled form") {
  TermPtr pc = T("a.0 |+1/2| b.0");
  Derivation d;
  d.src = pc;
  d.steps.push_back(Step{{}, AxiomId::May4, true, {}});
  d.steps.push_back(Step{{}, AxiomId::May1, true, {T("c.0")}});
  TermPtr cur = pc;
  for (const Step& s : d.steps) {
    auto nt = apply_step(Theory::May, cur, s);
    REQUIRE(nt.has_value());
    cur = *nt;
  }
  d.dst = cur;
  CHECK(cur == T("(a.0 |~| b.0) |~| c.0"));
  CHECK(check_derivation(Theory::May, d));

  Derivation broken = d;
  broken.steps[1].aux = {T("d.0")};
  CHECK(!check_derivation(Theory::May, broken));
  broken = d;
  broken.dst = T("a.0");
  CHECK(!check_derivation(Theory::May, broken));
}

TEST_CASE("proof search agrees with the simulation orders") {
  Rng rng(59);
  int may_yes = 0, must_yes = 0;
  for (int i = 0; i < 25; ++i) {
    TermPtr p = desugar(gen_process(rng, {"a", "b"}, 2, false));
    TermPtr q = desugar(gen_process(rng, {"a", "b"}, 2, false));
    auto may = synth_derivation(Theory::May, p, q);
    CHECK(may.has_value() == sim_leq(p, q));
    if (may) {
      ++may_yes;
      CHECK(may->src == p);
      CHECK(may->dst == q);
      CHECK(check_derivation(Theory::May, *may));
    }
    auto must = synth_derivation(Theory::Must, p, q);
    CHECK(must.has_value() == fsim_leq(p, q));
    if (must) {
      ++must_yes;
      CHECK(must->src == p);
      CHECK(must->dst == q);
      CHECK(check_derivation(Theory::Must, *must));
    }
  }
  CHECK(may_yes > 3);
  CHECK(must_yes > 3);
}

TEST_CASE("equational proof search decides the equivalence") {
  TermPtr l = T("(a.0 [] b.0) [] c.0");
  TermPtr r = T("c.0 [] (b.0 [] a.0)");
  auto d = synth_derivation(Theory::Eq, l, r);
  REQUIRE(d.has_value());
  CHECK(d->src == l);
  CHECK(d->dst == r);
  CHECK(check_derivation(Theory::Eq, *d));

  CHECK(!synth_derivation(Theory::Eq, T("a.0"), T("a.0 |~| b.0")));
  CHECK(!synth_derivation(Theory::May, T("a.0"), T("b.0")));
  CHECK(!synth_derivation(
      Theory::Must, desugar(T("(a.0 |+1/2| b.0) [] (a.0 |+1/2| b.0)")),
      T("a.0 |+1/2| b.0")));
  CHECK_THROWS_AS(synth_derivation(Theory::May, T("a.0 |[a]| a.0"), T("a.0")),
                  std::invalid_argument);
  CHECK_THROWS_AS(synth_derivation(Theory::May, T("a.w"), T("a.0")),
                  std::invalid_argument);
}

TEST_CASE("derivations survive the JSON round trip") {
  auto d = synth_derivation(Theory::May, T("a.0 |+1/2| b.0"),
                            T("(a.0 |+1/2| b.0) |~| c.0"));
  REQUIRE(d.has_value());
  Json j = derivation_json(*d);
  auto back = derivation_from_json(j);
  REQUIRE(back.has_value());
  CHECK(back->src == d->src);
  CHECK(back->dst == d->dst);
  CHECK(check_derivation(Theory::May, *back));

  Json bad = j;
  bad["steps"][0]["axiom"] = "Must1";
  auto tampered = derivation_from_json(bad);
  if (tampered) CHECK(!check_derivation(Theory::May, *tampered));

  bad = j;
  bad["steps"][0]["axiom"] = "NotAnAxiom";
  CHECK(!derivation_from_json(bad).has_value());
}

TEST_CASE("axiom names round-trip") {
  for (AxiomId id : {AxiomId::P1, AxiomId::E3, AxiomId::EI, AxiomId::May0,
                     AxiomId::May4, AxiomId::Must2P, AxiomId::Prob}) {
    auto back = axiom_by_name(axiom_name(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK(!axiom_by_name("Q7").has_value());
}
