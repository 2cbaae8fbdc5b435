#pragma once

#include <optional>

#include "pcsp/plts.hpp"

namespace pcsp {

// Axiom schemas of the equational and inequational theories, plus Prob, the
// step kind equating terms with the same probabilistic normal form.
enum class AxiomId {
  P1,
  P2,
  P3,
  I1,
  I2,
  I3,
  E1,
  E2,
  E3,
  EI,
  D1,
  D2,
  D3,
  May0,
  May1,
  May2,
  May3,
  May4,
  Must1,
  Must2,
  Must2P,
  Prob
};

enum class Theory { Eq, May, Must };

const char* axiom_name(AxiomId id);
std::optional<AxiomId> axiom_by_name(const std::string& name);

// One rewrite at a subterm.  path descends through children (0 = left or
// prefix body, 1 = right).  aux carries schema parts not recoverable from
// the subterm alone: the added term for May1/May2, the result for Prob and
// backward P1, the prefixed right-hand sides for Must2P.
struct Step {
  std::vector<int> path;
  AxiomId id = AxiomId::P1;
  bool forward = true;
  std::vector<TermPtr> aux;
};

// Chain of steps rewriting src into dst.  Within an inequational theory
// every step is oriented along the order, so the chain witnesses src <= dst.
struct Derivation {
  TermPtr src = nullptr;
  TermPtr dst = nullptr;
  std::vector<Step> steps;
};

// Actions a term can immediately engage in; tau is the empty string.
std::vector<std::string> inits(TermPtr t);

// Canonical probabilistic decomposition: the term's outer probabilistic
// structure flattened to a right-nested combination of distinct states in
// structural order.
TermPtr prob_normal_form(TermPtr t);

// N ::= N |+p| N | N |~| N | box of prefixes over N, right-nested.
bool is_normal_form(TermPtr t);

// Equational rewriting of a parallel-free term into a normal form; dst of
// the returned derivation is the normal form.
Derivation normal_form(TermPtr t);

// Applies one step to t; empty when the schema does not match the subterm
// or the theory does not license the step's axiom and direction.
std::optional<TermPtr> apply_step(Theory th, TermPtr t, const Step& s);

bool check_derivation(Theory th, const Derivation& d);

// Proof search for parallel-free terms, complete over them: a derivation
// exists exactly when the simulation (may) or failure simulation (must)
// order holds, or, for Eq, when the normal forms agree probabilistically.
std::optional<Derivation> synth_derivation(Theory th, TermPtr p, TermPtr q);

}  // namespace pcsp
