#pragma once

#include <optional>

#include "pcsp/plts.hpp"
#include "pcsp/testing.hpp"

namespace pcsp {

// Modal formulas over visible actions.  Nodes are interned: structural
// equality is pointer equality.  The empty conjunction is true.
enum class FOp : uint8_t { Ref, Diamond, Conj, Prob };

struct Formula {
  FOp op;
  std::vector<std::string> refusal;  // Ref: sorted, no duplicates
  std::string act;                   // Diamond
  std::vector<const Formula*> kids;  // Diamond: one; Conj, Prob: any
  std::vector<Rat> weights;          // Prob: each in [0,1], summing to 1
};

using FormulaPtr = const Formula*;

FormulaPtr f_top();
FormulaPtr f_ref(std::vector<std::string> x);
FormulaPtr f_diamond(const std::string& a, FormulaPtr body);
// Deduplicates; a singleton conjunction collapses to its conjunct.
FormulaPtr f_conj(std::vector<FormulaPtr> kids);
// A singleton probabilistic combination is kept as a node: satisfaction
// still demands the leading internal move.
FormulaPtr f_prob(std::vector<Rat> weights, std::vector<FormulaPtr> kids);

bool ref_free(FormulaPtr f);

// Surface syntax:
//   formula ::= number "*" atom ("(+)" number "*" atom)*
//             | atom ("&" atom)*
//   atom    ::= "true" | "ref" "{" names "}" | "<" name ">" atom
//             | "(" formula ")"
std::string formula_str(FormulaPtr f);
FormulaPtr formula_parse(const std::string& text);

// Satisfaction certificate.  delta is the subdistribution the node speaks
// for, scaled by its context; the root carries the queried distribution and
// a node with empty delta is vacuous.  chain is the weak move consumed by
// the clause: for Ref an internal move to a distribution refusing the set,
// for Diamond a move with one strong step on the action ending in the kid's
// delta, for Prob an internal move to the weighted sum of the kids' deltas.
struct SatWitness {
  FormulaPtr f = nullptr;
  Dist delta;
  Chain chain;
  // Diamond only: the chain as a weighted sum of per-state derivative
  // vertices, kept for clients that reassemble the move.
  std::vector<std::pair<Rat, VertChain>> parts;
  std::vector<SatWitness> kids;
};

// Does d satisfy f in g?  Throws when f mentions an action outside the
// graph's alphabet.
std::optional<SatWitness> sat(Plts& g, const Dist& d, FormulaPtr f);
bool check_sat_witness(Plts& g, const Dist& d, FormulaPtr f,
                       const SatWitness& w);

// L is the ref-free fragment of the full logic F.
enum class Logic { L, F };

// Characteristic formula of a state or distribution.
FormulaPtr char_formula(Plts& g, int s, Logic kind);
FormulaPtr char_formula(Plts& g, const Dist& d, Logic kind);

// L: every ref-free formula of p holds of q.  F: every formula of q holds
// of p.  Decided through characteristic formulas.
bool logic_leq(TermPtr p, TermPtr q, Logic kind);

// A vector test with a target outcome.  The test admits an outcome below
// the target exactly on distributions satisfying the source formula; for
// ref-free formulas the same test works with the direction flipped.
struct CharTest {
  TermPtr test = nullptr;
  Vec target;
  std::vector<std::string> omega;
};

CharTest char_test(FormulaPtr f);

bool char_test_holds(TermPtr process, const CharTest& ct, Dir dir);

}  // namespace pcsp
