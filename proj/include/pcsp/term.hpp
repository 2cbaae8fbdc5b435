#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcsp/rat.hpp"

namespace pcsp {

// Process terms.  Nodes are interned: structural equality is pointer
// equality.  Two-sorted: state terms are those with no Prob node outside a
// prefix body or internal-choice arm; see is_state_term.
enum class Op : uint8_t { Nil, Prefix, Intern, Extern, Par, Prob };

struct Term {
  Op op;
  std::string act;                // Prefix
  Rat prob;                       // Prob
  std::vector<std::string> sync;  // Par: sorted, no duplicates
  const Term* l = nullptr;
  const Term* r = nullptr;
  int size = 0;  // operator count, prefixes included
};

using TermPtr = const Term*;

TermPtr mk_nil();
TermPtr mk_prefix(const std::string& act, TermPtr body);
TermPtr mk_intern(TermPtr l, TermPtr r);
TermPtr mk_extern(TermPtr l, TermPtr r);
TermPtr mk_par(std::vector<std::string> sync, TermPtr l, TermPtr r);
TermPtr mk_prob(const Rat& p, TermPtr l, TermPtr r);  // requires 0 < p < 1

// Success actions are w or w<digits>; tau is not writable.
bool is_success_action(const std::string& act);

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& what, size_t pos)
      : std::runtime_error(what), pos(pos) {}
};

// Grammar (binary operators must be parenthesised when mixed; chains of the
// same operator with identical annotation associate to the right):
//   term   ::= prefix (binop prefix)*
//   binop  ::= "|~|" | "[]" | "|[" acts "]|" | "|+" number "|"
//   prefix ::= atom | name "." prefix | name
//   atom   ::= "0" | "(" term ")"
// A bare name abbreviates name.0.
TermPtr parse_term(const std::string& text);

std::string term_str(TermPtr t);

// Total structural order, used for canonical forms.
int term_cmp(TermPtr a, TermPtr b);

bool is_state_term(TermPtr t);  // well-sorted and of state sort
bool is_well_sorted(TermPtr t);

// Rewrites s [] (t1 |+p| t2) to (s [] t1) |+p| (s [] t2) and likewise on the
// left, bottom-up, yielding a well-sorted term.
TermPtr desugar(TermPtr t);

bool has_par(TermPtr t);

enum class TermClass { Process, ScalarTest, VectorTest };

struct Classified {
  TermClass cls;
  std::vector<std::string> omega;  // ScalarTest: {w...}; VectorTest: sorted by index
};

// Decides whether t is a process (no success actions), a scalar test (only
// w), or a vector test (only indexed w1, w2, ...).
Classified classify(TermPtr t);

std::vector<std::string> visible_actions(TermPtr t);  // success excluded

}  // namespace pcsp
