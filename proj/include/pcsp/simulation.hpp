#pragma once

#include <optional>

#include "pcsp/logic.hpp"
#include "pcsp/plts.hpp"

namespace pcsp {

enum class SimKind { Simulation, FailureSimulation, EFailureSimulation };

// One discharged obligation of a certificate pair: a transition of the left
// state matched by a weak move of the right distribution whose end point
// lifts the pair set, or (failure kinds, stable states) the maximal refusal
// matched by an internal move to a refusing distribution.
struct SimClauseWitness {
  int pair = 0;
  bool refusal = false;
  std::string label;                      // transition clauses
  Dist post;                              // the transition's target
  std::vector<std::string> refusal_set;   // refusal clauses
  Chain chain;                            // weak move of the right side
  LiftWitness lift;                       // decomposes post over the pairs
};

// A relation between states and distributions together with the clause
// witnesses that make it a simulation of the requested kind.  The extended
// failure kind reads every weak move as success-avoiding and exempts
// success-enabled left states.
struct SimCertificate {
  SimKind kind = SimKind::Simulation;
  std::vector<std::pair<int, Dist>> pairs;
  std::vector<SimClauseWitness> clauses;
};

// Tries to discharge every obligation of the given pairs, solving one
// linear program per transition clause.
std::optional<SimCertificate> complete_certificate(
    Plts& g, SimKind kind, std::vector<std::pair<int, Dist>> pairs);

bool check_certificate(Plts& g, const SimCertificate& cert);

// Preorders decided through characteristic formulas; memoised.
bool sim_leq(TermPtr p, TermPtr q);
bool fsim_leq(TermPtr p, TermPtr q);

// A formula separating p from q when the order fails, null otherwise.  For
// Simulation the formula holds of p but not q; for FailureSimulation it
// holds of q but not p.  The extended kind has no formula characterisation.
FormulaPtr distinguishing_formula(TermPtr p, TermPtr q, SimKind kind);

}  // namespace pcsp
