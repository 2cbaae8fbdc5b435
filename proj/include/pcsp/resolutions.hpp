#pragma once

#include <optional>

#include "pcsp/testing.hpp"

namespace pcsp {

// A fully probabilistic automaton over fresh nodes, each resolving to a base
// state.  Moves point only at strictly larger node ids, so the automaton is
// finite and acyclic by construction.
struct Resolution {
  struct Node {
    int pstate;
    std::optional<std::pair<std::string, Dist>> move;  // Dist over node ids
  };
  std::vector<Node> nodes;
  Dist init;  // over node ids
};

// Resolving-function clauses: the pushforward of init is `from`, every move
// maps onto an actual base transition, and moveless nodes resolve to
// deadlocked states.
bool check_resolution(Plts& g, const Resolution& res, const Dist& from);

// Probability that the automaton follows the action sequence sigma.
Rat pr(const Resolution& res, const std::vector<std::string>& sigma);

// Success tuple: for each listed success action, the probability that the
// automaton ever performs it.
Vec w_of(const Resolution& res, const std::vector<std::string>& omega);

// All resolutions that commit each unrolled state occurrence to one actual
// transition, with no interpolation.
std::vector<Resolution> enumerate_deterministic_resolutions(Plts& g,
                                                            const Dist& from);

// Hull of the success tuples of the deterministic resolutions.
OutcomeSet w_set(TestApplication& app, const Dist& from);

// A resolution whose success tuple is exactly `target`, when target lies in
// the convex-closed result set of `from`.
std::optional<Resolution> synthesize_resolution(TestApplication& app,
                                                const Dist& from,
                                                const Vec& target);

}  // namespace pcsp
