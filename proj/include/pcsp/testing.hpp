#pragma once

#include <memory>

#include "pcsp/geometry.hpp"
#include "pcsp/plts.hpp"

namespace pcsp {

// A test composed with a process: the graph of test |Act process, where Act
// is the shared visible alphabet.  Result caches live here.
struct TestApplication {
  std::shared_ptr<Plts> graph;
  TermPtr test = nullptr;
  TermPtr process = nullptr;
  TermPtr composition = nullptr;
  Dist init;
  std::vector<std::string> omega;

  std::map<int, std::vector<Rat>> vstate, vaction;
  std::map<int, OutcomeSet> vvector;
};

// The optional omega list fixes the coordinate order of vector results and
// lets a test omit some (or all) of the listed success actions.
TestApplication apply_test(TermPtr test, TermPtr process,
                           const std::vector<std::string>* alphabet = nullptr,
                           const std::vector<std::string>* omega = nullptr);

// Success probabilities where reaching a success-enabled state counts as
// success outright.  Scalar tests only.
OutcomeSet results_state(TestApplication& app);

// Success probabilities where the success action must actually be chosen
// among the enabled transitions.  Scalar tests only.
OutcomeSet results_action(TestApplication& app);

// Convex-closed vector of success probabilities, one coordinate per success
// action of the test.
OutcomeSet results_vector(TestApplication& app);

// Per-state variants used by other modules; see the cached maps above.
const std::vector<Rat>& results_state_at(TestApplication& app, int s);
const std::vector<Rat>& results_action_at(TestApplication& app, int s);
const OutcomeSet& results_vector_at(TestApplication& app, int s);
OutcomeSet results_vector_of(TestApplication& app, const Dist& d);

// Rewrites every subterm w.Q into w.0 |~| w.0, turning a test evaluated
// action-wise into one whose state-based results agree with the original's
// action-based results.
TermPtr state_to_action_test(TermPtr t);

enum class TestKind { May, Must };
enum class TestFlavour { State, Action, Vector };

// Single-test comparison: Hoare order on outcomes for may, Smyth for must.
bool test_order(TestKind kind, TestFlavour flavour, TermPtr t, TermPtr p,
                TermPtr q);

}  // namespace pcsp
