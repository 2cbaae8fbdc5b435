#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcsp/dist.hpp"
#include "pcsp/term.hpp"

namespace pcsp {

// Transition labels: "" stands for tau, anything else is a visible or
// success action.
struct Transition {
  std::string label;
  Dist target;
};

// A weak-transition witness: dists[0] is the source, consecutive entries are
// lifted hat-tau steps, except dists[amark] -> dists[amark+1] which is a
// lifted strong step on the chain's action (amark = -1 for pure tau chains).
struct Chain {
  std::vector<Dist> dists;
  int amark = -1;
};

Chain scale_chain(const Rat& w, const Chain& ch);

// Weighted sum of chains, padded with idle steps so that lengths and strong
// step positions agree.  All parts must be tau chains or all marked.
Chain merge_scaled(const std::vector<std::pair<Rat, const Chain*>>& parts);

// A polytope of distributions given by its vertices, each carrying the chain
// that reaches it.
struct DistPolytope {
  std::vector<Dist> verts;
  std::vector<Chain> chains;
};

using VertChain = std::pair<Dist, Chain>;

std::vector<VertChain> hull_reduce_vc(std::vector<VertChain> cand);

// Probabilistic labelled transition system over interned process states.
// States from several terms may share one graph; the visible alphabet is
// fixed up front and covers every term added later.
class Plts {
 public:
  explicit Plts(std::vector<std::string> alphabet);

  const std::vector<std::string>& alphabet() const { return alphabet_; }

  int intern_state(TermPtr s);
  bool has_state(TermPtr s) const { return index_.count(s) != 0; }
  int id_of(TermPtr s) const { return index_.at(s); }
  TermPtr state(int id) const { return states_[static_cast<size_t>(id)]; }
  int num_states() const { return static_cast<int>(states_.size()); }

  // Interprets a well-sorted term as a distribution over state ids.
  Dist interp(TermPtr t);

  // desugar + interp + explore every reachable state.
  Dist build(TermPtr t);

  const std::vector<Transition>& step(int s);

  bool stable(int s);
  bool enables(int s, const std::string& label);
  bool success_enabled(int s);
  std::vector<std::string> enabled_labels(int s);

  // No tau and no label from x enabled.  x may mention success actions.
  bool refuses(int s, const std::vector<std::string>& x);

  // Visible actions (from the alphabet) the state cannot do.
  std::vector<std::string> maximal_refusal(int s);

  // Weak derivative polytopes of a single state.  The avoid variants forbid
  // moving through success-enabled states.
  const DistPolytope& dtau(int s, bool avoid = false);
  const DistPolytope& dhat(int s, const std::string& a, bool avoid = false);

  // Can s reach, by internal moves, a state set refusing x?
  bool cwr(int s, const std::vector<std::string>& x, bool avoid = false);

 private:
  std::vector<Transition> trans_of(TermPtr s);

  std::vector<std::string> alphabet_;
  std::vector<TermPtr> states_;
  std::unordered_map<TermPtr, int> index_;
  std::vector<std::optional<std::vector<Transition>>> trans_;
  std::map<std::pair<int, bool>, DistPolytope> dtau_;
  std::map<std::tuple<int, std::string, bool>, DistPolytope> dhat_;
  std::map<std::tuple<int, std::string, bool>, bool> cwr_;
};

// Pointwise mixtures of whole polytopes; empty when any part is empty.
std::vector<VertChain> mix_vertex_sets(
    const std::vector<std::pair<Rat, const DistPolytope*>>& parts);

DistPolytope weak_tau_derivatives(Plts& g, const Dist& d, bool avoid = false);
DistPolytope weak_a_derivatives(Plts& g, const Dist& d, const std::string& a,
                                bool avoid = false);
bool can_weakly_refuse(Plts& g, const Dist& d,
                       const std::vector<std::string>& x, bool avoid = false);

// One lifted step from `from` to `to`: label "" with allow_idle is a hat-tau
// step, a nonempty label with !allow_idle a strong lifted step.  Returns how
// each source state splits its mass over idling and its transitions.
struct StepSplit {
  struct Part {
    int state;
    Rat weight;
    bool idle;
    Dist target;  // meaningful when !idle
  };
  std::vector<Part> parts;
};

std::optional<StepSplit> split_step(Plts& g, const Dist& from, const Dist& to,
                                    const std::string& label, bool allow_idle,
                                    bool avoid = false);

// Re-derives every step of the chain; a valid chain is a machine-checkable
// weak-transition certificate.
bool check_chain(Plts& g, const Chain& ch, const std::string& label,
                 bool avoid = false);

// Internal moves from d to a distribution every state of which refuses x.
// Pre: can_weakly_refuse(g, d, x, avoid).
Chain refusal_chain(Plts& g, const Dist& d, const std::vector<std::string>& x,
                    bool avoid = false);

}  // namespace pcsp
