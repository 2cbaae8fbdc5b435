#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pcsp/geometry.hpp"
#include "pcsp/rat.hpp"

namespace pcsp {

// Finite-support probability distribution over state ids.  Entries carry
// strictly positive weight; full distributions sum to 1, but the same type
// also carries subdistributions where noted.
using Dist = std::map<int, Rat>;

Dist dist_point(int s);
Dist dist_mix(const std::vector<std::pair<Rat, Dist>>& parts);
Rat dist_mass(const Dist& d);
void dist_add(Dist& into, const Rat& w, const Dist& d);
Dist dist_scale(const Rat& w, const Dist& d);

Vec dist_expected(const Dist& d, const std::function<Vec(int)>& f);

// One row per matched pair of the decomposition d = sum_i p_i * point(s_i)
// with s_i related to phi_i and theta = sum_i p_i * phi_i.
struct LiftWitness {
  struct Row {
    int state;
    Rat weight;
    Dist target;
  };
  std::vector<Row> rows;
};

// Does the lifting of the relation {(state, target)} relate d to theta?
// Mass may be split across several pairs with the same left state.
std::optional<LiftWitness> lift_check(
    const std::vector<std::pair<int, Dist>>& pairs, const Dist& d,
    const Dist& theta);

}  // namespace pcsp
