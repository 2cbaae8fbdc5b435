#include "pcsp/dist.hpp"

#include <set>
#include <stdexcept>

namespace pcsp {

Dist dist_point(int s) { return {{s, rat(1)}}; }

void dist_add(Dist& into, const Rat& w, const Dist& d) {
  if (w == 0) return;
  for (const auto& [s, p] : d) {
    Rat& cell = into[s];
    cell += w * p;
    if (cell == 0) into.erase(s);
  }
}

Dist dist_mix(const std::vector<std::pair<Rat, Dist>>& parts) {
  Dist out;
  Rat total = 0;
  for (const auto& [w, d] : parts) {
    if (w < 0) throw std::runtime_error("dist_mix: negative weight");
    total += w;
    dist_add(out, w, d);
  }
  if (total != 1) throw std::runtime_error("dist_mix: weights must sum to 1");
  return out;
}

Rat dist_mass(const Dist& d) {
  Rat m = 0;
  for (const auto& [_, p] : d) m += p;
  return m;
}

Dist dist_scale(const Rat& w, const Dist& d) {
  Dist out;
  if (w == 0) return out;
  for (const auto& [s, p] : d) out[s] = w * p;
  return out;
}

Vec dist_expected(const Dist& d, const std::function<Vec(int)>& f) {
  Vec out;
  bool first = true;
  for (const auto& [s, p] : d) {
    Vec v = f(s);
    if (first) {
      out.assign(v.size(), rat(0));
      first = false;
    }
    if (v.size() != out.size())
      throw std::runtime_error("dist_expected: dimension mismatch");
    for (size_t i = 0; i < v.size(); ++i) out[i] += p * v[i];
  }
  return out;
}

std::optional<LiftWitness> lift_check(
    const std::vector<std::pair<int, Dist>>& pairs, const Dist& d,
    const Dist& theta) {
  LinSys ls;
  std::vector<int> use;  // indices into pairs with usable left state
  for (size_t i = 0; i < pairs.size(); ++i)
    if (d.count(pairs[i].first)) use.push_back(static_cast<int>(i));
  std::map<int, std::vector<int>> by_state;  // state -> vars
  std::vector<int> vars(use.size());
  for (size_t k = 0; k < use.size(); ++k) {
    vars[k] = ls.new_var();
    by_state[pairs[use[k]].first].push_back(vars[k]);
  }
  for (const auto& [s, p] : d) {
    auto it = by_state.find(s);
    if (it == by_state.end()) return std::nullopt;
    std::map<int, Rat> row;
    for (int v : it->second) row[v] = 1;
    ls.add_row(std::move(row), p);
  }
  std::set<int> states;
  for (const auto& [s, _] : theta) states.insert(s);
  for (int k : use)
    for (const auto& [s, _] : pairs[k].second) states.insert(s);
  for (int s : states) {
    std::map<int, Rat> row;
    for (size_t k = 0; k < use.size(); ++k) {
      const Dist& tgt = pairs[use[k]].second;
      if (auto it = tgt.find(s); it != tgt.end()) row[vars[k]] = it->second;
    }
    auto it = theta.find(s);
    ls.add_row(std::move(row), it == theta.end() ? rat(0) : it->second);
  }
  auto sol = ls.solve();
  if (!sol) return std::nullopt;
  LiftWitness w;
  for (size_t k = 0; k < use.size(); ++k) {
    const Rat& weight = (*sol)[static_cast<size_t>(vars[k])];
    if (weight == 0) continue;
    w.rows.push_back({pairs[use[k]].first, weight, pairs[use[k]].second});
  }
  return w;
}

}  // namespace pcsp
