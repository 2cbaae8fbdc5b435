#include "pcsp/simulation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pcsp {

namespace {

std::vector<std::string> success_labels(Plts& g) {
  std::set<std::string> ws;
  for (int s = 0; s < g.num_states(); ++s) {
    auto trs = g.step(s);
    for (const auto& tr : trs)
      if (is_success_action(tr.label)) ws.insert(tr.label);
  }
  return {ws.begin(), ws.end()};
}

struct Obligation {
  bool refusal = false;
  std::string label;
  Dist post;
  std::vector<std::string> x;
};

std::vector<Obligation> obligations(Plts& g, int s, SimKind kind) {
  std::vector<Obligation> out;
  if (kind == SimKind::EFailureSimulation && g.success_enabled(s)) return out;
  auto trs = g.step(s);
  std::set<std::pair<std::string, Dist>> seen;
  for (const auto& tr : trs)
    if (seen.insert({tr.label, tr.target}).second)
      out.push_back({false, tr.label, tr.target, {}});
  if (kind != SimKind::Simulation && g.stable(s)) {
    std::vector<std::string> x = g.maximal_refusal(s);
    if (kind == SimKind::EFailureSimulation)
      for (const auto& w : success_labels(g)) x.push_back(w);
    out.push_back({true, "", {}, std::move(x)});
  }
  return out;
}

// Solves for a weak move of theta on the label whose end point decomposes
// over the pairs as a lifting of post.
std::optional<SimClauseWitness> match_transition(
    Plts& g, const std::vector<std::pair<int, Dist>>& pairs, int pair_idx,
    const Dist& theta, const std::string& label, const Dist& post,
    bool avoid) {
  LinSys sys;
  struct MoveVar {
    int state;
    const DistPolytope* poly;
    size_t vert;
    int var;
  };
  std::vector<MoveVar> moves;
  for (const auto& [u, q] : theta) {
    const DistPolytope& poly =
        label.empty() ? g.dtau(u, avoid) : g.dhat(u, label, avoid);
    std::map<int, Rat> row;
    for (size_t k = 0; k < poly.verts.size(); ++k) {
      int var = sys.new_var();
      moves.push_back({u, &poly, k, var});
      row[var] = rat(1);
    }
    sys.add_row(std::move(row), q);
  }
  std::vector<std::pair<size_t, int>> lifts;  // pair index, var
  for (const auto& [t, q] : post) {
    std::map<int, Rat> row;
    for (size_t j = 0; j < pairs.size(); ++j) {
      if (pairs[j].first != t) continue;
      int var = sys.new_var();
      lifts.push_back({j, var});
      row[var] = rat(1);
    }
    sys.add_row(std::move(row), q);
  }
  std::set<int> coords;
  for (const auto& mv : moves)
    for (const auto& [v, q] : mv.poly->verts[mv.vert]) coords.insert(v);
  for (const auto& [j, var] : lifts)
    for (const auto& [v, q] : pairs[j].second) coords.insert(v);
  for (int v : coords) {
    std::map<int, Rat> row;
    for (const auto& mv : moves)
      if (auto it = mv.poly->verts[mv.vert].find(v);
          it != mv.poly->verts[mv.vert].end())
        row[mv.var] += it->second;
    for (const auto& [j, var] : lifts)
      if (auto it = pairs[j].second.find(v); it != pairs[j].second.end())
        row[var] -= it->second;
    sys.add_row(std::move(row), rat(0));
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  SimClauseWitness cl;
  cl.pair = pair_idx;
  cl.label = label;
  cl.post = post;
  std::vector<std::pair<Rat, const Chain*>> parts;
  for (const auto& mv : moves)
    if ((*sol)[static_cast<size_t>(mv.var)] != 0)
      parts.push_back({(*sol)[static_cast<size_t>(mv.var)],
                       &mv.poly->chains[mv.vert]});
  cl.chain = merge_scaled(parts);
  for (const auto& [j, var] : lifts)
    if ((*sol)[static_cast<size_t>(var)] != 0)
      cl.lift.rows.push_back({pairs[j].first,
                              (*sol)[static_cast<size_t>(var)],
                              pairs[j].second});
  return cl;
}

}  // namespace

std::optional<SimCertificate> complete_certificate(
    Plts& g, SimKind kind, std::vector<std::pair<int, Dist>> pairs) {
  bool avoid = kind == SimKind::EFailureSimulation;
  SimCertificate cert;
  cert.kind = kind;
  cert.pairs = std::move(pairs);
  for (size_t i = 0; i < cert.pairs.size(); ++i) {
    const auto& [s, theta] = cert.pairs[i];
    if (dist_mass(theta) != 1) return std::nullopt;
    for (const Obligation& ob : obligations(g, s, kind)) {
      if (ob.refusal) {
        if (!can_weakly_refuse(g, theta, ob.x, avoid)) return std::nullopt;
        SimClauseWitness cl;
        cl.pair = static_cast<int>(i);
        cl.refusal = true;
        cl.refusal_set = ob.x;
        cl.chain = refusal_chain(g, theta, ob.x, avoid);
        cert.clauses.push_back(std::move(cl));
        continue;
      }
      auto cl = match_transition(g, cert.pairs, static_cast<int>(i), theta,
                                 ob.label, ob.post, avoid);
      if (!cl) return std::nullopt;
      cert.clauses.push_back(std::move(*cl));
    }
  }
  return cert;
}

bool check_certificate(Plts& g, const SimCertificate& cert) {
  bool avoid = cert.kind == SimKind::EFailureSimulation;
  for (size_t i = 0; i < cert.pairs.size(); ++i) {
    const auto& [s, theta] = cert.pairs[i];
    if (dist_mass(theta) != 1) return false;
    for (const Obligation& ob : obligations(g, s, cert.kind)) {
      const SimClauseWitness* found = nullptr;
      for (const auto& cl : cert.clauses) {
        if (cl.pair != static_cast<int>(i) || cl.refusal != ob.refusal)
          continue;
        if (ob.refusal ? cl.refusal_set == ob.x
                       : cl.label == ob.label && cl.post == ob.post) {
          found = &cl;
          break;
        }
      }
      if (!found) return false;
      const SimClauseWitness& cl = *found;
      if (cl.chain.dists.empty() || cl.chain.dists.front() != theta)
        return false;
      if (!check_chain(g, cl.chain, ob.refusal ? "" : ob.label, avoid))
        return false;
      if (ob.refusal) {
        for (const auto& [v, q] : cl.chain.dists.back())
          if (!g.refuses(v, ob.x)) return false;
        continue;
      }
      Dist left, end;
      for (const auto& row : cl.lift.rows) {
        if (row.weight <= 0) return false;
        bool in_pairs = false;
        for (const auto& [t, th] : cert.pairs)
          if (t == row.state && th == row.target) {
            in_pairs = true;
            break;
          }
        if (!in_pairs) return false;
        left[row.state] += row.weight;
        dist_add(end, row.weight, row.target);
      }
      if (left != ob.post || end != cl.chain.dists.back()) return false;
    }
  }
  return true;
}

namespace {

std::map<std::tuple<TermPtr, TermPtr, int>, bool>& verdicts() {
  static std::map<std::tuple<TermPtr, TermPtr, int>, bool> m;
  return m;
}

bool leq(TermPtr p, TermPtr q, Logic kind) {
  auto key = std::make_tuple(p, q, static_cast<int>(kind));
  auto& memo = verdicts();
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  bool v = logic_leq(p, q, kind);
  memo.emplace(key, v);
  return v;
}

}  // namespace

bool sim_leq(TermPtr p, TermPtr q) { return leq(p, q, Logic::L); }

bool fsim_leq(TermPtr p, TermPtr q) { return leq(p, q, Logic::F); }

FormulaPtr distinguishing_formula(TermPtr p, TermPtr q, SimKind kind) {
  if (kind == SimKind::EFailureSimulation)
    throw std::runtime_error(
        "no formula characterisation for the extended kind");
  std::vector<std::string> act = visible_actions(p);
  for (const auto& a : visible_actions(q)) act.push_back(a);
  std::sort(act.begin(), act.end());
  act.erase(std::unique(act.begin(), act.end()), act.end());
  if (kind == SimKind::Simulation) {
    if (sim_leq(p, q)) return nullptr;
    Plts g(act);
    Dist dp = g.build(p);
    g.build(q);
    return char_formula(g, dp, Logic::L);
  }
  if (fsim_leq(p, q)) return nullptr;
  Plts g(act);
  g.build(p);
  Dist dq = g.build(q);
  return char_formula(g, dq, Logic::F);
}

}  // namespace pcsp
