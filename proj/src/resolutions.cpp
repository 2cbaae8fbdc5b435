#include "pcsp/resolutions.hpp"

#include <algorithm>

namespace pcsp {

bool check_resolution(Plts& g, const Resolution& res, const Dist& from) {
  int n = static_cast<int>(res.nodes.size());
  auto ok_dist = [&](const Dist& d, int above) {
    Rat mass = 0;
    for (const auto& [r, p] : d) {
      if (r <= above || r >= n || p <= 0) return false;
      mass += p;
    }
    return mass == 1;
  };
  if (!ok_dist(res.init, -1)) return false;
  Dist push;
  for (const auto& [r, p] : res.init)
    push[res.nodes[static_cast<size_t>(r)].pstate] += p;
  if (push != from) return false;
  for (int r = 0; r < n; ++r) {
    const auto& node = res.nodes[static_cast<size_t>(r)];
    if (node.pstate < 0 || node.pstate >= g.num_states()) return false;
    if (!node.move) {
      if (!g.step(node.pstate).empty()) return false;
      continue;
    }
    const auto& [label, target] = *node.move;
    if (!ok_dist(target, r)) return false;
    Dist image;
    for (const auto& [r2, p] : target)
      image[res.nodes[static_cast<size_t>(r2)].pstate] += p;
    bool found = false;
    for (const auto& tr : g.step(node.pstate))
      if (tr.label == label && tr.target == image) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

namespace {

Rat pr_node(const Resolution& res, const std::vector<std::string>& sigma,
            size_t k, int r);

Rat pr_dist(const Resolution& res, const std::vector<std::string>& sigma,
            size_t k, const Dist& d) {
  Rat out = 0;
  for (const auto& [r, p] : d) out += p * pr_node(res, sigma, k, r);
  return out;
}

Rat pr_node(const Resolution& res, const std::vector<std::string>& sigma,
            size_t k, int r) {
  if (k == sigma.size()) return rat(1);
  const auto& move = res.nodes[static_cast<size_t>(r)].move;
  if (!move || move->first != sigma[k]) return rat(0);
  return pr_dist(res, sigma, k + 1, move->second);
}

}  // namespace

Rat pr(const Resolution& res, const std::vector<std::string>& sigma) {
  return pr_dist(res, sigma, 0, res.init);
}

Vec w_of(const Resolution& res, const std::vector<std::string>& omega) {
  size_t dim = omega.size();
  std::vector<std::optional<Vec>> memo(res.nodes.size());
  auto of_node = [&](auto&& self, int r) -> const Vec& {
    auto& slot = memo[static_cast<size_t>(r)];
    if (slot) return *slot;
    const auto& node = res.nodes[static_cast<size_t>(r)];
    Vec v(dim, rat(0));
    if (node.move) {
      for (const auto& [r2, p] : node.move->second) {
        const Vec& w = self(self, r2);
        for (size_t i = 0; i < dim; ++i) v[i] += p * w[i];
      }
      auto it = std::find(omega.begin(), omega.end(), node.move->first);
      if (it != omega.end()) v[static_cast<size_t>(it - omega.begin())] = 1;
    }
    slot = std::move(v);
    return *slot;
  };
  Vec out(dim, rat(0));
  for (const auto& [r, p] : res.init) {
    const Vec& w = of_node(of_node, r);
    for (size_t i = 0; i < dim; ++i) out[i] += p * w[i];
  }
  return out;
}

namespace {

struct Fragment {
  std::vector<Resolution::Node> nodes;
  Dist init;  // over local node ids
};

// Splices src onto dst, returning the id offset.
int splice(std::vector<Resolution::Node>& dst,
           const std::vector<Resolution::Node>& src) {
  int off = static_cast<int>(dst.size());
  for (const auto& node : src) {
    Resolution::Node copy = node;
    if (copy.move) {
      Dist shifted;
      for (const auto& [r, p] : copy.move->second) shifted[r + off] = p;
      copy.move->second = std::move(shifted);
    }
    dst.push_back(std::move(copy));
  }
  return off;
}

using Memo = std::map<int, std::vector<Fragment>>;

const std::vector<Fragment>& enum_state(Plts& g, int s, Memo& memo);

std::vector<Fragment> enum_dist(Plts& g, const Dist& d, Memo& memo) {
  std::vector<Fragment> acc{{{}, {}}};
  for (const auto& [t, p] : d) {
    std::vector<Fragment> next;
    for (const auto& base : acc)
      for (const auto& part : enum_state(g, t, memo)) {
        Fragment f = base;
        int off = splice(f.nodes, part.nodes);
        for (const auto& [r, q] : part.init) f.init[r + off] += p * q;
        next.push_back(std::move(f));
      }
    acc = std::move(next);
  }
  return acc;
}

const std::vector<Fragment>& enum_state(Plts& g, int s, Memo& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  std::vector<Fragment> out;
  auto trs = g.step(s);
  if (trs.empty()) {
    Fragment f;
    f.nodes.push_back({s, std::nullopt});
    f.init = dist_point(0);
    out.push_back(std::move(f));
  } else {
    for (const auto& tr : trs)
      for (const auto& sub : enum_dist(g, tr.target, memo)) {
        Fragment f;
        f.nodes.push_back({s, std::nullopt});
        int off = splice(f.nodes, sub.nodes);
        Dist target;
        for (const auto& [r, q] : sub.init) target[r + off] = q;
        f.nodes[0].move = {tr.label, std::move(target)};
        f.init = dist_point(0);
        out.push_back(std::move(f));
      }
  }
  return memo.emplace(s, std::move(out)).first->second;
}

}  // namespace

std::vector<Resolution> enumerate_deterministic_resolutions(Plts& g,
                                                            const Dist& from) {
  Memo memo;
  std::vector<Resolution> out;
  for (auto& f : enum_dist(g, from, memo))
    out.push_back({std::move(f.nodes), std::move(f.init)});
  return out;
}

OutcomeSet w_set(TestApplication& app, const Dist& from) {
  std::vector<Vec> pts;
  for (const auto& res : enumerate_deterministic_resolutions(*app.graph, from))
    pts.push_back(w_of(res, app.omega));
  return hull_set(app.omega, std::move(pts));
}

namespace {

// Decomposes target as a convex mixture over groups of vertex sets; one
// weight block per group, all sharing one mass row.  Returns per-group
// (weight, mixed point) for groups with positive weight.
std::optional<std::vector<std::pair<Rat, Vec>>> mix_split(
    const std::vector<std::vector<Vec>>& groups,
    const std::vector<Rat>& masses, const Vec& target) {
  LinSys ls;
  std::vector<std::vector<int>> vars(groups.size());
  for (size_t i = 0; i < groups.size(); ++i)
    for (size_t k = 0; k < groups[i].size(); ++k)
      vars[i].push_back(ls.new_var());
  for (size_t i = 0; i < groups.size(); ++i) {
    std::map<int, Rat> row;
    for (int v : vars[i]) row[v] = 1;
    ls.add_row(std::move(row), masses[i]);
  }
  for (size_t d = 0; d < target.size(); ++d) {
    std::map<int, Rat> row;
    for (size_t i = 0; i < groups.size(); ++i)
      for (size_t k = 0; k < groups[i].size(); ++k) {
        Rat c = groups[i][k][d];
        if (c != 0) row[vars[i][k]] += c;
      }
    ls.add_row(std::move(row), target[d]);
  }
  auto sol = ls.solve();
  if (!sol) return std::nullopt;
  std::vector<std::pair<Rat, Vec>> out;
  for (size_t i = 0; i < groups.size(); ++i) {
    Rat w = 0;
    Vec mixed(target.size(), rat(0));
    for (size_t k = 0; k < groups[i].size(); ++k) {
      const Rat& lam = (*sol)[static_cast<size_t>(vars[i][k])];
      if (lam == 0) continue;
      w += lam;
      for (size_t d = 0; d < target.size(); ++d)
        mixed[d] += lam * groups[i][k][d];
    }
    if (w > 0)
      for (size_t d = 0; d < target.size(); ++d) mixed[d] /= w;
    out.push_back({w, std::move(mixed)});
  }
  return out;
}

// Point of the set matching `o` on every coordinate except skip.
std::optional<Vec> preimage_point(const OutcomeSet& set, const Vec& o,
                                  size_t skip) {
  LinSys ls;
  std::vector<int> lam = ls.new_vars(static_cast<int>(set.points.size()));
  std::map<int, Rat> mass;
  for (int v : lam) mass[v] = 1;
  ls.add_row(std::move(mass), 1);
  for (size_t d = 0; d < o.size(); ++d) {
    if (d == skip) continue;
    std::map<int, Rat> row;
    for (size_t k = 0; k < set.points.size(); ++k)
      row[lam[static_cast<size_t>(k)]] = set.points[k][d];
    ls.add_row(std::move(row), o[d]);
  }
  auto sol = ls.solve();
  if (!sol) return std::nullopt;
  Vec out(o.size(), rat(0));
  for (size_t k = 0; k < set.points.size(); ++k) {
    const Rat& w = (*sol)[static_cast<size_t>(lam[k])];
    for (size_t d = 0; d < o.size(); ++d) out[d] += w * set.points[k][d];
  }
  return out;
}

bool synth_dist(TestApplication& app, const Dist& from, const Vec& target,
                Resolution& res, Dist& init_out);

// Decomposes target as sum_i p_i * alpha_i!(o_i) over the transitions of s,
// with one fresh node per transition taking positive weight.
bool synth_state(TestApplication& app, int s, const Vec& target,
                 Resolution& res, Dist& init_out) {
  Plts& g = *app.graph;
  auto trs = g.step(s);
  if (trs.empty()) {
    for (const Rat& c : target)
      if (c != 0) return false;
    int id = static_cast<int>(res.nodes.size());
    res.nodes.push_back({s, std::nullopt});
    init_out = dist_point(id);
    return true;
  }
  LinSys ls;
  std::vector<std::vector<Vec>> groups;
  std::vector<std::vector<int>> vars(trs.size());
  std::map<int, Rat> mass;
  for (size_t i = 0; i < trs.size(); ++i) {
    OutcomeSet set =
        apply_success(trs[i].label, results_vector_of(app, trs[i].target));
    for (size_t k = 0; k < set.points.size(); ++k) {
      int v = ls.new_var();
      vars[i].push_back(v);
      mass[v] = 1;
    }
    groups.push_back(std::move(set.points));
  }
  ls.add_row(std::move(mass), 1);
  for (size_t d = 0; d < target.size(); ++d) {
    std::map<int, Rat> row;
    for (size_t i = 0; i < groups.size(); ++i)
      for (size_t k = 0; k < groups[i].size(); ++k) {
        Rat c = groups[i][k][d];
        if (c != 0) row[vars[i][k]] += c;
      }
    ls.add_row(std::move(row), target[d]);
  }
  auto sol = ls.solve();
  if (!sol) return false;
  init_out.clear();
  for (size_t i = 0; i < trs.size(); ++i) {
    Rat p = 0;
    Vec oi(target.size(), rat(0));
    for (size_t k = 0; k < groups[i].size(); ++k) {
      const Rat& lam = (*sol)[static_cast<size_t>(vars[i][k])];
      if (lam == 0) continue;
      p += lam;
      for (size_t d = 0; d < target.size(); ++d)
        oi[d] += lam * groups[i][k][d];
    }
    if (p == 0) continue;
    for (size_t d = 0; d < target.size(); ++d) oi[d] /= p;
    Vec pre = oi;
    auto it = std::find(app.omega.begin(), app.omega.end(), trs[i].label);
    if (it != app.omega.end()) {
      size_t idx = static_cast<size_t>(it - app.omega.begin());
      OutcomeSet inner = results_vector_of(app, trs[i].target);
      auto found = preimage_point(inner, oi, idx);
      if (!found) return false;
      pre = *found;
    }
    int id = static_cast<int>(res.nodes.size());
    res.nodes.push_back({s, std::nullopt});
    Dist sub_init;
    if (!synth_dist(app, trs[i].target, pre, res, sub_init)) return false;
    res.nodes[static_cast<size_t>(id)].move = {trs[i].label,
                                               std::move(sub_init)};
    init_out[id] += p;
  }
  return true;
}

bool synth_dist(TestApplication& app, const Dist& from, const Vec& target,
                Resolution& res, Dist& init_out) {
  std::vector<std::vector<Vec>> groups;
  std::vector<Rat> masses;
  std::vector<int> states;
  for (const auto& [s, p] : from) {
    groups.push_back(results_vector_at(app, s).points);
    masses.push_back(p);
    states.push_back(s);
  }
  auto split = mix_split(groups, masses, target);
  if (!split) return false;
  init_out.clear();
  for (size_t j = 0; j < states.size(); ++j) {
    const auto& [w, oj] = (*split)[j];
    Dist sub;
    if (!synth_state(app, states[j], oj, res, sub)) return false;
    dist_add(init_out, w, sub);
  }
  return true;
}

}  // namespace

std::optional<Resolution> synthesize_resolution(TestApplication& app,
                                                const Dist& from,
                                                const Vec& target) {
  Resolution res;
  Dist init;
  if (!synth_dist(app, from, target, res, init)) return std::nullopt;
  res.init = std::move(init);
  return res;
}

}  // namespace pcsp
