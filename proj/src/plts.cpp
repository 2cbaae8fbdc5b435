#include "pcsp/plts.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace pcsp {

Chain scale_chain(const Rat& w, const Chain& ch) {
  Chain out;
  out.amark = ch.amark;
  out.dists.reserve(ch.dists.size());
  for (const auto& d : ch.dists) out.dists.push_back(dist_scale(w, d));
  return out;
}

Chain merge_scaled(const std::vector<std::pair<Rat, const Chain*>>& parts) {
  assert(!parts.empty());
  bool marked = parts[0].second->amark >= 0;
  int max_pre = 0;
  size_t max_post = 0, max_len = 1;
  for (const auto& [w, ch] : parts) {
    assert(!ch->dists.empty());
    assert((ch->amark >= 0) == marked);
    if (marked) {
      max_pre = std::max(max_pre, ch->amark);
      max_post =
          std::max(max_post, ch->dists.size() - static_cast<size_t>(ch->amark) - 1);
    } else {
      max_len = std::max(max_len, ch->dists.size());
    }
  }
  size_t len = marked ? static_cast<size_t>(max_pre) + 1 + max_post : max_len;
  Chain out;
  out.amark = marked ? max_pre : -1;
  out.dists.assign(len, Dist{});
  for (const auto& [w, ch] : parts) {
    if (w == 0) continue;
    long pad_front = marked ? max_pre - ch->amark : 0;
    long last = static_cast<long>(ch->dists.size()) - 1;
    for (size_t k = 0; k < len; ++k) {
      long idx = static_cast<long>(k) - pad_front;
      idx = std::max(0L, std::min(idx, last));
      dist_add(out.dists[k], w, ch->dists[static_cast<size_t>(idx)]);
    }
  }
  return out;
}

std::vector<VertChain> hull_reduce_vc(std::vector<VertChain> cand) {
  std::sort(cand.begin(), cand.end(),
            [](const VertChain& a, const VertChain& b) {
              return a.first < b.first;
            });
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](const VertChain& a, const VertChain& b) {
                           return a.first == b.first;
                         }),
             cand.end());
  std::set<int> coord_set;
  for (const auto& [d, _] : cand)
    for (const auto& [s, _p] : d) coord_set.insert(s);
  std::vector<int> coords(coord_set.begin(), coord_set.end());
  auto to_vec = [&](const Dist& d) {
    Vec v(coords.size(), rat(0));
    for (size_t i = 0; i < coords.size(); ++i)
      if (auto it = d.find(coords[i]); it != d.end()) v[i] = it->second;
    return v;
  };
  size_t i = 0;
  while (i < cand.size()) {
    std::vector<Vec> others;
    others.reserve(cand.size() - 1);
    for (size_t j = 0; j < cand.size(); ++j)
      if (j != i) others.push_back(to_vec(cand[j].first));
    if (in_hull(others, to_vec(cand[i].first)))
      cand.erase(cand.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return cand;
}

std::vector<VertChain> mix_vertex_sets(
    const std::vector<std::pair<Rat, const DistPolytope*>>& parts) {
  for (const auto& [w, poly] : parts)
    if (w > 0 && poly->verts.empty()) return {};
  std::vector<VertChain> acc;
  bool first = true;
  for (const auto& [w, poly] : parts) {
    if (w == 0) continue;
    if (first) {
      for (size_t k = 0; k < poly->verts.size(); ++k)
        acc.push_back({dist_scale(w, poly->verts[k]),
                       scale_chain(w, poly->chains[k])});
      first = false;
      continue;
    }
    std::vector<VertChain> next;
    next.reserve(acc.size() * poly->verts.size());
    for (const auto& [ad, ach] : acc)
      for (size_t k = 0; k < poly->verts.size(); ++k) {
        Dist d = ad;
        dist_add(d, w, poly->verts[k]);
        Chain ch = merge_scaled({{rat(1), &ach}, {w, &poly->chains[k]}});
        next.push_back({std::move(d), std::move(ch)});
      }
    acc = hull_reduce_vc(std::move(next));
  }
  return acc;
}

Plts::Plts(std::vector<std::string> alphabet) : alphabet_(std::move(alphabet)) {
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()),
                  alphabet_.end());
  for (const auto& a : alphabet_)
    if (a.empty() || a == "tau" || is_success_action(a))
      throw std::runtime_error("bad alphabet action: " + a);
}

int Plts::intern_state(TermPtr s) {
  if (auto it = index_.find(s); it != index_.end()) return it->second;
  int id = static_cast<int>(states_.size());
  states_.push_back(s);
  trans_.emplace_back();
  index_.emplace(s, id);
  return id;
}

Dist Plts::interp(TermPtr t) {
  if (t->op == Op::Prob) {
    Dist out = dist_scale(t->prob, interp(t->l));
    dist_add(out, 1 - t->prob, interp(t->r));
    return out;
  }
  if (!is_state_term(t))
    throw std::runtime_error("term is not well-sorted: " + term_str(t));
  return dist_point(intern_state(t));
}

Dist Plts::build(TermPtr t) {
  TermPtr d = desugar(t);
  for (const auto& a : visible_actions(d))
    if (!std::binary_search(alphabet_.begin(), alphabet_.end(), a))
      throw std::runtime_error("unknown action name: " + a);
  Dist init = interp(d);
  std::vector<int> stack;
  std::set<int> seen;
  for (const auto& [s, _] : init)
    if (seen.insert(s).second) stack.push_back(s);
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    auto trs = step(s);
    for (const auto& tr : trs)
      for (const auto& [u, _] : tr.target)
        if (seen.insert(u).second) stack.push_back(u);
  }
  return init;
}

std::vector<Transition> Plts::trans_of(TermPtr s) {
  std::vector<Transition> out;
  auto remap = [&](const Dist& d, auto f) {
    Dist res;
    for (const auto& [u, p] : d) {
      TermPtr tu = states_[static_cast<size_t>(u)];
      res[intern_state(f(tu))] += p;
    }
    return res;
  };
  switch (s->op) {
    case Op::Nil:
      break;
    case Op::Prefix:
      out.push_back({s->act, interp(s->l)});
      break;
    case Op::Intern:
      out.push_back({"", interp(s->l)});
      out.push_back({"", interp(s->r)});
      break;
    case Op::Extern: {
      TermPtr sl = s->l, sr = s->r;
      auto ltr = step(intern_state(sl));
      for (const auto& tr : ltr) {
        if (tr.label.empty())
          out.push_back(
              {"", remap(tr.target, [&](TermPtr u) { return mk_extern(u, sr); })});
        else
          out.push_back(tr);
      }
      auto rtr = step(intern_state(sr));
      for (const auto& tr : rtr) {
        if (tr.label.empty())
          out.push_back(
              {"", remap(tr.target, [&](TermPtr u) { return mk_extern(sl, u); })});
        else
          out.push_back(tr);
      }
      break;
    }
    case Op::Par: {
      TermPtr sl = s->l, sr = s->r;
      const auto& sync = s->sync;
      auto in_sync = [&](const std::string& a) {
        return std::binary_search(sync.begin(), sync.end(), a);
      };
      auto ltr = step(intern_state(sl));
      auto rtr = step(intern_state(sr));
      for (const auto& tr : ltr)
        if (tr.label.empty() || !in_sync(tr.label))
          out.push_back({tr.label, remap(tr.target, [&](TermPtr u) {
                           return mk_par(sync, u, sr);
                         })});
      for (const auto& tr : rtr)
        if (tr.label.empty() || !in_sync(tr.label))
          out.push_back({tr.label, remap(tr.target, [&](TermPtr u) {
                           return mk_par(sync, sl, u);
                         })});
      for (const auto& t1 : ltr) {
        if (t1.label.empty() || !in_sync(t1.label)) continue;
        for (const auto& t2 : rtr) {
          if (t2.label != t1.label) continue;
          Dist prod;
          for (const auto& [u1, p1] : t1.target) {
            TermPtr a1 = states_[static_cast<size_t>(u1)];
            for (const auto& [u2, p2] : t2.target) {
              TermPtr a2 = states_[static_cast<size_t>(u2)];
              prod[intern_state(mk_par(sync, a1, a2))] += p1 * p2;
            }
          }
          out.push_back({"", std::move(prod)});
        }
      }
      break;
    }
    case Op::Prob:
      throw std::runtime_error("probabilistic term used as a state");
  }
  std::sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.target < b.target;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Transition& a, const Transition& b) {
                          return a.label == b.label && a.target == b.target;
                        }),
            out.end());
  return out;
}

const std::vector<Transition>& Plts::step(int s) {
  auto& slot = trans_[static_cast<size_t>(s)];
  if (!slot) {
    auto computed = trans_of(states_[static_cast<size_t>(s)]);
    trans_[static_cast<size_t>(s)] = std::move(computed);
  }
  return *trans_[static_cast<size_t>(s)];
}

bool Plts::stable(int s) {
  for (const auto& tr : step(s))
    if (tr.label.empty()) return false;
  return true;
}

bool Plts::enables(int s, const std::string& label) {
  for (const auto& tr : step(s))
    if (tr.label == label) return true;
  return false;
}

bool Plts::success_enabled(int s) {
  for (const auto& tr : step(s))
    if (is_success_action(tr.label)) return true;
  return false;
}

std::vector<std::string> Plts::enabled_labels(int s) {
  std::set<std::string> ls;
  for (const auto& tr : step(s)) ls.insert(tr.label);
  return {ls.begin(), ls.end()};
}

bool Plts::refuses(int s, const std::vector<std::string>& x) {
  for (const auto& tr : step(s)) {
    if (tr.label.empty()) return false;
    if (std::find(x.begin(), x.end(), tr.label) != x.end()) return false;
  }
  return true;
}

std::vector<std::string> Plts::maximal_refusal(int s) {
  std::vector<std::string> out;
  for (const auto& a : alphabet_)
    if (!enables(s, a)) out.push_back(a);
  return out;
}

const DistPolytope& Plts::dtau(int s, bool avoid) {
  auto key = std::make_pair(s, avoid);
  if (auto it = dtau_.find(key); it != dtau_.end()) return it->second;
  std::vector<VertChain> cand;
  cand.push_back({dist_point(s), Chain{{dist_point(s)}, -1}});
  if (!(avoid && success_enabled(s))) {
    auto trs = step(s);
    for (const auto& tr : trs) {
      if (!tr.label.empty()) continue;
      std::vector<std::pair<Rat, const DistPolytope*>> parts;
      for (const auto& [t, p] : tr.target) parts.push_back({p, &dtau(t, avoid)});
      for (auto& [d, ch] : mix_vertex_sets(parts)) {
        Chain full;
        full.amark = -1;
        full.dists.push_back(dist_point(s));
        for (auto& dd : ch.dists) full.dists.push_back(std::move(dd));
        cand.push_back({std::move(d), std::move(full)});
      }
    }
  }
  auto red = hull_reduce_vc(std::move(cand));
  DistPolytope poly;
  for (auto& [d, ch] : red) {
    poly.verts.push_back(std::move(d));
    poly.chains.push_back(std::move(ch));
  }
  return dtau_.emplace(key, std::move(poly)).first->second;
}

const DistPolytope& Plts::dhat(int s, const std::string& a, bool avoid) {
  auto key = std::make_tuple(s, a, avoid);
  if (auto it = dhat_.find(key); it != dhat_.end()) return it->second;
  std::vector<VertChain> cand;
  if (!(avoid && success_enabled(s))) {
    auto trs = step(s);
    for (const auto& tr : trs) {
      if (tr.label == a) {
        std::vector<std::pair<Rat, const DistPolytope*>> parts;
        for (const auto& [t, p] : tr.target)
          parts.push_back({p, &dtau(t, avoid)});
        for (auto& [d, ch] : mix_vertex_sets(parts)) {
          Chain full;
          full.amark = 0;
          full.dists.push_back(dist_point(s));
          for (auto& dd : ch.dists) full.dists.push_back(std::move(dd));
          cand.push_back({std::move(d), std::move(full)});
        }
      } else if (tr.label.empty()) {
        std::vector<std::pair<Rat, const DistPolytope*>> parts;
        for (const auto& [t, p] : tr.target)
          parts.push_back({p, &dhat(t, a, avoid)});
        for (auto& [d, ch] : mix_vertex_sets(parts)) {
          Chain full;
          full.amark = ch.amark + 1;
          full.dists.push_back(dist_point(s));
          for (auto& dd : ch.dists) full.dists.push_back(std::move(dd));
          cand.push_back({std::move(d), std::move(full)});
        }
      }
    }
  }
  auto red = hull_reduce_vc(std::move(cand));
  DistPolytope poly;
  for (auto& [d, ch] : red) {
    poly.verts.push_back(std::move(d));
    poly.chains.push_back(std::move(ch));
  }
  return dhat_.emplace(key, std::move(poly)).first->second;
}

static std::string key_of(const std::vector<std::string>& x) {
  std::string k;
  for (const auto& a : x) {
    k += a;
    k += ',';
  }
  return k;
}

bool Plts::cwr(int s, const std::vector<std::string>& x, bool avoid) {
  auto key = std::make_tuple(s, key_of(x), avoid);
  if (auto it = cwr_.find(key); it != cwr_.end()) return it->second;
  bool res = refuses(s, x);
  if (!res && !(avoid && success_enabled(s))) {
    auto trs = step(s);
    for (const auto& tr : trs) {
      if (!tr.label.empty()) continue;
      bool all = true;
      for (const auto& [t, _] : tr.target)
        if (!cwr(t, x, avoid)) {
          all = false;
          break;
        }
      if (all) {
        res = true;
        break;
      }
    }
  }
  cwr_.emplace(key, res);
  return res;
}

DistPolytope weak_tau_derivatives(Plts& g, const Dist& d, bool avoid) {
  std::vector<std::pair<Rat, const DistPolytope*>> parts;
  for (const auto& [s, p] : d) parts.push_back({p, &g.dtau(s, avoid)});
  DistPolytope poly;
  for (auto& [v, ch] : mix_vertex_sets(parts)) {
    poly.verts.push_back(std::move(v));
    poly.chains.push_back(std::move(ch));
  }
  return poly;
}

DistPolytope weak_a_derivatives(Plts& g, const Dist& d, const std::string& a,
                                bool avoid) {
  std::vector<std::pair<Rat, const DistPolytope*>> parts;
  for (const auto& [s, p] : d) parts.push_back({p, &g.dhat(s, a, avoid)});
  DistPolytope poly;
  for (auto& [v, ch] : mix_vertex_sets(parts)) {
    poly.verts.push_back(std::move(v));
    poly.chains.push_back(std::move(ch));
  }
  return poly;
}

bool can_weakly_refuse(Plts& g, const Dist& d, const std::vector<std::string>& x,
                       bool avoid) {
  for (const auto& [s, _] : d)
    if (!g.cwr(s, x, avoid)) return false;
  return true;
}

std::optional<StepSplit> split_step(Plts& g, const Dist& from, const Dist& to,
                                    const std::string& label, bool allow_idle,
                                    bool avoid) {
  LinSys ls;
  struct Choice {
    int state;
    bool idle;
    Dist target;
    int var;
  };
  std::vector<Choice> choices;
  for (const auto& [u, p] : from) {
    size_t before = choices.size();
    if (allow_idle) choices.push_back({u, true, {}, ls.new_var()});
    if (!(avoid && g.success_enabled(u))) {
      auto trs = g.step(u);
      for (const auto& tr : trs)
        if (tr.label == label)
          choices.push_back({u, false, tr.target, ls.new_var()});
    }
    if (choices.size() == before) return std::nullopt;
    std::map<int, Rat> row;
    for (size_t k = before; k < choices.size(); ++k) row[choices[k].var] = 1;
    ls.add_row(std::move(row), p);
  }
  std::set<int> states;
  for (const auto& [v, _] : to) states.insert(v);
  for (const auto& c : choices) {
    if (c.idle)
      states.insert(c.state);
    else
      for (const auto& [v, _] : c.target) states.insert(v);
  }
  for (int v : states) {
    std::map<int, Rat> row;
    for (const auto& c : choices) {
      Rat coeff = 0;
      if (c.idle) {
        if (c.state == v) coeff = 1;
      } else if (auto it = c.target.find(v); it != c.target.end()) {
        coeff = it->second;
      }
      if (coeff != 0) row[c.var] = coeff;
    }
    auto it = to.find(v);
    ls.add_row(std::move(row), it == to.end() ? rat(0) : it->second);
  }
  auto sol = ls.solve();
  if (!sol) return std::nullopt;
  StepSplit split;
  for (const auto& c : choices) {
    const Rat& w = (*sol)[static_cast<size_t>(c.var)];
    if (w == 0) continue;
    split.parts.push_back({c.state, w, c.idle, c.target});
  }
  return split;
}

namespace {

Chain refusal_chain_state(Plts& g, int s, const std::vector<std::string>& x,
                          bool avoid) {
  if (g.refuses(s, x)) return Chain{{dist_point(s)}, -1};
  auto trs = g.step(s);
  for (const auto& tr : trs) {
    if (!tr.label.empty()) continue;
    bool ok = true;
    for (const auto& [t, _] : tr.target)
      if (!g.cwr(t, x, avoid)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::vector<Chain> subs;
    std::vector<std::pair<Rat, const Chain*>> parts;
    subs.reserve(tr.target.size());
    for (const auto& [t, p] : tr.target)
      subs.push_back(refusal_chain_state(g, t, x, avoid));
    size_t k = 0;
    for (const auto& [t, p] : tr.target) parts.push_back({p, &subs[k++]});
    Chain merged = merge_scaled(parts);
    Chain out{{dist_point(s)}, -1};
    out.dists.insert(out.dists.end(), merged.dists.begin(),
                     merged.dists.end());
    return out;
  }
  throw std::logic_error("refusal_chain: state cannot weakly refuse");
}

}  // namespace

Chain refusal_chain(Plts& g, const Dist& d, const std::vector<std::string>& x,
                    bool avoid) {
  std::vector<Chain> subs;
  std::vector<std::pair<Rat, const Chain*>> parts;
  subs.reserve(d.size());
  for (const auto& [s, _] : d) subs.push_back(refusal_chain_state(g, s, x, avoid));
  size_t k = 0;
  for (const auto& [s, p] : d) parts.push_back({p, &subs[k++]});
  return merge_scaled(parts);
}

bool check_chain(Plts& g, const Chain& ch, const std::string& label,
                 bool avoid) {
  if (ch.dists.empty()) return false;
  if (label.empty()) {
    if (ch.amark != -1) return false;
  } else {
    if (ch.amark < 0 ||
        static_cast<size_t>(ch.amark) + 1 >= ch.dists.size())
      return false;
  }
  for (size_t k = 0; k + 1 < ch.dists.size(); ++k) {
    bool strong = static_cast<int>(k) == ch.amark;
    auto sp = split_step(g, ch.dists[k], ch.dists[k + 1],
                         strong ? label : "", !strong, avoid);
    if (!sp) return false;
  }
  return true;
}

}  // namespace pcsp
