#include "pcsp/axioms.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "pcsp/logic.hpp"
#include "pcsp/simulation.hpp"

namespace pcsp {

namespace {

int child_count(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return 0;
    case Op::Prefix:
      return 1;
    default:
      return 2;
  }
}

TermPtr child(TermPtr t, int i) { return i == 0 ? t->l : t->r; }

TermPtr subterm_at(TermPtr t, const std::vector<int>& path) {
  for (int i : path) {
    if (i < 0 || i >= child_count(t)) return nullptr;
    t = child(t, i);
  }
  return t;
}

TermPtr rebuild(TermPtr t, const std::vector<int>& path, size_t k,
                TermPtr sub) {
  if (k == path.size()) return sub;
  TermPtr nl = t->l;
  TermPtr nr = t->r;
  (path[k] == 0 ? nl : nr) = rebuild(child(t, path[k]), path, k + 1, sub);
  switch (t->op) {
    case Op::Prefix:
      return mk_prefix(t->act, nl);
    case Op::Intern:
      return mk_intern(nl, nr);
    case Op::Extern:
      return mk_extern(nl, nr);
    case Op::Par:
      return mk_par(t->sync, nl, nr);
    case Op::Prob:
      return mk_prob(t->prob, nl, nr);
    default:
      return t;
  }
}

std::vector<int> down(std::vector<int> p, int i) {
  p.push_back(i);
  return p;
}

std::vector<int> cat(std::vector<int> p, const std::vector<int>& q) {
  p.insert(p.end(), q.begin(), q.end());
  return p;
}

// Position of arm j in a right-nested spine of n arms below base.
std::vector<int> spine_path(std::vector<int> p, size_t j, size_t n) {
  for (size_t k = 0; k < j; ++k) p.push_back(1);
  if (j + 1 < n) p.push_back(0);
  return p;
}

std::set<std::string> inits_set(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return {};
    case Op::Prefix:
      return {t->act};
    case Op::Intern:
      return {std::string()};
    case Op::Extern:
    case Op::Prob: {
      auto a = inits_set(t->l);
      auto b = inits_set(t->r);
      a.insert(b.begin(), b.end());
      return a;
    }
    case Op::Par: {
      auto a = inits_set(t->l);
      auto b = inits_set(t->r);
      std::set<std::string> out;
      auto free = [&](const std::string& x) {
        return !std::binary_search(t->sync.begin(), t->sync.end(), x);
      };
      for (const auto& x : a)
        if (free(x)) out.insert(x);
      for (const auto& x : b)
        if (free(x)) out.insert(x);
      for (const auto& x : t->sync)
        if (a.count(x) && b.count(x)) out.insert(std::string());
      return out;
    }
  }
  return {};
}

struct TermLess {
  bool operator()(TermPtr a, TermPtr b) const { return term_cmp(a, b) < 0; }
};

void tdist_add(std::map<TermPtr, Rat, TermLess>& into, const Rat& w,
               TermPtr t) {
  if (t->op == Op::Prob) {
    tdist_add(into, w * t->prob, t->l);
    tdist_add(into, w * (Rat(1) - t->prob), t->r);
  } else {
    into[t] += w;
  }
}

// Right-nested probabilistic combination in the given order; weights are
// positive and normalised away.
TermPtr prob_comb(const std::vector<std::pair<Rat, TermPtr>>& parts) {
  if (parts.empty()) throw std::logic_error("prob_comb: no parts");
  TermPtr t = parts.back().second;
  Rat tail = parts.back().first;
  for (size_t i = parts.size() - 1; i-- > 0;) {
    tail += parts[i].first;
    t = mk_prob(parts[i].first / tail, parts[i].second, t);
  }
  return t;
}

bool is_nf(TermPtr t);

bool is_nf_box(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return true;
    case Op::Prefix:
      return is_nf(t->l);
    case Op::Extern:
      return t->l->op == Op::Prefix && is_nf(t->l->l) &&
             (t->r->op == Op::Prefix || t->r->op == Op::Extern) &&
             is_nf_box(t->r);
    default:
      return false;
  }
}

bool is_nf(TermPtr t) {
  if (t->op == Op::Prob || t->op == Op::Intern)
    return is_nf(t->l) && is_nf(t->r);
  return is_nf_box(t);
}

// arm ::= leaf | leaf |+p| arm, leaf ::= act.Q [] P with one action per arm;
// rebuilds the arm with each leaf replaced by its Q.
std::optional<TermPtr> must2_leaf(TermPtr t, std::string* act) {
  if (t->op != Op::Extern || t->l->op != Op::Prefix) return std::nullopt;
  if (act->empty())
    *act = t->l->act;
  else if (*act != t->l->act)
    return std::nullopt;
  return t->l->l;
}

std::optional<TermPtr> must2_arm(TermPtr t, std::string* act) {
  if (t->op == Op::Prob) {
    auto l = must2_leaf(t->l, act);
    if (!l) return std::nullopt;
    auto r = must2_arm(t->r, act);
    if (!r) return std::nullopt;
    return mk_prob(t->prob, *l, *r);
  }
  return must2_leaf(t, act);
}

std::optional<TermPtr> apply_must2(TermPtr u) {
  if (u->op != Op::Intern) return std::nullopt;
  std::vector<TermPtr> arms;
  TermPtr b = u->r;
  while (b->op == Op::Intern) {
    arms.push_back(b->l);
    b = b->r;
  }
  arms.push_back(b);
  std::set<std::string> acts;
  std::vector<TermPtr> heads;
  for (TermPtr arm : arms) {
    std::string act;
    auto body = must2_arm(arm, &act);
    if (!body) return std::nullopt;
    acts.insert(act);
    heads.push_back(mk_prefix(act, *body));
  }
  for (const auto& x : inits(u->l))
    if (!acts.count(x)) return std::nullopt;
  TermPtr out = heads.back();
  for (size_t i = heads.size() - 1; i-- > 0;) out = mk_extern(heads[i], out);
  return out;
}

std::optional<TermPtr> apply_must2p(TermPtr u,
                                    const std::vector<TermPtr>& aux) {
  if (u->op != Op::Intern || aux.empty()) return std::nullopt;
  for (TermPtr h : aux)
    if (h->op != Op::Prefix) return std::nullopt;
  size_t n = aux.size();
  std::vector<TermPtr> arms;
  TermPtr b = u->r;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (b->op != Op::Intern) return std::nullopt;
    arms.push_back(b->l);
    b = b->r;
  }
  arms.push_back(b);
  std::set<std::string> acts;
  std::set<std::string> an;
  auto add_acts = [&an](TermPtr t) {
    for (const auto& a : visible_actions(t)) an.insert(a);
  };
  add_acts(u);
  for (TermPtr h : aux) add_acts(h);
  Plts g(std::vector<std::string>(an.begin(), an.end()));
  for (size_t i = 0; i < n; ++i) {
    Dist from = g.build(arms[i]);
    Dist to = g.build(aux[i]->l);
    if (!split_step(g, from, to, aux[i]->act, false)) return std::nullopt;
    acts.insert(aux[i]->act);
  }
  Dist dr = g.build(u->l);
  for (const auto& [s, w] : dr) {
    if (!g.stable(s)) return std::nullopt;
    for (const auto& lab : g.enabled_labels(s))
      if (!acts.count(lab)) return std::nullopt;
  }
  TermPtr out = aux.back();
  for (size_t i = n - 1; i-- > 0;) out = mk_extern(aux[i], out);
  return out;
}

std::optional<TermPtr> apply_axiom(AxiomId id, bool fwd, TermPtr u,
                                   const std::vector<TermPtr>& aux) {
  switch (id) {
    case AxiomId::P1:
      if (fwd) {
        if (u->op == Op::Prob && u->l == u->r) return u->l;
      } else if (aux.size() == 1 && aux[0]->op == Op::Prob &&
                 aux[0]->l == u && aux[0]->r == u) {
        return aux[0];
      }
      return std::nullopt;
    case AxiomId::P2:
      if (u->op == Op::Prob)
        return mk_prob(Rat(1) - u->prob, u->r, u->l);
      return std::nullopt;
    case AxiomId::P3:
      if (fwd) {
        if (u->op != Op::Prob || u->l->op != Op::Prob) return std::nullopt;
        Rat p = u->l->prob;
        Rat q = u->prob;
        return mk_prob(p * q, u->l->l,
                       mk_prob((Rat(1) - p) * q / (Rat(1) - p * q), u->l->r,
                               u->r));
      } else {
        if (u->op != Op::Prob || u->r->op != Op::Prob) return std::nullopt;
        Rat pp = u->prob;
        Rat qq = u->r->prob;
        Rat q = pp + qq * (Rat(1) - pp);
        return mk_prob(q, mk_prob(pp / q, u->l, u->r->l), u->r->r);
      }
    case AxiomId::I1:
      if (fwd) {
        if (u->op == Op::Intern && u->l == u->r) return u->l;
        return std::nullopt;
      }
      return mk_intern(u, u);
    case AxiomId::I2:
      if (u->op == Op::Intern) return mk_intern(u->r, u->l);
      return std::nullopt;
    case AxiomId::I3:
      if (fwd) {
        if (u->op == Op::Intern && u->l->op == Op::Intern)
          return mk_intern(u->l->l, mk_intern(u->l->r, u->r));
      } else {
        if (u->op == Op::Intern && u->r->op == Op::Intern)
          return mk_intern(mk_intern(u->l, u->r->l), u->r->r);
      }
      return std::nullopt;
    case AxiomId::E1:
      if (fwd) {
        if (u->op == Op::Extern && u->r->op == Op::Nil) return u->l;
        return std::nullopt;
      }
      return mk_extern(u, mk_nil());
    case AxiomId::E2:
      if (u->op == Op::Extern) return mk_extern(u->r, u->l);
      return std::nullopt;
    case AxiomId::E3:
      if (fwd) {
        if (u->op == Op::Extern && u->l->op == Op::Extern)
          return mk_extern(u->l->l, mk_extern(u->l->r, u->r));
      } else {
        if (u->op == Op::Extern && u->r->op == Op::Extern)
          return mk_extern(mk_extern(u->l, u->r->l), u->r->r);
      }
      return std::nullopt;
    case AxiomId::EI:
    case AxiomId::May0: {
      Op from = fwd ? Op::Extern : Op::Intern;
      if (u->op != from || u->l->op != Op::Prefix || u->r->op != Op::Prefix)
        return std::nullopt;
      if (id == AxiomId::EI && u->l->act != u->r->act) return std::nullopt;
      return fwd ? mk_intern(u->l, u->r) : mk_extern(u->l, u->r);
    }
    case AxiomId::D1:
      if (fwd) {
        if (u->op == Op::Extern && u->r->op == Op::Prob)
          return mk_prob(u->r->prob, mk_extern(u->l, u->r->l),
                         mk_extern(u->l, u->r->r));
      } else {
        if (u->op == Op::Prob && u->l->op == Op::Extern &&
            u->r->op == Op::Extern && u->l->l == u->r->l)
          return mk_extern(u->l->l, mk_prob(u->prob, u->l->r, u->r->r));
      }
      return std::nullopt;
    case AxiomId::D2:
      if (fwd) {
        if (u->op == Op::Extern && u->l->op == Op::Prefix &&
            u->r->op == Op::Intern)
          return mk_intern(mk_extern(u->l, u->r->l),
                           mk_extern(u->l, u->r->r));
      } else {
        if (u->op == Op::Intern && u->l->op == Op::Extern &&
            u->r->op == Op::Extern && u->l->l == u->r->l &&
            u->l->l->op == Op::Prefix)
          return mk_extern(u->l->l, mk_intern(u->l->r, u->r->r));
      }
      return std::nullopt;
    case AxiomId::D3:
      if (fwd) {
        if (u->op != Op::Extern || u->l->op != Op::Intern ||
            u->r->op != Op::Intern)
          return std::nullopt;
        TermPtr ip = u->l;
        TermPtr iq = u->r;
        return mk_intern(
            mk_extern(ip->l, iq),
            mk_intern(mk_extern(ip->r, iq),
                      mk_intern(mk_extern(ip, iq->l), mk_extern(ip, iq->r))));
      } else {
        if (u->op != Op::Intern || u->r->op != Op::Intern ||
            u->r->r->op != Op::Intern)
          return std::nullopt;
        TermPtr a = u->l;
        TermPtr b = u->r->l;
        TermPtr c = u->r->r->l;
        TermPtr d = u->r->r->r;
        if (a->op != Op::Extern || b->op != Op::Extern ||
            c->op != Op::Extern || d->op != Op::Extern)
          return std::nullopt;
        TermPtr iq = a->r;
        TermPtr ip = c->l;
        if (iq->op != Op::Intern || ip->op != Op::Intern) return std::nullopt;
        if (b->r != iq || d->l != ip) return std::nullopt;
        if (ip->l != a->l || ip->r != b->l) return std::nullopt;
        if (c->r != iq->l || d->r != iq->r) return std::nullopt;
        return mk_extern(ip, iq);
      }
    case AxiomId::May1:
      if (aux.size() == 1) return mk_intern(u, aux[0]);
      return std::nullopt;
    case AxiomId::May2:
      if (u->op == Op::Nil && aux.size() == 1) return aux[0];
      return std::nullopt;
    case AxiomId::May3:
      if (u->op == Op::Prefix && u->l->op == Op::Prob)
        return mk_prob(u->l->prob, mk_prefix(u->act, u->l->l),
                       mk_prefix(u->act, u->l->r));
      return std::nullopt;
    case AxiomId::May4:
      if (u->op == Op::Prob) return mk_intern(u->l, u->r);
      return std::nullopt;
    case AxiomId::Must1:
      if (u->op == Op::Intern) return u->r;
      return std::nullopt;
    case AxiomId::Must2:
      return apply_must2(u);
    case AxiomId::Must2P:
      return apply_must2p(u, aux);
    case AxiomId::Prob:
      if (aux.size() == 1 &&
          prob_normal_form(u) == prob_normal_form(aux[0]))
        return aux[0];
      return std::nullopt;
  }
  return std::nullopt;
}

bool licensed(Theory th, AxiomId id, bool fwd) {
  switch (id) {
    case AxiomId::May0:
      return th == Theory::May;
    case AxiomId::May1:
    case AxiomId::May2:
    case AxiomId::May3:
    case AxiomId::May4:
      return th == Theory::May && fwd;
    case AxiomId::Must1:
    case AxiomId::Must2:
    case AxiomId::Must2P:
      return th == Theory::Must && fwd;
    default:
      return true;
  }
}

struct Builder {
  Theory th;
  Derivation der;
  TermPtr cur;

  Builder(Theory th, TermPtr src) : th(th), cur(src) { der.src = src; }

  TermPtr at(const std::vector<int>& path) const {
    TermPtr u = subterm_at(cur, path);
    if (!u) throw std::logic_error("derivation: path leaves the term");
    return u;
  }

  void emit(std::vector<int> path, AxiomId id, bool fwd,
            std::vector<TermPtr> aux = {}) {
    Step s{std::move(path), id, fwd, std::move(aux)};
    auto nt = apply_step(th, cur, s);
    if (!nt) throw std::logic_error("derivation: inapplicable step emitted");
    cur = *nt;
    der.steps.push_back(std::move(s));
  }

  void emit_prob(const std::vector<int>& path, TermPtr target) {
    if (at(path) == target) return;
    emit(path, AxiomId::Prob, true, {target});
  }

  void replay(const Derivation& d) {
    for (const Step& s : d.steps) emit(s.path, s.id, s.forward, s.aux);
  }

  Derivation take() {
    der.dst = cur;
    return std::move(der);
  }
};

void box_merge(Builder& b, const std::vector<int>& path) {
  TermPtr u = b.at(path);
  if (u->r->op == Op::Prob) {
    b.emit(path, AxiomId::D1, true);
    box_merge(b, down(path, 0));
    box_merge(b, down(path, 1));
    return;
  }
  if (u->l->op == Op::Prob) {
    b.emit(path, AxiomId::E2, true);
    box_merge(b, path);
    return;
  }
  if (u->r->op == Op::Nil) {
    b.emit(path, AxiomId::E1, true);
    return;
  }
  if (u->l->op == Op::Nil) {
    b.emit(path, AxiomId::E2, true);
    b.emit(path, AxiomId::E1, true);
    return;
  }
  if (u->l->op == Op::Intern && u->r->op == Op::Intern) {
    b.emit(path, AxiomId::D3, true);
    box_merge(b, down(path, 0));
    box_merge(b, down(down(path, 1), 0));
    box_merge(b, down(down(down(path, 1), 1), 0));
    box_merge(b, down(down(down(path, 1), 1), 1));
    return;
  }
  if (u->l->op == Op::Intern) {
    b.emit(path, AxiomId::E2, true);
    box_merge(b, path);
    return;
  }
  if (u->l->op == Op::Extern) {
    b.emit(path, AxiomId::E3, true);
    box_merge(b, down(path, 1));
    box_merge(b, path);
    return;
  }
  if (u->r->op == Op::Intern) {
    b.emit(path, AxiomId::D2, true);
    box_merge(b, down(path, 0));
    box_merge(b, down(path, 1));
    return;
  }
}

Derivation comb_sort(TermPtr comb);

void sort_boxes(Builder& b, const std::vector<int>& path) {
  TermPtr t = b.at(path);
  if (t->op == Op::Prob || t->op == Op::Intern) {
    sort_boxes(b, down(path, 0));
    sort_boxes(b, down(path, 1));
    return;
  }
  Derivation ds = comb_sort(t);
  for (const Step& s : ds.steps)
    b.emit(cat(path, s.path), s.id, s.forward, s.aux);
}

void nf_rec(Builder& b, const std::vector<int>& path) {
  TermPtr t = b.at(path);
  switch (t->op) {
    case Op::Nil:
      return;
    case Op::Prefix:
      nf_rec(b, down(path, 0));
      return;
    case Op::Intern:
    case Op::Prob:
      nf_rec(b, down(path, 0));
      nf_rec(b, down(path, 1));
      return;
    case Op::Extern:
      nf_rec(b, down(path, 0));
      nf_rec(b, down(path, 1));
      box_merge(b, path);
      sort_boxes(b, path);
      return;
    case Op::Par:
      throw std::invalid_argument(
          "normal_form: parallel composition has no normal form");
  }
}

// Replays an equational derivation backwards.
Derivation reverse_eq(const Derivation& d) {
  TermPtr cur = d.src;
  std::vector<Step> rev;
  for (const Step& s : d.steps) {
    TermPtr pre = subterm_at(cur, s.path);
    auto nt = apply_step(Theory::Eq, cur, s);
    if (!pre || !nt)
      throw std::logic_error("reverse: not an equational derivation");
    Step r{s.path, s.id, !s.forward, s.aux};
    if (s.id == AxiomId::Prob || s.id == AxiomId::P1) r.aux = {pre};
    rev.push_back(std::move(r));
    cur = *nt;
  }
  Derivation out;
  out.src = d.dst;
  out.dst = d.src;
  out.steps.assign(rev.rbegin(), rev.rend());
  return out;
}

TermPtr term_of(const Plts& g, const Dist& d) {
  Rat m = dist_mass(d);
  if (m == 0) throw std::logic_error("term_of: empty distribution");
  std::vector<std::pair<Rat, TermPtr>> parts;
  for (const auto& [s, w] : d) parts.emplace_back(w / m, g.state(s));
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& c) {
    return term_cmp(a.second, c.second) < 0;
  });
  return prob_comb(parts);
}

std::vector<TermPtr> comb_leaves(TermPtr u) {
  std::vector<TermPtr> out;
  while (u->op == Op::Extern) {
    out.push_back(u->l);
    u = u->r;
  }
  if (u->op != Op::Nil) out.push_back(u);
  return out;
}

// Sorts a box comb's leaves by the structural order using adjacent swaps.
Derivation comb_sort(TermPtr comb) {
  Builder b(Theory::Eq, comb);
  std::vector<TermPtr> leaves = comb_leaves(comb);
  size_t m = leaves.size();
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t j = 0; j + 1 < m; ++j) {
      if (term_cmp(leaves[j], leaves[j + 1]) <= 0) continue;
      std::vector<int> p(j, 1);
      if (j + 2 == m) {
        b.emit(p, AxiomId::E2, true);
      } else {
        b.emit(p, AxiomId::E3, false);
        b.emit(down(p, 0), AxiomId::E2, true);
        b.emit(p, AxiomId::E3, true);
      }
      std::swap(leaves[j], leaves[j + 1]);
      moved = true;
    }
  }
  return b.take();
}

void comb_reshape(Builder& b, const std::vector<int>& path, TermPtr target) {
  TermPtr cur = b.at(path);
  if (cur == target) return;
  Derivation ds = comb_sort(cur);
  Derivation dt = comb_sort(target);
  if (ds.dst != dt.dst)
    throw std::logic_error("comb reshape: different leaf multisets");
  for (const Step& s : ds.steps) b.emit(cat(path, s.path), s.id, s.forward, s.aux);
  Derivation rt = reverse_eq(dt);
  for (const Step& s : rt.steps) b.emit(cat(path, s.path), s.id, s.forward, s.aux);
}

std::vector<StepSplit::Part> split_rows(Plts& g, const Dist& from,
                                        const Dist& to,
                                        const std::string& label,
                                        bool allow_idle) {
  auto sp = split_step(g, from, to, label, allow_idle);
  if (!sp) throw std::logic_error("derivative chain step does not split");
  std::vector<StepSplit::Part> rows;
  for (auto& p : sp->parts)
    if (p.weight > 0) rows.push_back(std::move(p));
  return rows;
}

// Rewrites term_of(dists.back()) into term_of(dists.front()) against the
// hat-tau chain, upward in the may order: an internal choice rejoins its
// source by May1.
void dl_tau_may_rev(Builder& b, const std::vector<int>& path, Plts& g,
                    const std::vector<Dist>& dists) {
  for (size_t k = dists.size() - 1; k-- > 0;) {
    const Dist& from = dists[k];
    const Dist& to = dists[k + 1];
    if (from == to) continue;
    auto rows = split_rows(g, from, to, "", true);
    size_t n = rows.size();
    Rat m = dist_mass(from);
    std::vector<std::pair<Rat, TermPtr>> parts;
    for (const auto& r : rows)
      parts.emplace_back(r.weight / m,
                         r.idle ? g.state(r.state) : term_of(g, r.target));
    b.emit_prob(path, prob_comb(parts));
    for (size_t j = 0; j < n; ++j) {
      const auto& r = rows[j];
      if (r.idle) continue;
      auto ap = spine_path(path, j, n);
      TermPtr u = g.state(r.state);
      if (u->op != Op::Intern)
        throw std::logic_error("internal step from a non-choice state");
      if (r.target == g.interp(u->l)) {
        b.emit_prob(ap, u->l);
        b.emit(ap, AxiomId::May1, true, {u->r});
      } else if (r.target == g.interp(u->r)) {
        b.emit_prob(ap, u->r);
        b.emit(ap, AxiomId::May1, true, {u->l});
        b.emit(ap, AxiomId::I2, true);
      } else {
        throw std::logic_error("internal step target matches neither arm");
      }
    }
    b.emit_prob(path, term_of(g, from));
  }
}

// Rewrites term_of(dists.front()) into term_of(dists.back()), downward in
// the must order: an internal choice commits by Must1.
void dl_tau_must(Builder& b, const std::vector<int>& path, Plts& g,
                 const std::vector<Dist>& dists) {
  for (size_t k = 0; k + 1 < dists.size(); ++k) {
    const Dist& from = dists[k];
    const Dist& to = dists[k + 1];
    if (from == to) continue;
    auto rows = split_rows(g, from, to, "", true);
    size_t n = rows.size();
    Rat m = dist_mass(from);
    std::vector<std::pair<Rat, TermPtr>> parts;
    for (const auto& r : rows) parts.emplace_back(r.weight / m, g.state(r.state));
    b.emit_prob(path, prob_comb(parts));
    for (size_t j = 0; j < n; ++j) {
      const auto& r = rows[j];
      if (r.idle) continue;
      auto ap = spine_path(path, j, n);
      TermPtr u = g.state(r.state);
      if (u->op != Op::Intern)
        throw std::logic_error("internal step from a non-choice state");
      if (r.target == g.interp(u->l)) {
        b.emit(ap, AxiomId::I2, true);
        b.emit(ap, AxiomId::Must1, true);
      } else if (r.target == g.interp(u->r)) {
        b.emit(ap, AxiomId::Must1, true);
      } else {
        throw std::logic_error("internal step target matches neither arm");
      }
      b.emit_prob(ap, term_of(g, r.target));
    }
    b.emit_prob(path, term_of(g, to));
  }
}

// Rewrites act.term_of(to) into term_of(from) against the strong lifted step
// from -act-> to: the combination splits under the prefix (May3), and each
// moving state re-exposes its chosen branch inside its box (May2).
void dl_strong_may(Builder& b, const std::vector<int>& path, Plts& g,
                   const std::string& act, const Dist& from, const Dist& to) {
  auto rows = split_rows(g, from, to, act, false);
  size_t n = rows.size();
  Rat m = dist_mass(from);
  std::vector<std::pair<Rat, TermPtr>> parts;
  for (const auto& r : rows) parts.emplace_back(r.weight / m, term_of(g, r.target));
  b.emit_prob(down(path, 0), prob_comb(parts));
  for (size_t j = 0; j + 1 < n; ++j) {
    std::vector<int> p = path;
    for (size_t k = 0; k < j; ++k) p.push_back(1);
    b.emit(p, AxiomId::May3, true);
  }
  for (size_t j = 0; j < n; ++j) {
    const auto& r = rows[j];
    auto ap = spine_path(path, j, n);
    TermPtr u = g.state(r.state);
    std::vector<TermPtr> leaves = comb_leaves(u);
    int li = -1;
    for (size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i]->op == Op::Prefix && leaves[i]->act == act &&
          g.interp(leaves[i]->l) == r.target) {
        li = static_cast<int>(i);
        break;
      }
    }
    if (li < 0) throw std::logic_error("strong step leaf not found");
    b.emit_prob(down(ap, 0), leaves[li]->l);
    if (leaves.size() == 1) continue;
    b.emit(ap, AxiomId::E1, false);
    std::vector<TermPtr> rest;
    for (size_t i = 0; i < leaves.size(); ++i)
      if (static_cast<int>(i) != li) rest.push_back(leaves[i]);
    TermPtr rc = rest.back();
    for (size_t i = rest.size() - 1; i-- > 0;) rc = mk_extern(rest[i], rc);
    b.emit(down(ap, 1), AxiomId::May2, true, {rc});
    comb_reshape(b, ap, u);
  }
  b.emit_prob(path, term_of(g, from));
}

const SatWitness* conjunct_witness(const SatWitness& w, FormulaPtr want) {
  if (w.f == want) return &w;
  if (w.f->op == FOp::Conj)
    for (size_t i = 0; i < w.f->kids.size(); ++i)
      if (w.f->kids[i] == want) return &w.kids[i];
  return nullptr;
}

const SatWitness& need_conjunct(const SatWitness& w, FormulaPtr want) {
  const SatWitness* k = conjunct_witness(w, want);
  if (!k) throw std::logic_error("conjunct witness missing");
  return *k;
}

void state_leq_may(Builder& b, const std::vector<int>& path, Plts& g, int s,
                   const SatWitness& w);

// w satisfies the characteristic formula of interp(a); rewrites the term a
// at path into term_of(w.delta).
void dist_leq_term_may(Builder& b, const std::vector<int>& path, Plts& g,
                       TermPtr a, const SatWitness& w) {
  Dist da = g.interp(a);
  FormulaPtr f = w.f;
  if (f->op != FOp::Prob || f->kids.size() != da.size())
    throw std::logic_error("witness does not match the support");
  size_t n = f->kids.size();
  std::vector<int> sts;
  for (const auto& [s, p] : da) sts.push_back(s);
  std::vector<std::pair<Rat, TermPtr>> arms;
  for (size_t i = 0; i < n; ++i)
    arms.emplace_back(f->weights[i], g.state(sts[i]));
  b.emit_prob(path, prob_comb(arms));
  for (size_t i = 0; i < n; ++i)
    state_leq_may(b, spine_path(path, i, n), g, sts[i], w.kids[i]);
  b.emit_prob(path, term_of(g, w.chain.dists.back()));
  dl_tau_may_rev(b, path, g, w.chain.dists);
}

// Diamond witness for the prefix at path; rewrites it into term_of(wd.delta).
void prefix_leq_may(Builder& b, const std::vector<int>& path, Plts& g,
                    const SatWitness& wd) {
  TermPtr u = b.at(path);
  dist_leq_term_may(b, down(path, 0), g, u->l, wd.kids[0]);
  const auto& ds = wd.chain.dists;
  int j = wd.chain.amark;
  if (j < 0) throw std::logic_error("diamond witness lacks its strong step");
  dl_tau_may_rev(b, down(path, 0), g,
                 std::vector<Dist>(ds.begin() + j + 1, ds.end()));
  dl_strong_may(b, path, g, u->act, ds[j], ds[j + 1]);
  dl_tau_may_rev(b, path, g, std::vector<Dist>(ds.begin(), ds.begin() + j + 1));
}

// Turns a box comb into a tree of internal choices over its prefixes.
void dist_prefix_tree(Builder& b, const std::vector<int>& path) {
  TermPtr u = b.at(path);
  if (u->r->op == Op::Prefix) {
    b.emit(path, AxiomId::May0, true);
    return;
  }
  b.emit(path, AxiomId::D2, true);
  dist_prefix_tree(b, down(path, 0));
  dist_prefix_tree(b, down(path, 1));
}

void box_to_tree(Builder& b, const std::vector<int>& path) {
  if (b.at(path)->op != Op::Extern) return;
  box_to_tree(b, down(path, 1));
  dist_prefix_tree(b, path);
}

void tree_collapse_may(Builder& b, const std::vector<int>& path, Plts& g,
                       const SatWitness& w) {
  TermPtr u = b.at(path);
  if (u->op == Op::Intern) {
    tree_collapse_may(b, down(path, 0), g, w);
    tree_collapse_may(b, down(path, 1), g, w);
    b.emit(path, AxiomId::I1, true);
    return;
  }
  FormulaPtr fd =
      f_diamond(u->act, char_formula(g, g.interp(u->l), Logic::L));
  prefix_leq_may(b, path, g, need_conjunct(w, fd));
}

void state_leq_may(Builder& b, const std::vector<int>& path, Plts& g, int s,
                   const SatWitness& w) {
  TermPtr u = g.state(s);
  if (u->op == Op::Intern) {
    dist_leq_term_may(
        b, down(path, 0), g, u->l,
        need_conjunct(w, char_formula(g, g.interp(u->l), Logic::L)));
    dist_leq_term_may(
        b, down(path, 1), g, u->r,
        need_conjunct(w, char_formula(g, g.interp(u->r), Logic::L)));
    b.emit(path, AxiomId::I1, true);
    return;
  }
  if (u->op == Op::Nil) {
    TermPtr goal = term_of(g, w.delta);
    if (goal != u) b.emit(path, AxiomId::May2, true, {goal});
    return;
  }
  box_to_tree(b, path);
  tree_collapse_may(b, path, g, w);
}

void state_leq_must(Builder& b, const std::vector<int>& path, Plts& g,
                    const SatWitness& w, int s);

// w satisfies the characteristic formula of interp(target); rewrites
// term_of(w.delta) at path into target.
void dist_leq_term_must(Builder& b, const std::vector<int>& path, Plts& g,
                        const SatWitness& w, TermPtr target) {
  Dist dt = g.interp(target);
  FormulaPtr f = w.f;
  if (f->op != FOp::Prob || f->kids.size() != dt.size())
    throw std::logic_error("witness does not match the support");
  size_t n = f->kids.size();
  std::vector<int> sts;
  for (const auto& [s, p] : dt) sts.push_back(s);
  dl_tau_must(b, path, g, w.chain.dists);
  std::vector<std::pair<Rat, TermPtr>> arms;
  for (size_t i = 0; i < n; ++i)
    arms.emplace_back(f->weights[i], term_of(g, w.kids[i].delta));
  b.emit_prob(path, prob_comb(arms));
  for (size_t i = 0; i < n; ++i)
    state_leq_must(b, spine_path(path, i, n), g, w.kids[i], sts[i]);
  b.emit_prob(path, target);
}

void state_leq_must(Builder& b, const std::vector<int>& path, Plts& g,
                    const SatWitness& w, int s) {
  TermPtr u = g.state(s);
  if (u->op == Op::Intern) {
    const SatWitness& wl =
        need_conjunct(w, char_formula(g, g.interp(u->l), Logic::F));
    const SatWitness& wr =
        need_conjunct(w, char_formula(g, g.interp(u->r), Logic::F));
    b.emit(path, AxiomId::I1, false);
    dist_leq_term_must(b, down(path, 0), g, wl, u->l);
    dist_leq_term_must(b, down(path, 1), g, wr, u->r);
    return;
  }
  std::vector<TermPtr> leaves = comb_leaves(u);
  size_t m = leaves.size();
  const SatWitness& wref =
      need_conjunct(w, f_ref(g.maximal_refusal(s)));
  if (m == 0) {
    dl_tau_must(b, path, g, wref.chain.dists);
    if (b.at(path) != u)
      throw std::logic_error("refusal derivative is not inert");
    return;
  }
  for (size_t i = 0; i < m; ++i) {
    std::vector<int> p = path;
    for (size_t k = 0; k < i; ++k) p.push_back(1);
    b.emit(p, AxiomId::I1, false);
  }
  dl_tau_must(b, spine_path(path, 0, m + 1), g, wref.chain.dists);
  std::vector<const SatWitness*> wd(m);
  std::vector<TermPtr> heads(m);
  for (size_t i = 0; i < m; ++i) {
    FormulaPtr fd =
        f_diamond(leaves[i]->act, char_formula(g, g.interp(leaves[i]->l), Logic::F));
    wd[i] = &need_conjunct(w, fd);
    const auto& ds = wd[i]->chain.dists;
    int j = wd[i]->chain.amark;
    if (j < 0) throw std::logic_error("diamond witness lacks its strong step");
    dl_tau_must(b, spine_path(path, i + 1, m + 1), g,
                std::vector<Dist>(ds.begin(), ds.begin() + j + 1));
    heads[i] = mk_prefix(leaves[i]->act, term_of(g, ds[j + 1]));
  }
  b.emit(path, AxiomId::Must2P, true, heads);
  for (size_t i = 0; i < m; ++i) {
    auto ap = spine_path(path, i, m);
    const auto& ds = wd[i]->chain.dists;
    int j = wd[i]->chain.amark;
    dl_tau_must(b, down(ap, 0), g,
                std::vector<Dist>(ds.begin() + j + 1, ds.end()));
    dist_leq_term_must(b, down(ap, 0), g, wd[i]->kids[0], leaves[i]->l);
  }
  if (b.at(path) != u) throw std::logic_error("box reassembly mismatch");
}

Plts union_graph(TermPtr p, TermPtr q) {
  std::set<std::string> acts;
  for (const auto& a : visible_actions(p)) acts.insert(a);
  for (const auto& a : visible_actions(q)) acts.insert(a);
  return Plts(std::vector<std::string>(acts.begin(), acts.end()));
}

std::optional<Derivation> synth_eq(TermPtr p, TermPtr q) {
  Derivation dp = normal_form(p);
  Derivation dq = normal_form(q);
  if (prob_normal_form(dp.dst) != prob_normal_form(dq.dst))
    return std::nullopt;
  Builder b(Theory::Eq, p);
  b.replay(dp);
  b.emit_prob({}, dq.dst);
  b.replay(reverse_eq(dq));
  return b.take();
}

std::optional<Derivation> synth_may(TermPtr p, TermPtr q) {
  if (!sim_leq(p, q)) return std::nullopt;
  Derivation dp = normal_form(p);
  Derivation dq = normal_form(q);
  Plts g = union_graph(p, q);
  Dist dnp = g.build(dp.dst);
  Dist dnq = g.build(dq.dst);
  auto w = sat(g, dnq, char_formula(g, dnp, Logic::L));
  if (!w) throw std::logic_error("order holds but witness search failed");
  Builder b(Theory::May, p);
  b.replay(dp);
  dist_leq_term_may(b, {}, g, dp.dst, *w);
  b.emit_prob({}, dq.dst);
  b.replay(reverse_eq(dq));
  Derivation out = b.take();
  if (out.dst != q) throw std::logic_error("synthesis missed its target");
  return out;
}

std::optional<Derivation> synth_must(TermPtr p, TermPtr q) {
  if (!fsim_leq(p, q)) return std::nullopt;
  Derivation dp = normal_form(p);
  Derivation dq = normal_form(q);
  Plts g = union_graph(p, q);
  Dist dnp = g.build(dp.dst);
  Dist dnq = g.build(dq.dst);
  auto w = sat(g, dnp, char_formula(g, dnq, Logic::F));
  if (!w) throw std::logic_error("order holds but witness search failed");
  Builder b(Theory::Must, p);
  b.replay(dp);
  b.emit_prob({}, term_of(g, dnp));
  dist_leq_term_must(b, {}, g, *w, dq.dst);
  b.emit_prob({}, dq.dst);
  b.replay(reverse_eq(dq));
  Derivation out = b.take();
  if (out.dst != q) throw std::logic_error("synthesis missed its target");
  return out;
}

}  // namespace

const char* axiom_name(AxiomId id) {
  switch (id) {
    case AxiomId::P1:
      return "P1";
    case AxiomId::P2:
      return "P2";
    case AxiomId::P3:
      return "P3";
    case AxiomId::I1:
      return "I1";
    case AxiomId::I2:
      return "I2";
    case AxiomId::I3:
      return "I3";
    case AxiomId::E1:
      return "E1";
    case AxiomId::E2:
      return "E2";
    case AxiomId::E3:
      return "E3";
    case AxiomId::EI:
      return "EI";
    case AxiomId::D1:
      return "D1";
    case AxiomId::D2:
      return "D2";
    case AxiomId::D3:
      return "D3";
    case AxiomId::May0:
      return "May0";
    case AxiomId::May1:
      return "May1";
    case AxiomId::May2:
      return "May2";
    case AxiomId::May3:
      return "May3";
    case AxiomId::May4:
      return "May4";
    case AxiomId::Must1:
      return "Must1";
    case AxiomId::Must2:
      return "Must2";
    case AxiomId::Must2P:
      return "Must2'";
    case AxiomId::Prob:
      return "prob";
  }
  return "?";
}

std::optional<AxiomId> axiom_by_name(const std::string& name) {
  static const std::pair<const char*, AxiomId> table[] = {
      {"P1", AxiomId::P1},         {"P2", AxiomId::P2},
      {"P3", AxiomId::P3},         {"I1", AxiomId::I1},
      {"I2", AxiomId::I2},         {"I3", AxiomId::I3},
      {"E1", AxiomId::E1},         {"E2", AxiomId::E2},
      {"E3", AxiomId::E3},         {"EI", AxiomId::EI},
      {"D1", AxiomId::D1},         {"D2", AxiomId::D2},
      {"D3", AxiomId::D3},         {"May0", AxiomId::May0},
      {"May1", AxiomId::May1},     {"May2", AxiomId::May2},
      {"May3", AxiomId::May3},     {"May4", AxiomId::May4},
      {"Must1", AxiomId::Must1},   {"Must2", AxiomId::Must2},
      {"Must2'", AxiomId::Must2P}, {"Must2P", AxiomId::Must2P},
      {"prob", AxiomId::Prob},
  };
  for (const auto& [n, id] : table)
    if (name == n) return id;
  return std::nullopt;
}

std::vector<std::string> inits(TermPtr t) {
  auto s = inits_set(t);
  return {s.begin(), s.end()};
}

TermPtr prob_normal_form(TermPtr t) {
  std::map<TermPtr, Rat, TermLess> d;
  tdist_add(d, Rat(1), desugar(t));
  std::vector<std::pair<Rat, TermPtr>> parts;
  for (const auto& [s, w] : d) parts.emplace_back(w, s);
  return prob_comb(parts);
}

bool is_normal_form(TermPtr t) { return is_nf(t); }

Derivation normal_form(TermPtr t) {
  Builder b(Theory::Eq, t);
  nf_rec(b, {});
  return b.take();
}

std::optional<TermPtr> apply_step(Theory th, TermPtr t, const Step& s) {
  if (!licensed(th, s.id, s.forward)) return std::nullopt;
  TermPtr u = subterm_at(t, s.path);
  if (!u) return std::nullopt;
  auto nu = apply_axiom(s.id, s.forward, u, s.aux);
  if (!nu) return std::nullopt;
  return rebuild(t, s.path, 0, *nu);
}

bool check_derivation(Theory th, const Derivation& d) {
  if (!d.src || !d.dst) return false;
  TermPtr cur = d.src;
  for (const Step& s : d.steps) {
    auto nt = apply_step(th, cur, s);
    if (!nt) return false;
    cur = *nt;
  }
  return cur == d.dst;
}

std::optional<Derivation> synth_derivation(Theory th, TermPtr p, TermPtr q) {
  if (has_par(p) || has_par(q))
    throw std::invalid_argument("synth_derivation: parallel-free terms only");
  if (classify(p).cls != TermClass::Process ||
      classify(q).cls != TermClass::Process)
    throw std::invalid_argument("synth_derivation: processes only");
  switch (th) {
    case Theory::Eq:
      return synth_eq(p, q);
    case Theory::May:
      return synth_may(p, q);
    case Theory::Must:
      return synth_must(p, q);
  }
  return std::nullopt;
}

}  // namespace pcsp
