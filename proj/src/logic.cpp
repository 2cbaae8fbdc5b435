#include "pcsp/logic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace pcsp {

namespace {

std::deque<Formula>& arena() {
  static std::deque<Formula> a;
  return a;
}

std::unordered_map<std::string, FormulaPtr>& table() {
  static std::unordered_map<std::string, FormulaPtr> t;
  return t;
}

std::string ptr_key(FormulaPtr p) {
  return std::to_string(reinterpret_cast<uintptr_t>(p));
}

FormulaPtr intern(Formula node, const std::string& key) {
  auto& tab = table();
  if (auto it = tab.find(key); it != tab.end()) return it->second;
  arena().push_back(std::move(node));
  FormulaPtr p = &arena().back();
  tab.emplace(key, p);
  return p;
}

void require_action(const std::string& a) {
  if (a.empty() || a == "tau" || is_success_action(a))
    throw std::runtime_error("bad formula action: " + a);
}

}  // namespace

FormulaPtr f_top() { return f_conj({}); }

FormulaPtr f_ref(std::vector<std::string> x) {
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::string acts;
  for (const auto& a : x) {
    require_action(a);
    acts += a + ",";
  }
  Formula n;
  n.op = FOp::Ref;
  n.refusal = std::move(x);
  return intern(std::move(n), "r{" + acts + "}");
}

FormulaPtr f_diamond(const std::string& a, FormulaPtr body) {
  require_action(a);
  Formula n;
  n.op = FOp::Diamond;
  n.act = a;
  n.kids = {body};
  return intern(std::move(n), "d" + a + ">" + ptr_key(body));
}

FormulaPtr f_conj(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> uniq;
  for (FormulaPtr k : kids)
    if (std::find(uniq.begin(), uniq.end(), k) == uniq.end()) uniq.push_back(k);
  if (uniq.size() == 1) return uniq[0];
  std::string key = "c";
  for (FormulaPtr k : uniq) key += ptr_key(k) + ",";
  Formula n;
  n.op = FOp::Conj;
  n.kids = std::move(uniq);
  return intern(std::move(n), key);
}

FormulaPtr f_prob(std::vector<Rat> weights, std::vector<FormulaPtr> kids) {
  if (kids.empty() || kids.size() != weights.size())
    throw std::runtime_error("probabilistic combination needs matching parts");
  Rat sum = 0;
  for (const Rat& w : weights) {
    if (w < 0 || w > 1)
      throw std::runtime_error("formula weight outside [0,1]: " + rat_str(w));
    sum += w;
  }
  if (sum != 1) throw std::runtime_error("formula weights must sum to 1");
  std::string key = "q";
  for (size_t i = 0; i < kids.size(); ++i)
    key += rat_str(weights[i]) + "*" + ptr_key(kids[i]) + ",";
  Formula n;
  n.op = FOp::Prob;
  n.kids = std::move(kids);
  n.weights = std::move(weights);
  return intern(std::move(n), key);
}

bool ref_free(FormulaPtr f) {
  if (f->op == FOp::Ref) return false;
  for (FormulaPtr k : f->kids)
    if (!ref_free(k)) return false;
  return true;
}

namespace {

void fmt(FormulaPtr f, std::string& out, bool as_atom) {
  switch (f->op) {
    case FOp::Ref: {
      out += "ref{";
      for (size_t i = 0; i < f->refusal.size(); ++i) {
        if (i) out += ",";
        out += f->refusal[i];
      }
      out += "}";
      return;
    }
    case FOp::Diamond:
      out += "<" + f->act + ">";
      fmt(f->kids[0], out, true);
      return;
    case FOp::Conj: {
      if (f->kids.empty()) {
        out += "true";
        return;
      }
      if (as_atom) out += "(";
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) out += " & ";
        fmt(f->kids[i], out, true);
      }
      if (as_atom) out += ")";
      return;
    }
    case FOp::Prob: {
      if (as_atom) out += "(";
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) out += " (+) ";
        out += rat_str(f->weights[i]) + "*";
        fmt(f->kids[i], out, true);
      }
      if (as_atom) out += ")";
      return;
    }
  }
}

}  // namespace

std::string formula_str(FormulaPtr f) {
  std::string out;
  fmt(f, out, false);
  return out;
}

namespace {

enum class FTok {
  Name,
  Num,
  LBrace,
  RBrace,
  Comma,
  Lt,
  Gt,
  Amp,
  Star,
  OPlus,
  LParen,
  RParen,
  End
};

struct FToken {
  FTok kind;
  std::string text;
  size_t pos;
};

std::vector<FToken> flex(const std::string& s) {
  std::vector<FToken> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t pos = i;
    if (s.compare(i, 3, "(+)") == 0) {
      out.push_back({FTok::OPlus, "(+)", pos});
      i += 3;
    } else if (c == '(') {
      out.push_back({FTok::LParen, "(", pos});
      ++i;
    } else if (c == ')') {
      out.push_back({FTok::RParen, ")", pos});
      ++i;
    } else if (c == '{') {
      out.push_back({FTok::LBrace, "{", pos});
      ++i;
    } else if (c == '}') {
      out.push_back({FTok::RBrace, "}", pos});
      ++i;
    } else if (c == ',') {
      out.push_back({FTok::Comma, ",", pos});
      ++i;
    } else if (c == '<') {
      out.push_back({FTok::Lt, "<", pos});
      ++i;
    } else if (c == '>') {
      out.push_back({FTok::Gt, ">", pos});
      ++i;
    } else if (c == '&') {
      out.push_back({FTok::Amp, "&", pos});
      ++i;
    } else if (c == '*') {
      out.push_back({FTok::Star, "*", pos});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      if (j < s.size() && (s[j] == '/' || s[j] == '.') && j + 1 < s.size() &&
          std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
          ++j;
      }
      out.push_back({FTok::Num, s.substr(i, j - i), pos});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                              s[j] == '_'))
        ++j;
      out.push_back({FTok::Name, s.substr(i, j - i), pos});
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({FTok::End, "", s.size()});
  return out;
}

struct FParser {
  std::vector<FToken> toks;
  size_t i = 0;

  const FToken& peek() const { return toks[i]; }
  FToken take() { return toks[i++]; }
  void expect(FTok k, const char* what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what, peek().pos);
    ++i;
  }

  std::string action() {
    if (peek().kind != FTok::Name)
      throw ParseError("expected action name", peek().pos);
    FToken n = take();
    if (n.text == "tau")
      throw ParseError("tau is not a writable action", n.pos);
    if (is_success_action(n.text))
      throw ParseError("success action in formula", n.pos);
    return n.text;
  }

  FormulaPtr atom() {
    const FToken& t = peek();
    if (t.kind == FTok::Name && t.text == "true") {
      ++i;
      return f_top();
    }
    if (t.kind == FTok::Name && t.text == "ref") {
      ++i;
      expect(FTok::LBrace, "{");
      std::vector<std::string> acts;
      if (peek().kind != FTok::RBrace) {
        while (true) {
          acts.push_back(action());
          if (peek().kind == FTok::Comma) {
            ++i;
            continue;
          }
          break;
        }
      }
      expect(FTok::RBrace, "}");
      return f_ref(std::move(acts));
    }
    if (t.kind == FTok::Lt) {
      ++i;
      std::string a = action();
      expect(FTok::Gt, ">");
      return f_diamond(a, atom());
    }
    if (t.kind == FTok::LParen) {
      ++i;
      FormulaPtr inner = formula();
      expect(FTok::RParen, ")");
      return inner;
    }
    throw ParseError("expected a formula", t.pos);
  }

  FormulaPtr formula() {
    if (peek().kind == FTok::Num) {
      std::vector<Rat> ws;
      std::vector<FormulaPtr> kids;
      Rat sum = 0;
      while (true) {
        FToken n = take();
        auto w = rat_parse(n.text);
        if (!w || *w < 0 || *w > 1)
          throw ParseError("weight outside [0,1]", n.pos);
        expect(FTok::Star, "*");
        ws.push_back(*w);
        sum += *w;
        kids.push_back(atom());
        if (peek().kind == FTok::OPlus) {
          ++i;
          if (peek().kind != FTok::Num)
            throw ParseError("expected weight", peek().pos);
          continue;
        }
        break;
      }
      if (sum != 1)
        throw ParseError("weights must sum to 1", peek().pos);
      return f_prob(std::move(ws), std::move(kids));
    }
    std::vector<FormulaPtr> kids{atom()};
    while (peek().kind == FTok::Amp) {
      ++i;
      kids.push_back(atom());
    }
    return f_conj(std::move(kids));
  }
};

}  // namespace

FormulaPtr formula_parse(const std::string& text) {
  FParser p{flex(text)};
  FormulaPtr f = p.formula();
  if (p.peek().kind != FTok::End)
    throw ParseError("trailing input", p.peek().pos);
  return f;
}

namespace {

// One linear program decides satisfaction.  Each formula node speaks for a
// subdistribution over a local support; its per-state masses are affine
// expressions over the genuine unknowns, the vertex weights of weak moves
// and the splits at probability nodes.  Everything definable is substituted
// away rather than given a variable and a row.
struct Aff {
  std::map<int, Rat> lin;
  Rat c;
};

Aff aff_var(int v) { return {{{v, rat(1)}}, rat(0)}; }

void aff_acc(Aff& into, const Rat& w, const Aff& a) {
  for (const auto& [v, q] : a.lin) into.lin[v] += w * q;
  into.c += w * a.c;
}

struct SatCtx {
  Plts& g;
  LinSys sys;
};

// expr == 0 as a system row.
void add_zero(SatCtx& c, Aff e) {
  c.sys.add_row(std::move(e.lin), -e.c);
}

struct NodePlan {
  FormulaPtr f = nullptr;
  std::vector<int> sts;
  std::vector<Aff> x;
  std::vector<const DistPolytope*> polys;
  std::vector<std::tuple<int, int, int>> move;  // local state, vertex, var
  std::vector<std::unique_ptr<NodePlan>> kids;
};

// Vertex weights for a weak move of every state's mass, label "" for an
// internal move.  Yields the support and masses of the combined end point.
void move_block(SatCtx& c, NodePlan& p, const std::string& a,
                std::vector<int>& tsts, std::vector<Aff>& y) {
  size_t ns = p.sts.size();
  p.polys.assign(ns, nullptr);
  std::map<int, Aff> flow;
  for (size_t u = 0; u < ns; ++u) {
    const DistPolytope& poly =
        a.empty() ? c.g.dtau(p.sts[u]) : c.g.dhat(p.sts[u], a);
    p.polys[u] = &poly;
    Aff row;
    aff_acc(row, rat(-1), p.x[u]);
    for (size_t k = 0; k < poly.verts.size(); ++k) {
      int var = c.sys.new_var();
      p.move.emplace_back(static_cast<int>(u), static_cast<int>(k), var);
      row.lin[var] += 1;
      for (const auto& [t, q] : poly.verts[k]) aff_acc(flow[t], q, aff_var(var));
    }
    add_zero(c, std::move(row));
  }
  tsts.clear();
  y.clear();
  for (auto& [t, e] : flow) {
    tsts.push_back(t);
    y.push_back(std::move(e));
  }
}

std::unique_ptr<NodePlan> plan(SatCtx& c, FormulaPtr f, std::vector<int> sts,
                               std::vector<Aff> x) {
  auto p = std::make_unique<NodePlan>();
  p->f = f;
  p->sts = std::move(sts);
  p->x = std::move(x);
  switch (f->op) {
    case FOp::Ref: {
      const auto& act = c.g.alphabet();
      for (const auto& a : f->refusal)
        if (std::find(act.begin(), act.end(), a) == act.end())
          throw std::runtime_error("formula action outside alphabet: " + a);
      for (size_t u = 0; u < p->sts.size(); ++u)
        if (!c.g.cwr(p->sts[u], f->refusal)) add_zero(c, p->x[u]);
      break;
    }
    case FOp::Diamond: {
      const auto& act = c.g.alphabet();
      if (std::find(act.begin(), act.end(), f->act) == act.end())
        throw std::runtime_error("formula action outside alphabet: " + f->act);
      std::vector<int> tsts;
      std::vector<Aff> y;
      move_block(c, *p, f->act, tsts, y);
      p->kids.push_back(plan(c, f->kids[0], std::move(tsts), std::move(y)));
      break;
    }
    case FOp::Conj:
      for (FormulaPtr k : f->kids) p->kids.push_back(plan(c, k, p->sts, p->x));
      break;
    case FOp::Prob: {
      std::vector<int> tsts;
      std::vector<Aff> z;
      move_block(c, *p, "", tsts, z);
      Aff mass;
      for (const Aff& e : p->x) aff_acc(mass, rat(1), e);
      size_t nt = tsts.size();
      std::vector<std::vector<int>> kx(f->kids.size());
      for (size_t i = 0; i < f->kids.size(); ++i)
        if (f->weights[i] != 0) kx[i] = c.sys.new_vars(static_cast<int>(nt));
      for (size_t v = 0; v < nt; ++v) {
        Aff row;
        aff_acc(row, rat(-1), z[v]);
        for (size_t i = 0; i < f->kids.size(); ++i)
          if (!kx[i].empty()) row.lin[kx[i][v]] += 1;
        add_zero(c, std::move(row));
      }
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (kx[i].empty()) {
          auto leaf = std::make_unique<NodePlan>();
          leaf->f = f->kids[i];
          p->kids.push_back(std::move(leaf));
          continue;
        }
        Aff row;
        aff_acc(row, -f->weights[i], mass);
        std::vector<Aff> cx(nt);
        for (size_t v = 0; v < nt; ++v) {
          row.lin[kx[i][v]] += 1;
          cx[v] = aff_var(kx[i][v]);
        }
        add_zero(c, std::move(row));
        p->kids.push_back(plan(c, f->kids[i], tsts, std::move(cx)));
      }
      break;
    }
  }
  return p;
}

Rat aff_eval(const Aff& e, const std::vector<Rat>& sol) {
  Rat v = e.c;
  for (const auto& [var, q] : e.lin) v += q * sol[static_cast<size_t>(var)];
  return v;
}

SatWitness extract(SatCtx& c, const NodePlan& p, const std::vector<Rat>& sol) {
  SatWitness w;
  w.f = p.f;
  for (size_t v = 0; v < p.x.size(); ++v) {
    Rat q = aff_eval(p.x[v], sol);
    if (q != 0) w.delta[p.sts[v]] = q;
  }
  if (w.delta.empty()) {
    w.chain.dists.push_back({});
    return w;
  }
  switch (p.f->op) {
    case FOp::Ref:
      w.chain = refusal_chain(c.g, w.delta, p.f->refusal);
      break;
    case FOp::Diamond:
    case FOp::Prob: {
      std::vector<std::pair<Rat, const Chain*>> parts;
      for (const auto& [u, k, var] : p.move) {
        const Rat& q = sol[static_cast<size_t>(var)];
        if (q == 0) continue;
        const DistPolytope& poly = *p.polys[static_cast<size_t>(u)];
        if (p.f->op == FOp::Diamond)
          w.parts.push_back(
              {q, {poly.verts[static_cast<size_t>(k)],
                   poly.chains[static_cast<size_t>(k)]}});
        parts.push_back({q, &poly.chains[static_cast<size_t>(k)]});
      }
      w.chain = merge_scaled(parts);
      for (const auto& kid : p.kids) w.kids.push_back(extract(c, *kid, sol));
      break;
    }
    case FOp::Conj:
      for (const auto& kid : p.kids) w.kids.push_back(extract(c, *kid, sol));
      break;
  }
  return w;
}

}  // namespace

std::optional<SatWitness> sat(Plts& g, const Dist& d, FormulaPtr f) {
  SatCtx c{g, {}};
  std::vector<int> sts;
  std::vector<Aff> x0;
  for (const auto& [s, q] : d) {
    sts.push_back(s);
    x0.push_back({{}, q});
  }
  std::unique_ptr<NodePlan> root = plan(c, f, std::move(sts), std::move(x0));
  auto sol = c.sys.solve();
  if (!sol) return std::nullopt;
  return extract(c, *root, *sol);
}

namespace {

bool check_node(Plts& g, const SatWitness& w) {
  FormulaPtr f = w.f;
  if (!f) return false;
  if (w.delta.empty()) return true;
  switch (f->op) {
    case FOp::Ref: {
      if (w.chain.dists.empty() || w.chain.dists.front() != w.delta)
        return false;
      if (!check_chain(g, w.chain, "")) return false;
      for (const auto& [s, p] : w.chain.dists.back())
        if (!g.refuses(s, f->refusal)) return false;
      return true;
    }
    case FOp::Diamond: {
      if (w.kids.size() != 1 || w.kids[0].f != f->kids[0]) return false;
      if (w.chain.dists.empty() || w.chain.dists.front() != w.delta)
        return false;
      if (!check_chain(g, w.chain, f->act)) return false;
      if (w.chain.dists.back() != w.kids[0].delta) return false;
      return check_node(g, w.kids[0]);
    }
    case FOp::Conj: {
      if (w.kids.size() != f->kids.size()) return false;
      for (size_t i = 0; i < w.kids.size(); ++i) {
        if (w.kids[i].f != f->kids[i] || w.kids[i].delta != w.delta)
          return false;
        if (!check_node(g, w.kids[i])) return false;
      }
      return true;
    }
    case FOp::Prob: {
      if (w.kids.size() != f->kids.size()) return false;
      if (w.chain.dists.empty() || w.chain.dists.front() != w.delta)
        return false;
      if (!check_chain(g, w.chain, "")) return false;
      Dist sum;
      Rat mass = dist_mass(w.delta);
      for (size_t i = 0; i < w.kids.size(); ++i) {
        if (w.kids[i].f != f->kids[i]) return false;
        if (dist_mass(w.kids[i].delta) != f->weights[i] * mass) return false;
        dist_add(sum, rat(1), w.kids[i].delta);
        if (!check_node(g, w.kids[i])) return false;
      }
      return sum == w.chain.dists.back();
    }
  }
  return false;
}

}  // namespace

bool check_sat_witness(Plts& g, const Dist& d, FormulaPtr f,
                       const SatWitness& w) {
  return w.f == f && w.delta == d && check_node(g, w);
}

namespace {

FormulaPtr char_dist(Plts& g, const Dist& d, Logic kind,
                     std::map<int, FormulaPtr>& memo);

FormulaPtr char_state(Plts& g, int s, Logic kind,
                      std::map<int, FormulaPtr>& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  auto trs = g.step(s);
  std::vector<FormulaPtr> kids;
  for (const auto& tr : trs)
    if (!tr.label.empty())
      kids.push_back(f_diamond(tr.label, char_dist(g, tr.target, kind, memo)));
  if (g.stable(s)) {
    if (kind == Logic::F) kids.push_back(f_ref(g.maximal_refusal(s)));
  } else {
    for (const auto& tr : trs)
      if (tr.label.empty()) kids.push_back(char_dist(g, tr.target, kind, memo));
  }
  FormulaPtr out = f_conj(std::move(kids));
  memo.emplace(s, out);
  return out;
}

FormulaPtr char_dist(Plts& g, const Dist& d, Logic kind,
                     std::map<int, FormulaPtr>& memo) {
  std::vector<Rat> ws;
  std::vector<FormulaPtr> kids;
  for (const auto& [s, p] : d) {
    ws.push_back(p);
    kids.push_back(char_state(g, s, kind, memo));
  }
  return f_prob(std::move(ws), std::move(kids));
}

}  // namespace

FormulaPtr char_formula(Plts& g, int s, Logic kind) {
  std::map<int, FormulaPtr> memo;
  return char_state(g, s, kind, memo);
}

FormulaPtr char_formula(Plts& g, const Dist& d, Logic kind) {
  std::map<int, FormulaPtr> memo;
  return char_dist(g, d, kind, memo);
}

bool logic_leq(TermPtr p, TermPtr q, Logic kind) {
  std::vector<std::string> act = visible_actions(p);
  for (const auto& a : visible_actions(q)) act.push_back(a);
  std::sort(act.begin(), act.end());
  act.erase(std::unique(act.begin(), act.end()), act.end());
  Plts g(act);
  Dist dp = g.build(p), dq = g.build(q);
  if (kind == Logic::L)
    return sat(g, dq, char_formula(g, dp, Logic::L)).has_value();
  return sat(g, dp, char_formula(g, dq, Logic::F)).has_value();
}

namespace {

struct CtBuild {
  int next = 1;
  std::string fresh() { return "w" + std::to_string(next++); }
};

struct CtPart {
  TermPtr test = nullptr;
  std::map<std::string, Rat> target;  // nonzero coordinates only
};

CtPart ct_build(FormulaPtr f, CtBuild& b) {
  switch (f->op) {
    case FOp::Ref: {
      if (f->refusal.empty()) return {mk_nil(), {}};
      std::string w = b.fresh();
      TermPtr t = nullptr;
      for (auto it = f->refusal.rbegin(); it != f->refusal.rend(); ++it) {
        TermPtr leaf = mk_prefix(*it, mk_prefix(w, mk_nil()));
        t = t ? mk_extern(leaf, t) : leaf;
      }
      return {t, {}};
    }
    case FOp::Diamond: {
      CtPart inner = ct_build(f->kids[0], b);
      std::string w = b.fresh();
      TermPtr t = mk_extern(mk_prefix(w, mk_nil()),
                            mk_prefix(f->act, inner.test));
      return {t, std::move(inner.target)};
    }
    case FOp::Conj: {
      if (f->kids.empty()) {
        std::string w = b.fresh();
        return {mk_prefix(w, mk_nil()), {{w, rat(1)}}};
      }
      std::vector<CtPart> parts;
      for (FormulaPtr k : f->kids) parts.push_back(ct_build(k, b));
      int n = static_cast<int>(parts.size());
      TermPtr t = parts.back().test;
      for (int i = n - 2; i >= 0; --i)
        t = mk_prob(rat(1, n - i), parts[static_cast<size_t>(i)].test, t);
      std::map<std::string, Rat> target;
      for (const auto& part : parts)
        for (const auto& [w, v] : part.target) target[w] += v / n;
      return {t, std::move(target)};
    }
    case FOp::Prob: {
      std::vector<CtPart> parts;
      for (FormulaPtr k : f->kids) parts.push_back(ct_build(k, b));
      std::vector<std::string> omegas;
      for (size_t i = 0; i < parts.size(); ++i) omegas.push_back(b.fresh());
      TermPtr t = nullptr;
      for (size_t i = parts.size(); i-- > 0;) {
        TermPtr arm = mk_prob(rat(1, 2), parts[i].test,
                              mk_prefix(omegas[i], mk_nil()));
        t = t ? mk_intern(arm, t) : arm;
      }
      std::map<std::string, Rat> target;
      for (size_t i = 0; i < parts.size(); ++i) {
        const Rat& p = f->weights[i];
        if (p == 0) continue;
        for (const auto& [w, v] : parts[i].target) target[w] += p * v / 2;
        target[omegas[i]] += p / 2;
      }
      return {t, std::move(target)};
    }
  }
  return {};
}

}  // namespace

CharTest char_test(FormulaPtr f) {
  CtBuild b;
  CtPart part = ct_build(f, b);
  CharTest ct;
  ct.test = part.test;
  ct.omega = classify(part.test).omega;
  if (ct.omega.empty()) ct.omega.push_back(b.fresh());
  ct.target.assign(ct.omega.size(), rat(0));
  for (size_t i = 0; i < ct.omega.size(); ++i)
    if (auto it = part.target.find(ct.omega[i]); it != part.target.end())
      ct.target[i] = it->second;
  return ct;
}

bool char_test_holds(TermPtr process, const CharTest& ct, Dir dir) {
  TestApplication app = apply_test(ct.test, process, nullptr, &ct.omega);
  OutcomeSet out = results_vector(app);
  return dominated_point_exists(out, ct.target, dir);
}

}  // namespace pcsp
