#include "pcsp/term.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace pcsp {

namespace {

std::deque<Term>& arena() {
  static std::deque<Term> a;
  return a;
}

std::unordered_map<std::string, TermPtr>& table() {
  static std::unordered_map<std::string, TermPtr> t;
  return t;
}

std::string ptr_key(TermPtr p) {
  return std::to_string(reinterpret_cast<uintptr_t>(p));
}

TermPtr intern(Term node, const std::string& key) {
  auto& tab = table();
  if (auto it = tab.find(key); it != tab.end()) return it->second;
  arena().push_back(std::move(node));
  TermPtr p = &arena().back();
  tab.emplace(key, p);
  return p;
}

}  // namespace

TermPtr mk_nil() {
  Term n;
  n.op = Op::Nil;
  return intern(std::move(n), "0");
}

bool is_success_action(const std::string& act) {
  if (act.empty() || act[0] != 'w') return false;
  for (size_t i = 1; i < act.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(act[i]))) return false;
  return true;
}

TermPtr mk_prefix(const std::string& act, TermPtr body) {
  if (act.empty() || act == "tau")
    throw std::runtime_error("bad prefix action: " + act);
  Term n;
  n.op = Op::Prefix;
  n.act = act;
  n.l = body;
  n.size = 1 + body->size;
  return intern(std::move(n), "p" + act + "." + ptr_key(body));
}

TermPtr mk_intern(TermPtr l, TermPtr r) {
  Term n;
  n.op = Op::Intern;
  n.l = l;
  n.r = r;
  n.size = 1 + l->size + r->size;
  return intern(std::move(n), "i" + ptr_key(l) + "," + ptr_key(r));
}

TermPtr mk_extern(TermPtr l, TermPtr r) {
  Term n;
  n.op = Op::Extern;
  n.l = l;
  n.r = r;
  n.size = 1 + l->size + r->size;
  return intern(std::move(n), "e" + ptr_key(l) + "," + ptr_key(r));
}

TermPtr mk_par(std::vector<std::string> sync, TermPtr l, TermPtr r) {
  std::sort(sync.begin(), sync.end());
  sync.erase(std::unique(sync.begin(), sync.end()), sync.end());
  std::string acts;
  for (const auto& a : sync) {
    if (is_success_action(a) || a == "tau" || a.empty())
      throw std::runtime_error("bad synchronisation action: " + a);
    acts += a + ",";
  }
  Term n;
  n.op = Op::Par;
  n.sync = std::move(sync);
  n.l = l;
  n.r = r;
  n.size = 1 + l->size + r->size;
  return intern(std::move(n), "y[" + acts + "]" + ptr_key(l) + "," + ptr_key(r));
}

TermPtr mk_prob(const Rat& p, TermPtr l, TermPtr r) {
  if (p <= 0 || p >= 1)
    throw std::runtime_error("probability outside (0,1): " + rat_str(p));
  Term n;
  n.op = Op::Prob;
  n.prob = p;
  n.l = l;
  n.r = r;
  n.size = 1 + l->size + r->size;
  return intern(std::move(n),
                "q" + rat_str(p) + ":" + ptr_key(l) + "," + ptr_key(r));
}

int term_cmp(TermPtr a, TermPtr b) {
  if (a == b) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  switch (a->op) {
    case Op::Nil:
      return 0;
    case Op::Prefix: {
      if (int c = a->act.compare(b->act)) return c < 0 ? -1 : 1;
      return term_cmp(a->l, b->l);
    }
    case Op::Prob: {
      if (int c = cmp(a->prob, b->prob)) return c;
      if (int c = term_cmp(a->l, b->l)) return c;
      return term_cmp(a->r, b->r);
    }
    case Op::Par: {
      if (a->sync != b->sync) return a->sync < b->sync ? -1 : 1;
      if (int c = term_cmp(a->l, b->l)) return c;
      return term_cmp(a->r, b->r);
    }
    default: {
      if (int c = term_cmp(a->l, b->l)) return c;
      return term_cmp(a->r, b->r);
    }
  }
}

// --- parsing ---

namespace {

enum class Tok {
  End,
  Name,
  Num,
  Dot,
  Comma,
  LParen,
  RParen,
  OpIntern,
  OpExtern,
  OpParL,
  ParR,
  OpProbL,
  Bar
};

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  auto starts = [&](const char* p) {
    return s.compare(i, std::strlen(p), p) == 0;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t pos = i;
    if (starts("|~|")) {
      out.push_back({Tok::OpIntern, "|~|", pos});
      i += 3;
    } else if (starts("|[")) {
      out.push_back({Tok::OpParL, "|[", pos});
      i += 2;
    } else if (starts("|+")) {
      out.push_back({Tok::OpProbL, "|+", pos});
      i += 2;
    } else if (starts("]|")) {
      out.push_back({Tok::ParR, "]|", pos});
      i += 2;
    } else if (starts("[]")) {
      out.push_back({Tok::OpExtern, "[]", pos});
      i += 2;
    } else if (c == '|') {
      out.push_back({Tok::Bar, "|", pos});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", pos});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", pos});
      ++i;
    } else if (c == '.') {
      out.push_back({Tok::Dot, ".", pos});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", pos});
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
      out.push_back({Tok::Num, s.substr(i, j - i), pos});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                              s[j] == '_'))
        ++j;
      out.push_back({Tok::Name, s.substr(i, j - i), pos});
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

struct BinId {
  Op op;
  Rat prob;
  std::vector<std::string> sync;
  bool operator==(const BinId& o) const {
    return op == o.op && prob == o.prob && sync == o.sync;
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;

  const Token& peek() const { return toks[i]; }
  Token take() { return toks[i++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what, peek().pos);
    ++i;
  }

  bool at_binop() const {
    Tok k = peek().kind;
    return k == Tok::OpIntern || k == Tok::OpExtern || k == Tok::OpParL ||
           k == Tok::OpProbL;
  }

  BinId read_binid() {
    Token t = take();
    switch (t.kind) {
      case Tok::OpIntern:
        return {Op::Intern, rat(0), {}};
      case Tok::OpExtern:
        return {Op::Extern, rat(0), {}};
      case Tok::OpParL: {
        std::vector<std::string> acts;
        if (peek().kind != Tok::ParR) {
          while (true) {
            if (peek().kind != Tok::Name)
              throw ParseError("expected action name", peek().pos);
            Token n = take();
            if (n.text == "tau")
              throw ParseError("tau is not a writable action", n.pos);
            if (is_success_action(n.text))
              throw ParseError("success action in synchronisation set", n.pos);
            acts.push_back(n.text);
            if (peek().kind == Tok::Comma) {
              ++i;
              continue;
            }
            break;
          }
        }
        expect(Tok::ParR, "]|");
        std::sort(acts.begin(), acts.end());
        acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
        return {Op::Par, rat(0), std::move(acts)};
      }
      case Tok::OpProbL: {
        if (peek().kind != Tok::Num)
          throw ParseError("expected probability literal", peek().pos);
        Token n = take();
        auto p = rat_parse(n.text);
        if (!p || *p <= 0 || *p >= 1)
          throw ParseError("probability literal outside (0,1)", n.pos);
        expect(Tok::Bar, "|");
        return {Op::Prob, *p, {}};
      }
      default:
        throw ParseError("expected operator", t.pos);
    }
  }

  TermPtr prefix() {
    const Token& t = peek();
    if (t.kind == Tok::Num) {
      if (t.text == "0") {
        ++i;
        return mk_nil();
      }
      throw ParseError("expected a term", t.pos);
    }
    if (t.kind == Tok::LParen) {
      ++i;
      TermPtr inner = term();
      expect(Tok::RParen, ")");
      return inner;
    }
    if (t.kind == Tok::Name) {
      Token n = take();
      if (n.text == "tau")
        throw ParseError("tau is not a writable action", n.pos);
      if (peek().kind == Tok::Dot) {
        ++i;
        return mk_prefix(n.text, prefix());
      }
      return mk_prefix(n.text, mk_nil());
    }
    throw ParseError("expected a term", t.pos);
  }

  TermPtr mk_bin(const BinId& id, TermPtr l, TermPtr r) {
    switch (id.op) {
      case Op::Intern:
        return mk_intern(l, r);
      case Op::Extern:
        return mk_extern(l, r);
      case Op::Par:
        return mk_par(id.sync, l, r);
      default:
        return mk_prob(id.prob, l, r);
    }
  }

  TermPtr term() {
    TermPtr first = prefix();
    if (!at_binop()) return first;
    size_t oppos = peek().pos;
    BinId id = read_binid();
    std::vector<TermPtr> operands{first, prefix()};
    while (at_binop()) {
      oppos = peek().pos;
      BinId next = read_binid();
      if (!(next == id))
        throw ParseError("mixed operators need parentheses", oppos);
      operands.push_back(prefix());
    }
    TermPtr acc = operands.back();
    for (size_t k = operands.size() - 1; k-- > 0;)
      acc = mk_bin(id, operands[k], acc);
    return acc;
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p{lex(text)};
  TermPtr t = p.term();
  if (p.peek().kind != Tok::End)
    throw ParseError("unexpected trailing input", p.peek().pos);
  return t;
}

// --- printing ---

namespace {

bool is_bin(TermPtr t) {
  return t->op == Op::Intern || t->op == Op::Extern || t->op == Op::Par ||
         t->op == Op::Prob;
}

bool same_binid(TermPtr parent, TermPtr child) {
  if (parent->op != child->op) return false;
  if (parent->op == Op::Prob) return parent->prob == child->prob;
  if (parent->op == Op::Par) return parent->sync == child->sync;
  return true;
}

std::string op_str(TermPtr t) {
  switch (t->op) {
    case Op::Intern:
      return " |~| ";
    case Op::Extern:
      return " [] ";
    case Op::Prob:
      return " |+" + rat_str(t->prob) + "| ";
    case Op::Par: {
      std::string s = " |[";
      for (size_t i = 0; i < t->sync.size(); ++i) {
        if (i) s += ",";
        s += t->sync[i];
      }
      return s + "]| ";
    }
    default:
      return "";
  }
}

std::string pr(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return "0";
    case Op::Prefix: {
      TermPtr b = t->l;
      if (b->op == Op::Nil) return t->act;
      if (b->op == Op::Prefix) return t->act + "." + pr(b);
      return t->act + ".(" + pr(b) + ")";
    }
    default: {
      std::string ls = pr(t->l), rs = pr(t->r);
      if (is_bin(t->l)) ls = "(" + ls + ")";
      if (is_bin(t->r) && !same_binid(t, t->r)) rs = "(" + rs + ")";
      return ls + op_str(t) + rs;
    }
  }
}

}  // namespace

std::string term_str(TermPtr t) { return pr(t); }

// --- sorts, sugar, classification ---

bool is_well_sorted(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return true;
    case Op::Prefix:
      return is_well_sorted(t->l);
    case Op::Intern:
    case Op::Prob:
      return is_well_sorted(t->l) && is_well_sorted(t->r);
    default:
      return is_state_term(t->l) && is_state_term(t->r);
  }
}

bool is_state_term(TermPtr t) {
  return t->op != Op::Prob && is_well_sorted(t);
}

namespace {

TermPtr distribute(Op op, const std::vector<std::string>& sync, TermPtr l,
                   TermPtr r) {
  if (l->op == Op::Prob)
    return mk_prob(l->prob, distribute(op, sync, l->l, r),
                   distribute(op, sync, l->r, r));
  if (r->op == Op::Prob)
    return mk_prob(r->prob, distribute(op, sync, l, r->l),
                   distribute(op, sync, l, r->r));
  return op == Op::Extern ? mk_extern(l, r) : mk_par(sync, l, r);
}

}  // namespace

TermPtr desugar(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return t;
    case Op::Prefix:
      return mk_prefix(t->act, desugar(t->l));
    case Op::Intern:
      return mk_intern(desugar(t->l), desugar(t->r));
    case Op::Prob:
      return mk_prob(t->prob, desugar(t->l), desugar(t->r));
    default:
      return distribute(t->op, t->sync, desugar(t->l), desugar(t->r));
  }
}

bool has_par(TermPtr t) {
  switch (t->op) {
    case Op::Nil:
      return false;
    case Op::Prefix:
      return has_par(t->l);
    case Op::Par:
      return true;
    default:
      return has_par(t->l) || has_par(t->r);
  }
}

namespace {

void collect_actions(TermPtr t, std::set<std::string>& pre,
                     std::set<std::string>& sync) {
  switch (t->op) {
    case Op::Nil:
      return;
    case Op::Prefix:
      pre.insert(t->act);
      collect_actions(t->l, pre, sync);
      return;
    case Op::Par:
      sync.insert(t->sync.begin(), t->sync.end());
      [[fallthrough]];
    default:
      collect_actions(t->l, pre, sync);
      collect_actions(t->r, pre, sync);
  }
}

}  // namespace

Classified classify(TermPtr t) {
  std::set<std::string> pre, sync;
  collect_actions(t, pre, sync);
  std::vector<std::string> succ;
  for (const auto& a : pre)
    if (is_success_action(a)) succ.push_back(a);
  if (succ.empty()) return {TermClass::Process, {}};
  bool scalar = std::find(succ.begin(), succ.end(), "w") != succ.end();
  if (scalar) {
    if (succ.size() > 1)
      throw std::runtime_error("mixed scalar and indexed success actions");
    return {TermClass::ScalarTest, {"w"}};
  }
  std::sort(succ.begin(), succ.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return {TermClass::VectorTest, std::move(succ)};
}

std::vector<std::string> visible_actions(TermPtr t) {
  std::set<std::string> pre, sync;
  collect_actions(t, pre, sync);
  std::vector<std::string> out;
  for (const auto& a : pre)
    if (!is_success_action(a)) out.push_back(a);
  for (const auto& a : sync)
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pcsp
