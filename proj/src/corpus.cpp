#include "pcsp/corpus.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pcsp {

uint64_t Rng::next() {
  uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int Rng::below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

Rat Rng::frac(int max_den) {
  int den = 2 + below(max_den - 1);
  int num = 1 + below(den - 1);
  return rat(num, den);
}

namespace {

TermPtr gen_term(Rng& r, const std::vector<std::string>& alphabet, int depth,
                 bool allow_par) {
  if (depth <= 0) return mk_nil();
  int na = static_cast<int>(alphabet.size());
  switch (r.below(allow_par ? 12 : 11)) {
    case 0:
    case 1:
      return mk_nil();
    case 2:
    case 3:
    case 4:
    case 5:
      return mk_prefix(alphabet[static_cast<size_t>(r.below(na))],
                       gen_term(r, alphabet, depth - 1, allow_par));
    case 6:
    case 7:
      return mk_intern(gen_term(r, alphabet, depth - 1, allow_par),
                       gen_term(r, alphabet, depth - 1, allow_par));
    case 8:
      return mk_extern(gen_term(r, alphabet, depth - 1, allow_par),
                       gen_term(r, alphabet, depth - 1, allow_par));
    case 9:
    case 10:
      return mk_prob(r.frac(), gen_term(r, alphabet, depth - 1, allow_par),
                     gen_term(r, alphabet, depth - 1, allow_par));
    default: {
      std::vector<std::string> sync;
      for (const auto& a : alphabet)
        if (r.below(2) == 0) sync.push_back(a);
      return mk_par(sync, gen_term(r, alphabet, depth - 1, allow_par),
                    gen_term(r, alphabet, depth - 1, allow_par));
    }
  }
}

}  // namespace

TermPtr gen_process(Rng& r, const std::vector<std::string>& alphabet,
                    int depth, bool allow_par) {
  return desugar(gen_term(r, alphabet, depth, allow_par));
}

TermPtr gen_ncsp(Rng& r, const std::vector<std::string>& alphabet,
                 int depth) {
  return gen_process(r, alphabet, depth, false);
}

TermPtr gen_test(Rng& r, const std::vector<std::string>& alphabet, int depth,
                 int n_omega) {
  std::vector<std::string> acts = alphabet;
  if (n_omega <= 1) {
    acts.push_back("w");
  } else {
    for (int i = 1; i <= n_omega; ++i) acts.push_back("w" + std::to_string(i));
  }
  for (;;) {
    TermPtr t = desugar(gen_term(r, acts, depth, false));
    if (!classify(t).omega.empty()) return t;
  }
}

FormulaPtr gen_formula(Rng& r, const std::vector<std::string>& alphabet,
                       int depth, Logic kind) {
  int na = static_cast<int>(alphabet.size());
  int c = r.below(depth <= 0 ? 2 : (kind == Logic::F ? 8 : 7));
  switch (c) {
    case 0:
      return f_top();
    case 1: {
      if (kind == Logic::L) return f_top();
      std::vector<std::string> x;
      for (const auto& a : alphabet)
        if (r.below(2) == 0) x.push_back(a);
      return f_ref(x);
    }
    case 2:
    case 3:
    case 4:
      return f_diamond(alphabet[static_cast<size_t>(r.below(na))],
                       gen_formula(r, alphabet, depth - 1, kind));
    case 5: {
      std::vector<FormulaPtr> kids;
      int n = 2 + r.below(2);
      for (int i = 0; i < n; ++i)
        kids.push_back(gen_formula(r, alphabet, depth - 1, kind));
      return f_conj(kids);
    }
    case 6: {
      Rat p = r.frac();
      return f_prob({p, Rat(1) - p},
                    {gen_formula(r, alphabet, depth - 1, kind),
                     gen_formula(r, alphabet, depth - 1, kind)});
    }
    default: {
      std::vector<std::string> x;
      for (const auto& a : alphabet)
        if (r.below(2) == 0) x.push_back(a);
      return f_ref(x);
    }
  }
}

std::vector<TermPtr> enumerate_ncsp(int max_prefix, int max_ops) {
  std::map<std::pair<int, int>, std::vector<TermPtr>> memo;
  auto go = [&](auto&& self, int ops, int pref) -> const std::vector<TermPtr>& {
    auto key = std::make_pair(ops, pref);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::set<TermPtr> out;
    out.insert(mk_nil());
    if (pref >= 1)
      for (TermPtr t : self(self, ops, pref - 1)) {
        out.insert(mk_prefix("a", t));
        out.insert(mk_prefix("b", t));
      }
    if (ops >= 1)
      for (int o1 = 0; o1 <= ops - 1; ++o1)
        for (int p1 = 0; p1 <= pref; ++p1)
          for (TermPtr l : self(self, o1, p1))
            for (TermPtr r : self(self, ops - 1 - o1, pref - p1)) {
              out.insert(mk_intern(l, r));
              out.insert(mk_extern(l, r));
              out.insert(mk_prob(rat(1, 2), l, r));
            }
    return memo[key] = std::vector<TermPtr>(out.begin(), out.end());
  };
  auto all = go(go, max_ops, max_prefix);
  std::sort(all.begin(), all.end(),
            [](TermPtr a, TermPtr b) { return term_cmp(a, b) < 0; });
  return all;
}

}  // namespace pcsp
