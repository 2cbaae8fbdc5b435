#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcsp/logic.hpp"
#include "pcsp/term.hpp"

namespace pcsp {

// Deterministic splitmix64 stream; every sampler below is a pure function
// of the stream state, so a seed pins the whole corpus.
struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next();
  int below(int n);
  // Probability strictly between 0 and 1 with denominator <= max_den.
  Rat frac(int max_den = 4);
};

TermPtr gen_process(Rng& r, const std::vector<std::string>& alphabet,
                    int depth, bool allow_par = true);
TermPtr gen_ncsp(Rng& r, const std::vector<std::string>& alphabet, int depth);
// A test over the alphabet plus success prefixes w or w1..wn.
TermPtr gen_test(Rng& r, const std::vector<std::string>& alphabet, int depth,
                 int n_omega = 1);
FormulaPtr gen_formula(Rng& r, const std::vector<std::string>& alphabet,
                       int depth, Logic kind);

// Every parallel-free term over {a, b} with at most max_prefix action
// prefixes, at most max_ops choice operators, and probability 1/2 throughout.
std::vector<TermPtr> enumerate_ncsp(int max_prefix, int max_ops);

}  // namespace pcsp
