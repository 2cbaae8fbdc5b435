#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace pcsp {

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p/q", a decimal with finite expansion ("0.25"), or an integer.
std::optional<Rat> rat_parse(const std::string& text);

// Canonical form: "num" when the denominator is 1, else "num/den".
std::string rat_str(const Rat& r);

using Vec = std::vector<Rat>;

std::string vec_str(const Vec& v);

bool vec_le(const Vec& a, const Vec& b);   // componentwise <=
bool vec_lt_lex(const Vec& a, const Vec& b);

}  // namespace pcsp
