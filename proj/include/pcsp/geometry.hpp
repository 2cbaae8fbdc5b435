#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pcsp/rat.hpp"

namespace pcsp {

// A system of linear equations over nonnegative variables.  solve() runs a
// phase-1 simplex with Bland's rule on exact rationals and returns a basic
// feasible point when one exists.
struct LinSys {
  int nvars = 0;
  std::vector<std::map<int, Rat>> rows;
  std::vector<Rat> rhs;

  int new_var() { return nvars++; }
  std::vector<int> new_vars(int n);
  void add_row(std::map<int, Rat> coeffs, Rat b);
  std::optional<std::vector<Rat>> solve() const;
};

bool in_hull(const std::vector<Vec>& verts, const Vec& p);

enum class SetMode { RawFinite, ConvexVertices };
enum class OrderKind { Hoare, Smyth };
enum class Dir { Le, Ge };

// A set of outcome vectors over a fixed ordered success alphabet.  RawFinite
// keeps every listed point; ConvexVertices keeps the irredundant vertex set
// of the convex hull.  Points are kept sorted and deduplicated either way.
struct OutcomeSet {
  SetMode mode = SetMode::RawFinite;
  std::vector<std::string> omega;
  std::vector<Vec> points;
};

OutcomeSet raw_set(std::vector<std::string> omega, std::vector<Vec> pts);
OutcomeSet hull_set(std::vector<std::string> omega, std::vector<Vec> pts);
OutcomeSet convex_closure(const OutcomeSet& x);

// Irredundant vertex subset of the convex hull of pts.
std::vector<Vec> hull_reduce(std::vector<Vec> pts);

// Weighted Minkowski sum sum_i p_i * X_i; weights must sum to 1.  All parts
// must share mode and alphabet.  In RawFinite mode the sum ranges over every
// choice of one point per part.
OutcomeSet minkowski_mix(const std::vector<std::pair<Rat, OutcomeSet>>& parts);

// Hoare: forall x in X exists y in Y with x <= y.  Smyth: forall y in Y
// exists x in X with x <= y.  Each side is read per its own mode.
bool compare(OrderKind k, const OutcomeSet& x, const OutcomeSet& y);

// Sets the alpha coordinate of every point to 1; identity when alpha is not
// in the alphabet.
OutcomeSet apply_success(const std::string& alpha, const OutcomeSet& x);

bool dominated_point_exists(const OutcomeSet& x, const Vec& v, Dir dir);

// Min and max over a one-dimensional set.
std::pair<Rat, Rat> scalar_extrema(const OutcomeSet& x);

std::vector<Vec> sort_dedup(std::vector<Vec> pts);

}  // namespace pcsp
