#include "pcsp/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pcsp {

std::vector<int> LinSys::new_vars(int n) {
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = new_var();
  return out;
}

void LinSys::add_row(std::map<int, Rat> coeffs, Rat b) {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->second == 0)
      it = coeffs.erase(it);
    else
      ++it;
  }
  rows.push_back(std::move(coeffs));
  rhs.push_back(std::move(b));
}

std::optional<std::vector<Rat>> LinSys::solve() const {
  int m = static_cast<int>(rows.size());
  int n = nvars;
  int width = n + m + 1;
  std::vector<std::vector<Rat>> t(m, std::vector<Rat>(width));
  for (int i = 0; i < m; ++i) {
    Rat sign = rhs[i] < 0 ? rat(-1) : rat(1);
    for (const auto& [j, c] : rows[i]) {
      assert(j >= 0 && j < n);
      t[i][j] = sign * c;
    }
    t[i][n + i] = 1;
    t[i][n + m] = sign * rhs[i];
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced-cost row for minimising the sum of artificials; last cell holds
  // minus the current objective.
  std::vector<Rat> red(width);
  for (int j = 0; j < width; ++j) {
    Rat cj = (j >= n && j < n + m) ? rat(1) : rat(0);
    Rat s = 0;
    for (int i = 0; i < m; ++i) s += t[i][j];
    red[j] = cj - s;
  }

  while (true) {
    int enter = -1;
    for (int j = 0; j < n; ++j)
      if (red[j] < 0) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][n + m] / t[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    assert(leave >= 0);
    Rat piv = t[leave][enter];
    for (int j = 0; j < width; ++j) t[leave][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (int j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    if (red[enter] != 0) {
      Rat f = red[enter];
      for (int j = 0; j < width; ++j) red[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  if (red[n + m] != 0) return std::nullopt;
  std::vector<Rat> x(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = t[i][n + m];
  return x;
}

std::vector<Vec> sort_dedup(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), vec_lt_lex);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool in_hull(const std::vector<Vec>& verts, const Vec& p) {
  if (verts.empty()) return false;
  LinSys ls;
  int k = static_cast<int>(verts.size());
  std::vector<int> lam = ls.new_vars(k);
  std::map<int, Rat> mass;
  for (int i = 0; i < k; ++i) mass[lam[i]] = 1;
  ls.add_row(std::move(mass), 1);
  for (size_t d = 0; d < p.size(); ++d) {
    std::map<int, Rat> row;
    for (int i = 0; i < k; ++i) {
      if (verts[i].size() != p.size())
        throw std::runtime_error("in_hull: dimension mismatch");
      row[lam[i]] = verts[i][d];
    }
    ls.add_row(std::move(row), p[d]);
  }
  return ls.solve().has_value();
}

std::vector<Vec> hull_reduce(std::vector<Vec> pts) {
  pts = sort_dedup(std::move(pts));
  size_t i = 0;
  while (i < pts.size()) {
    std::vector<Vec> others;
    others.reserve(pts.size() - 1);
    for (size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    if (in_hull(others, pts[i]))
      pts.erase(pts.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return pts;
}

static void check_dims(const std::vector<std::string>& omega,
                       const std::vector<Vec>& pts) {
  for (const auto& p : pts)
    if (p.size() != omega.size())
      throw std::runtime_error("outcome set: dimension mismatch");
}

OutcomeSet raw_set(std::vector<std::string> omega, std::vector<Vec> pts) {
  check_dims(omega, pts);
  return {SetMode::RawFinite, std::move(omega), sort_dedup(std::move(pts))};
}

OutcomeSet hull_set(std::vector<std::string> omega, std::vector<Vec> pts) {
  check_dims(omega, pts);
  return {SetMode::ConvexVertices, std::move(omega),
          hull_reduce(std::move(pts))};
}

OutcomeSet convex_closure(const OutcomeSet& x) {
  return hull_set(x.omega, x.points);
}

OutcomeSet minkowski_mix(const std::vector<std::pair<Rat, OutcomeSet>>& parts) {
  if (parts.empty()) throw std::runtime_error("minkowski_mix: no parts");
  Rat total = 0;
  for (const auto& [p, _] : parts) {
    if (p < 0) throw std::runtime_error("minkowski_mix: negative weight");
    total += p;
  }
  if (total != 1) throw std::runtime_error("minkowski_mix: weights must sum to 1");
  const OutcomeSet* first = nullptr;
  for (const auto& [p, x] : parts) {
    if (p == 0) continue;
    if (!first) {
      first = &x;
      continue;
    }
    if (x.mode != first->mode || x.omega != first->omega)
      throw std::runtime_error("minkowski_mix: mode or alphabet mismatch");
  }
  if (!first) throw std::runtime_error("minkowski_mix: all weights zero");
  size_t dim = first->omega.size();
  std::vector<Vec> acc{Vec(dim, rat(0))};
  for (const auto& [p, x] : parts) {
    if (p == 0) continue;
    std::vector<Vec> next;
    next.reserve(acc.size() * x.points.size());
    for (const auto& a : acc)
      for (const auto& q : x.points) {
        Vec v = a;
        for (size_t d = 0; d < dim; ++d) v[d] += p * q[d];
        next.push_back(std::move(v));
      }
    acc = sort_dedup(std::move(next));
  }
  if (first->mode == SetMode::ConvexVertices)
    return {SetMode::ConvexVertices, first->omega, hull_reduce(std::move(acc))};
  return {SetMode::RawFinite, first->omega, std::move(acc)};
}

// Is there a point of x above (Ge) or below (Le) v?
static bool dominates(const OutcomeSet& x, const Vec& v, Dir dir) {
  if (v.size() != x.omega.size())
    throw std::runtime_error("dominated_point_exists: dimension mismatch");
  if (x.mode == SetMode::RawFinite) {
    for (const auto& p : x.points)
      if (dir == Dir::Le ? vec_le(p, v) : vec_le(v, p)) return true;
    return false;
  }
  if (x.points.empty()) return false;
  LinSys ls;
  int k = static_cast<int>(x.points.size());
  std::vector<int> lam = ls.new_vars(k);
  std::vector<int> slack = ls.new_vars(static_cast<int>(v.size()));
  std::map<int, Rat> mass;
  for (int i = 0; i < k; ++i) mass[lam[i]] = 1;
  ls.add_row(std::move(mass), 1);
  for (size_t d = 0; d < v.size(); ++d) {
    std::map<int, Rat> row;
    for (int i = 0; i < k; ++i) row[lam[i]] = x.points[i][d];
    row[slack[d]] = dir == Dir::Le ? rat(1) : rat(-1);
    ls.add_row(std::move(row), v[d]);
  }
  return ls.solve().has_value();
}

bool dominated_point_exists(const OutcomeSet& x, const Vec& v, Dir dir) {
  return dominates(x, v, dir);
}

bool compare(OrderKind k, const OutcomeSet& x, const OutcomeSet& y) {
  if (x.omega != y.omega)
    throw std::runtime_error("compare: alphabet mismatch");
  if (k == OrderKind::Hoare) {
    for (const auto& p : x.points)
      if (!dominates(y, p, Dir::Ge)) return false;
    return true;
  }
  for (const auto& q : y.points)
    if (!dominates(x, q, Dir::Le)) return false;
  return true;
}

OutcomeSet apply_success(const std::string& alpha, const OutcomeSet& x) {
  auto it = std::find(x.omega.begin(), x.omega.end(), alpha);
  if (it == x.omega.end()) return x;
  size_t idx = static_cast<size_t>(it - x.omega.begin());
  std::vector<Vec> pts = x.points;
  for (auto& p : pts) p[idx] = 1;
  if (x.mode == SetMode::ConvexVertices)
    return {x.mode, x.omega, hull_reduce(std::move(pts))};
  return {x.mode, x.omega, sort_dedup(std::move(pts))};
}

std::pair<Rat, Rat> scalar_extrema(const OutcomeSet& x) {
  if (x.omega.size() != 1)
    throw std::runtime_error("scalar_extrema: set is not one-dimensional");
  if (x.points.empty())
    throw std::runtime_error("scalar_extrema: empty set");
  Rat lo = x.points.front()[0], hi = lo;
  for (const auto& p : x.points) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  return {lo, hi};
}

}  // namespace pcsp
