#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bdtl/common.hpp"

namespace bdtl {

// Affine expression with exact rational coefficients.
struct LinExpr {
  std::map<std::string, Rat> coef;
  Rat cst = 0;

  static LinExpr constant(Rat c) {
    LinExpr e;
    e.cst = std::move(c);
    return e;
  }
  static LinExpr var(const std::string& name, Rat c = 1) {
    LinExpr e;
    if (c != 0) e.coef[name] = std::move(c);
    return e;
  }

  void trim() {
    for (auto it = coef.begin(); it != coef.end();)
      it = it->second == 0 ? coef.erase(it) : std::next(it);
  }
  bool ground() const { return coef.empty(); }

  LinExpr& operator+=(const LinExpr& o) {
    for (const auto& [v, c] : o.coef) coef[v] += c;
    cst += o.cst;
    trim();
    return *this;
  }
  LinExpr& operator-=(const LinExpr& o) {
    for (const auto& [v, c] : o.coef) coef[v] -= c;
    cst -= o.cst;
    trim();
    return *this;
  }
  LinExpr& operator*=(const Rat& k) {
    for (auto& [v, c] : coef) c = Rat(c * k);
    cst *= k;
    trim();
    return *this;
  }
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Rat& k) { return a *= k; }

  Rat eval(const std::map<std::string, Rat>& a) const {
    Rat r = cst;
    for (const auto& [v, c] : coef) {
      auto it = a.find(v);
      if (it == a.end()) throw internal_error("unassigned variable " + v);
      r += c * it->second;
    }
    return r;
  }

  std::string str() const {
    if (coef.empty()) return rat_str(cst);
    std::string s;
    for (const auto& [v, c] : coef) {
      if (s.empty())
        s = rat_str(c) + " " + v;
      else if (c < 0)
        s += " - " + rat_str(Rat(-c)) + " " + v;
      else
        s += " + " + rat_str(c) + " " + v;
    }
    if (cst != 0)
      s += cst < 0 ? " - " + rat_str(Rat(-cst)) : " + " + rat_str(cst);
    return s;
  }
};

enum class Rel { Le, Lt, Eq };

struct NumericConstraint {
  LinExpr left;
  Rel rel = Rel::Le;
  LinExpr right;

  std::string str() const {
    const char* op = rel == Rel::Le ? " <= " : rel == Rel::Lt ? " < " : " = ";
    return left.str() + op + right.str();
  }
};

// Constraint system; every variable is implicitly bounded to [0,1].
struct LinSystem {
  std::vector<NumericConstraint> constraints;

  void add(LinExpr l, Rel r, LinExpr rr) {
    constraints.push_back({std::move(l), r, std::move(rr)});
  }
  std::set<std::string> variables() const {
    std::set<std::string> s;
    for (const auto& c : constraints) {
      for (const auto& [v, k] : c.left.coef) s.insert(v);
      for (const auto& [v, k] : c.right.coef) s.insert(v);
    }
    return s;
  }
  std::string dump_lp() const {
    std::string s;
    for (const auto& c : constraints) s += c.str() + "\n";
    return s;
  }
};

struct Feasibility {
  bool ok = false;
  std::map<std::string, Rat> witness;
  std::string reason;
};

namespace detail {

struct Ineq {
  LinExpr e;  // e <= 0, or e < 0 when strict
  bool strict = false;
};

struct Bound {
  LinExpr e;
  bool strict = false;
};

inline void substitute(LinExpr& e, const std::string& x, const LinExpr& repl) {
  auto it = e.coef.find(x);
  if (it == e.coef.end()) return;
  Rat c = it->second;
  e.coef.erase(it);
  e += repl * c;
}

inline void verify_witness(const LinSystem& s, const std::map<std::string, Rat>& a) {
  for (const auto& c : s.constraints) {
    Rat l = c.left.eval(a), r = c.right.eval(a);
    bool ok = c.rel == Rel::Le ? l <= r : c.rel == Rel::Lt ? l < r : l == r;
    if (!ok) throw internal_error("witness violates " + c.str());
  }
  for (const auto& [v, x] : a)
    if (!in_unit(x)) throw internal_error("witness leaves the unit interval at " + v);
}

// Exact two-phase simplex for systems too dense for elimination.  Every
// strict row gains one shared slack column; the system is strictly feasible
// exactly when the maximal slack stays positive.
inline Feasibility strict_simplex(const LinSystem& s) {
  std::vector<std::string> vars;
  for (const std::string& v : s.variables()) vars.push_back(v);
  std::map<std::string, int> col;
  for (int j = 0; j < static_cast<int>(vars.size()); ++j) col[vars[j]] = j;
  int n = static_cast<int>(vars.size());
  int eps = n;
  bool any_strict = false;

  // Rows in the form sum a_j x_j <= b over the structural and slack columns.
  std::vector<std::pair<std::vector<Rat>, Rat>> rows;
  auto add_row = [&](const LinExpr& e, bool strict) {
    std::vector<Rat> a(n + 1, Rat(0));
    for (const auto& [v, c] : e.coef) a[col[v]] = c;
    if (strict) {
      a[eps] = 1;
      any_strict = true;
    }
    rows.emplace_back(std::move(a), Rat(-e.cst));
  };
  for (const auto& c : s.constraints) {
    LinExpr d = c.left - c.right;
    add_row(d, c.rel == Rel::Lt);
    if (c.rel == Rel::Eq) add_row(LinExpr() - d, false);
  }
  for (int j = 0; j < n; ++j)
    add_row(LinExpr::var(vars[j]) - LinExpr::constant(1), false);
  {
    std::vector<Rat> a(n + 1, Rat(0));
    a[eps] = 1;
    rows.emplace_back(std::move(a), Rat(1));
  }

  int m = static_cast<int>(rows.size());
  int width = n + 1 + m;
  std::vector<std::vector<Rat>> t(m);
  std::vector<Rat> rhs(m);
  std::vector<int> basis(m);
  std::vector<int> artificial;
  for (int i = 0; i < m; ++i) {
    t[i].assign(width, Rat(0));
    for (int j = 0; j <= n; ++j) t[i][j] = rows[i].first[j];
    t[i][n + 1 + i] = 1;
    rhs[i] = rows[i].second;
    if (rhs[i] < 0) {
      for (Rat& x : t[i]) x = Rat(-x);
      rhs[i] = Rat(-rhs[i]);
      artificial.push_back(i);
      basis[i] = -1;
    } else {
      basis[i] = n + 1 + i;
    }
  }
  for (int k = 0; k < static_cast<int>(artificial.size()); ++k) {
    for (int i = 0; i < m; ++i)
      t[i].push_back(i == artificial[k] ? Rat(1) : Rat(0));
    basis[artificial[k]] = width + k;
  }
  int total = width + static_cast<int>(artificial.size());

  auto pivot = [&](int leave, int enter) {
    Rat piv = t[leave][enter];
    for (Rat& x : t[leave]) x /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (int j = 0; j < total; ++j) t[i][j] -= f * t[leave][j];
      rhs[i] -= f * rhs[leave];
    }
    basis[leave] = enter;
  };

  // Bland's rule on the given per-column costs; maximizes the objective.
  auto optimize = [&](auto&& cost, int enter_limit) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < enter_limit && enter < 0; ++j) {
        Rat r = cost(j);
        for (int i = 0; i < m; ++i)
          if (cost(basis[i]) != 0) r -= cost(basis[i]) * t[i][j];
        if (r > 0) enter = j;
      }
      if (enter < 0) return;
      int leave = -1;
      Rat ratio = 0;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        Rat q = rhs[i] / t[i][enter];
        if (leave < 0 || q < ratio || (q == ratio && basis[i] < basis[leave])) {
          leave = i;
          ratio = q;
        }
      }
      if (leave < 0) throw internal_error("simplex objective unbounded");
      pivot(leave, enter);
    }
  };

  optimize([&](int j) { return j >= width ? Rat(-1) : Rat(0); }, total);
  Rat z = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= width) z += rhs[i];
  if (z != 0) return {false, {}, "phase-1 optimum " + rat_str(z)};

  // Drive leftover artificials out of the basis, dropping redundant rows.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < width) continue;
    int enter = -1;
    for (int j = 0; j < width && enter < 0; ++j)
      if (t[i][j] != 0) enter = j;
    if (enter >= 0) pivot(i, enter);
  }
  std::vector<std::vector<Rat>> t2;
  std::vector<Rat> rhs2;
  std::vector<int> basis2;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= width) continue;
    t[i].resize(width);
    t2.push_back(std::move(t[i]));
    rhs2.push_back(std::move(rhs[i]));
    basis2.push_back(basis[i]);
  }
  t = std::move(t2);
  rhs = std::move(rhs2);
  basis = std::move(basis2);
  m = static_cast<int>(t.size());
  total = width;

  if (any_strict) {
    optimize([&](int j) { return j == eps ? Rat(1) : Rat(0); }, width);
    Rat slack = 0;
    for (int i = 0; i < m; ++i)
      if (basis[i] == eps) slack = rhs[i];
    if (slack == 0)
      return {false, {}, "the strict slack has maximum 0"};
  }

  Feasibility out;
  out.ok = true;
  for (const std::string& v : vars) out.witness[v] = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.witness[vars[basis[i]]] = rhs[i];
  verify_witness(s, out.witness);
  return out;
}

}  // namespace detail

// Fourier-Motzkin elimination with exact rationals.  Equalities are removed
// by substitution first; strict and non-strict bounds combine into a strict
// bound; an infeasible system is reported through the ground constraint the
// elimination derives.  A feasible system comes back with an exact witness,
// rebuilt by choosing midpoints while walking the eliminations backwards.
// Systems whose elimination outgrows a fixed row budget are handed to an
// exact simplex with a shared slack for the strict rows.
inline Feasibility feasible(const LinSystem& s) {
  std::vector<detail::Ineq> ineqs;
  std::vector<LinExpr> eqs;
  for (const auto& c : s.constraints) {
    LinExpr d = c.left - c.right;
    if (c.rel == Rel::Eq)
      eqs.push_back(std::move(d));
    else
      ineqs.push_back({std::move(d), c.rel == Rel::Lt});
  }
  for (const std::string& v : s.variables()) {
    ineqs.push_back({LinExpr::var(v, -1), false});
    ineqs.push_back({LinExpr::var(v, 1) - LinExpr::constant(1), false});
  }

  std::vector<std::pair<std::string, LinExpr>> substitutions;
  while (true) {
    auto it = std::find_if(eqs.begin(), eqs.end(),
                           [](const LinExpr& e) { return !e.ground(); });
    if (it == eqs.end()) break;
    std::string x = it->coef.begin()->first;
    Rat a = it->coef.begin()->second;
    LinExpr repl = *it;
    repl.coef.erase(x);
    repl *= Rat(-1) / a;
    eqs.erase(it);
    for (LinExpr& e : eqs) detail::substitute(e, x, repl);
    for (detail::Ineq& q : ineqs) detail::substitute(q.e, x, repl);
    substitutions.emplace_back(std::move(x), std::move(repl));
  }
  for (const LinExpr& e : eqs)
    if (e.cst != 0)
      return {false, {}, "derived 0 = " + rat_str(e.cst)};

  struct Eliminated {
    std::string x;
    std::vector<detail::Bound> lowers, uppers;
  };
  std::vector<Eliminated> stack;

  // Drops satisfied ground constraints, reports violated ones, and keeps one
  // representative per direction: rows are normalized by the leading
  // coefficient, and a larger constant (strict beating non-strict on ties)
  // dominates.
  auto sweep_ground = [&](std::vector<detail::Ineq>& qs, std::string& bad) {
    std::vector<detail::Ineq> keep;
    std::map<std::string, size_t> seen;
    for (detail::Ineq& q : qs) {
      if (q.e.ground()) {
        if (q.strict ? q.e.cst < 0 : q.e.cst <= 0) continue;
        bad = "derived " + rat_str(q.e.cst) + (q.strict ? " < 0" : " <= 0");
        return false;
      }
      Rat lead = q.e.coef.begin()->second;
      if (lead < 0) lead = Rat(-lead);
      q.e *= Rat(Rat(1) / lead);
      std::string key;
      for (const auto& [v, c] : q.e.coef) key += v + ":" + rat_str(c) + ";";
      auto [it, fresh] = seen.try_emplace(std::move(key), keep.size());
      if (fresh) {
        keep.push_back(std::move(q));
        continue;
      }
      detail::Ineq& held = keep[it->second];
      if (q.e.cst > held.e.cst)
        held = std::move(q);
      else if (q.e.cst == held.e.cst && q.strict)
        held.strict = true;
    }
    qs = std::move(keep);
    return true;
  };

  std::string bad;
  if (!sweep_ground(ineqs, bad)) return {false, {}, bad};

  constexpr long kRowCap = 2000;
  while (true) {
    std::map<std::string, std::pair<long, long>> uses;
    for (const detail::Ineq& q : ineqs)
      for (const auto& [v, c] : q.e.coef)
        (c < 0 ? uses[v].first : uses[v].second)++;
    if (uses.empty()) break;
    std::string x;
    long best = -1;
    for (const auto& [v, lu] : uses) {
      long cost = lu.first * lu.second;
      if (best < 0 || cost < best) {
        best = cost;
        x = v;
      }
    }
    // Dense systems defeat elimination; hand those to the simplex instead.
    if (best > kRowCap || static_cast<long>(ineqs.size()) > kRowCap)
      return detail::strict_simplex(s);

    Eliminated el;
    el.x = x;
    std::vector<detail::Ineq> rest;
    for (detail::Ineq& q : ineqs) {
      auto it = q.e.coef.find(x);
      if (it == q.e.coef.end()) {
        rest.push_back(std::move(q));
        continue;
      }
      Rat a = it->second;
      LinExpr b = q.e;
      b.coef.erase(x);
      b *= Rat(-1) / a;
      (a < 0 ? el.lowers : el.uppers).push_back({std::move(b), q.strict});
    }
    for (const detail::Bound& lo : el.lowers)
      for (const detail::Bound& up : el.uppers)
        rest.push_back({lo.e - up.e, lo.strict || up.strict});
    ineqs = std::move(rest);
    stack.push_back(std::move(el));
    if (!sweep_ground(ineqs, bad)) return {false, {}, bad};
  }

  Feasibility out;
  out.ok = true;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    Rat lo = 0, up = 1;
    bool lo_strict = false, up_strict = false;
    for (const detail::Bound& b : it->lowers) {
      Rat v = b.e.eval(out.witness);
      if (v > lo || (v == lo && b.strict)) {
        lo = v;
        lo_strict = b.strict;
      }
    }
    for (const detail::Bound& b : it->uppers) {
      Rat v = b.e.eval(out.witness);
      if (v < up || (v == up && b.strict)) {
        up = v;
        up_strict = b.strict;
      }
    }
    if (lo > up || (lo == up && (lo_strict || up_strict)))
      throw internal_error("elimination left an empty interval for " + it->x);
    out.witness[it->x] = lo == up ? lo : Rat((lo + up) / 2);
  }
  for (auto it = substitutions.rbegin(); it != substitutions.rend(); ++it)
    out.witness[it->first] = it->second.eval(out.witness);
  detail::verify_witness(s, out.witness);
  return out;
}

// Phase-1 simplex with Bland's rule over exact rationals, used as an
// independent oracle for systems without strict inequalities.  Variables are
// nonnegative by construction; the unit upper bounds become ordinary rows.
inline Feasibility feasible_simplex(const LinSystem& s) {
  std::vector<std::string> vars;
  for (const std::string& v : s.variables()) vars.push_back(v);
  std::map<std::string, int> col;
  for (int j = 0; j < static_cast<int>(vars.size()); ++j) col[vars[j]] = j;
  int n = static_cast<int>(vars.size());

  // Rows in the form sum a_j x_j <= b.
  std::vector<std::pair<std::vector<Rat>, Rat>> rows;
  auto add_row = [&](const LinExpr& e) {
    std::vector<Rat> a(n, Rat(0));
    for (const auto& [v, c] : e.coef) a[col[v]] = c;
    rows.emplace_back(std::move(a), Rat(-e.cst));
  };
  for (const auto& c : s.constraints) {
    if (c.rel == Rel::Lt)
      throw input_error("the simplex oracle handles non-strict systems only");
    LinExpr d = c.left - c.right;
    add_row(d);
    if (c.rel == Rel::Eq) add_row(LinExpr() - d);
  }
  for (int j = 0; j < n; ++j)
    add_row(LinExpr::var(vars[j]) - LinExpr::constant(1));

  int m = static_cast<int>(rows.size());
  int width = n + m;  // structural + slack columns; artificials appended next
  std::vector<std::vector<Rat>> t(m);
  std::vector<Rat> rhs(m);
  std::vector<int> basis(m);
  std::vector<int> artificial;
  for (int i = 0; i < m; ++i) {
    t[i].assign(width, Rat(0));
    for (int j = 0; j < n; ++j) t[i][j] = rows[i].first[j];
    t[i][n + i] = 1;
    rhs[i] = rows[i].second;
    if (rhs[i] < 0) {
      for (Rat& x : t[i]) x = Rat(-x);
      rhs[i] = Rat(-rhs[i]);
      artificial.push_back(i);
      basis[i] = -1;
    } else {
      basis[i] = n + i;
    }
  }
  for (int k = 0; k < static_cast<int>(artificial.size()); ++k) {
    for (int i = 0; i < m; ++i) t[i].push_back(i == artificial[k] ? Rat(1) : Rat(0));
    basis[artificial[k]] = width + k;
  }
  int total = width + static_cast<int>(artificial.size());
  auto cost = [&](int j) { return j >= width ? Rat(1) : Rat(0); };

  while (true) {
    // Reduced costs for the phase-1 objective.
    int enter = -1;
    for (int j = 0; j < total && enter < 0; ++j) {
      Rat r = cost(j);
      for (int i = 0; i < m; ++i)
        if (cost(basis[i]) != 0) r -= t[i][j];
      if (r < 0) enter = j;
    }
    if (enter < 0) break;
    int leave = -1;
    Rat ratio = 0;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat q = rhs[i] / t[i][enter];
      if (leave < 0 || q < ratio || (q == ratio && basis[i] < basis[leave])) {
        leave = i;
        ratio = q;
      }
    }
    if (leave < 0) throw internal_error("phase-1 objective unbounded");
    Rat piv = t[leave][enter];
    for (Rat& x : t[leave]) x /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (int j = 0; j < total; ++j) t[i][j] -= f * t[leave][j];
      rhs[i] -= f * rhs[leave];
    }
    basis[leave] = enter;
  }

  Rat z = 0;
  for (int i = 0; i < m; ++i)
    if (cost(basis[i]) != 0) z += rhs[i];
  if (z != 0) return {false, {}, "phase-1 optimum " + rat_str(z)};

  Feasibility out;
  out.ok = true;
  for (const std::string& v : vars) out.witness[v] = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.witness[vars[basis[i]]] = rhs[i];
  detail::verify_witness(s, out.witness);
  return out;
}

}  // namespace bdtl
