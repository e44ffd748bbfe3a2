#pragma once

#include <map>
#include <string>
#include <vector>

#include "bdtl/bd.hpp"

namespace bdtl {

inline std::string set_str(const BitSet& x, const std::vector<std::string>& names) {
  std::string s = "{";
  bool first = true;
  for (int i : x.members()) {
    if (!first) s += ",";
    first = false;
    s += i < static_cast<int>(names.size()) ? names[i] : "w" + std::to_string(i);
  }
  return s + "}";
}

// A set function on 2^W, stored either as atom weights (summed over members)
// or as an explicit subset table.  Subset tables are capped at 12 worlds.
struct Measure {
  enum class Kind { Atoms, Subsets };

  Kind kind = Kind::Atoms;
  int n = 0;
  std::vector<std::string> names;
  std::vector<Rat> atom;
  std::map<BitSet, Rat> table;

  static Measure atoms(std::vector<Rat> weights, std::vector<std::string> names = {}) {
    Measure m;
    m.kind = Kind::Atoms;
    m.n = static_cast<int>(weights.size());
    m.atom = std::move(weights);
    m.names = std::move(names);
    for (const Rat& w : m.atom)
      if (w < 0) throw input_error("atom weights must be nonnegative");
    return m;
  }

  static Measure subsets(int n, std::map<BitSet, Rat> table,
                         std::vector<std::string> names = {}) {
    if (n > 12) throw input_error("subset-table measures are limited to 12 worlds");
    Measure m;
    m.kind = Kind::Subsets;
    m.n = n;
    m.table = std::move(table);
    m.names = std::move(names);
    for (const auto& [_, v] : m.table)
      if (!in_unit(v)) throw input_error("measure values must lie in [0,1]");
    return m;
  }

  static Measure constant(int n, const Rat& c, std::vector<std::string> names = {}) {
    if (!in_unit(c)) throw input_error("measure values must lie in [0,1]");
    std::map<BitSet, Rat> t;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) t[BitSet(n, mask)] = c;
    return subsets(n, std::move(t), std::move(names));
  }

  Rat operator()(const BitSet& x) const {
    if (kind == Kind::Atoms) {
      Rat s = 0;
      for (int i : x.members()) s += atom[i];
      return s;
    }
    auto it = table.find(x);
    if (it == table.end())
      throw input_error("measure is undefined on " + set_str(x, names));
    return it->second;
  }

  bool total() const {
    if (kind == Kind::Atoms) return true;
    return table.size() == (1u << n);
  }

  // Nonnegative atom weights summing to one.
  bool classical_probability() const {
    if (kind != Kind::Atoms) return false;
    Rat s = 0;
    for (const Rat& w : atom) s += w;
    return s == 1;
  }
};

struct MassFunction {
  int n = 0;
  std::vector<std::string> names;
  std::map<BitSet, Rat> m;

  void validate() const {
    Rat s = 0;
    for (const auto& [x, v] : m) {
      if (v < 0) throw input_error("mass values must be nonnegative");
      if (x.none() && v != 0)
        throw input_error("the empty set must carry no mass");
      s += v;
    }
    if (s != 1) throw input_error("mass values must sum to 1, got " + rat_str(s));
  }
};

inline Measure bel_from_mass(const MassFunction& mf) {
  if (mf.n > 12) throw input_error("belief tables are limited to 12 worlds");
  std::map<BitSet, Rat> t;
  for (uint32_t mask = 0; mask < (1u << mf.n); ++mask) {
    BitSet x(mf.n, mask);
    Rat s = 0;
    for (const auto& [y, v] : mf.m)
      if (y.subset_of(x)) s += v;
    t[x] = s;
  }
  return Measure::subsets(mf.n, std::move(t), mf.names);
}

inline Measure pl_from_mass(const MassFunction& mf) {
  if (mf.n > 12) throw input_error("plausibility tables are limited to 12 worlds");
  std::map<BitSet, Rat> t;
  for (uint32_t mask = 0; mask < (1u << mf.n); ++mask) {
    BitSet x(mf.n, mask);
    Rat s = 0;
    for (const auto& [y, v] : mf.m)
      if (y.intersects(x)) s += v;
    t[x] = s;
  }
  return Measure::subsets(mf.n, std::move(t), mf.names);
}

// Inverse of bel_from_mass on total measures: m(A) = sum over B subseteq A of
// (-1)^{|A minus B|} mu(B).  The measure is mass-representable iff all
// coefficients are nonnegative (and mu is normalized).
inline std::map<BitSet, Rat> moebius_of(const Measure& mu) {
  if (mu.n > 12) throw input_error("Moebius inversion is limited to 12 worlds");
  std::map<BitSet, Rat> out;
  for (uint32_t a = 0; a < (1u << mu.n); ++a) {
    Rat s = 0;
    uint32_t b = a;
    for (;;) {
      int diff = __builtin_popcount(a) - __builtin_popcount(b);
      Rat v = mu(BitSet(mu.n, b));
      s += (diff % 2 == 0) ? v : -v;
      if (b == 0) break;
      b = (b - 1) & a;
    }
    out[BitSet(mu.n, a)] = s;
  }
  return out;
}

struct AuditReport {
  std::string axiom;
  bool pass = true;
  std::string witness;
};

namespace detail {

inline std::string eq_witness(const std::string& lhs, const Rat& lv,
                              const std::string& rhs, const Rat& rv) {
  return lhs + " = " + rat_str(lv) + " but " + rhs + " = " + rat_str(rv);
}

}  // namespace detail

// Checks the three defining conditions of a two-sided probability assignment:
// monotonicity over subset pairs, the negation-swap identity over the
// definable extents, and modularity over positive extents.
inline std::vector<AuditReport> audit_pm_probability(const BDModel& m,
                                                     const Measure& mu) {
  std::vector<AuditReport> out;
  const auto& names = m.worlds;

  AuditReport mon{"mon", true, ""};
  if (m.size() <= 12 && mu.total()) {
    int n = m.size();
    for (uint32_t y = 0; y < (1u << n) && mon.pass; ++y) {
      Rat vy = mu(BitSet(n, y));
      uint32_t x = y;
      for (;;) {
        BitSet bx(n, x);
        Rat vx = mu(bx);
        if (vx > vy) {
          mon.pass = false;
          mon.witness = detail::eq_witness("mu(" + set_str(bx, names) + ")", vx,
                                           "mu(" + set_str(BitSet(n, y), names) + ")", vy) +
                        "; monotonicity fails";
          break;
        }
        if (x == 0) break;
        x = (x - 1) & y;
      }
    }
  } else {
    auto closure = definable_extent_closure(m);
    for (const auto& e : closure) {
      if (!mon.pass) break;
      for (const auto& f : closure) {
        if (e.pos.subset_of(f.pos) && mu(e.pos) > mu(f.pos)) {
          mon.pass = false;
          mon.witness = detail::eq_witness("mu(" + set_str(e.pos, names) + ")", mu(e.pos),
                                           "mu(" + set_str(f.pos, names) + ")", mu(f.pos)) +
                        "; monotonicity fails";
          break;
        }
      }
    }
  }
  out.push_back(mon);

  auto closure = definable_extent_closure(m);
  AuditReport neg{"neg", true, ""};
  for (const auto& e : closure) {
    Rat lhs = mu(e.neg);
    Rat rhs = mu(Extent{e.neg, e.pos}.pos);
    if (lhs != rhs) {
      neg.pass = false;
      neg.witness = detail::eq_witness("mu of a negative extent", lhs,
                                       "mu of the swapped positive extent", rhs);
      break;
    }
  }
  out.push_back(neg);

  AuditReport ex{"ex", true, ""};
  for (size_t i = 0; i < closure.size() && ex.pass; ++i) {
    for (size_t j = i; j < closure.size(); ++j) {
      const BitSet& p = closure[i].pos;
      const BitSet& q = closure[j].pos;
      Rat lhs = mu(p | q);
      Rat rhs = mu(p) + mu(q) - mu(p & q);
      if (lhs != rhs) {
        ex.pass = false;
        ex.witness = detail::eq_witness(
            "mu(" + set_str(p | q, names) + ")", lhs,
            "mu(" + set_str(p, names) + ") + mu(" + set_str(q, names) + ") - mu(" +
                set_str(p & q, names) + ")",
            rhs);
        break;
      }
    }
  }
  out.push_back(ex);
  return out;
}

// Modularity over arbitrary subsets, not just definable extents.  This is the
// stronger identity that two-sided probabilities need not satisfy.
inline AuditReport check_import_export(const BDModel& m, const Measure& mu) {
  AuditReport r{"ie", true, ""};
  if (m.size() > 12 || !mu.total()) {
    r.witness = "skipped: measure is not a total subset table";
    return r;
  }
  int n = m.size();
  for (uint32_t x = 0; x < (1u << n) && r.pass; ++x) {
    for (uint32_t y = x; y < (1u << n); ++y) {
      BitSet bx(n, x), by(n, y);
      Rat lhs = mu(bx | by);
      Rat rhs = mu(bx) + mu(by) - mu(bx & by);
      if (lhs != rhs) {
        r.pass = false;
        r.witness = detail::eq_witness(
            "mu(" + set_str(bx | by, m.worlds) + ")", lhs,
            "mu(" + set_str(bx, m.worlds) + ") + mu(" + set_str(by, m.worlds) +
                ") - mu(" + set_str(bx & by, m.worlds) + ")",
            rhs);
        break;
      }
    }
  }
  return r;
}

// Checks the five defining conditions of a four-valued probability over the
// cell decomposition of each definable extent.
inline std::vector<AuditReport> audit_four_probability(const BDModel& m,
                                                       const Measure& mu4) {
  std::vector<AuditReport> out;
  const auto& names = m.worlds;
  auto closure = definable_extent_closure(m);
  int n = m.size();
  auto bc = [&](const Extent& e) {
    FourExtent fe = four_cells(n, e);
    return mu4(fe.b) + mu4(fe.c);
  };

  AuditReport part{"part", true, ""};
  for (const auto& e : closure) {
    FourExtent fe = four_cells(n, e);
    Rat s = mu4(fe.b) + mu4(fe.d) + mu4(fe.u) + mu4(fe.c);
    if (s != 1) {
      part.pass = false;
      part.witness = "cells of the extent with positive part " +
                     set_str(e.pos, names) + " and negative part " +
                     set_str(e.neg, names) + " sum to " + rat_str(s);
      break;
    }
  }
  out.push_back(part);

  AuditReport neg{"neg", true, ""};
  for (const auto& e : closure) {
    FourExtent fe = four_cells(n, e);
    FourExtent fn = four_cells(n, Extent{e.neg, e.pos});
    if (mu4(fn.b) != mu4(fe.d)) {
      neg.pass = false;
      neg.witness = detail::eq_witness("mu4 of the negated pure-belief cell " +
                                           set_str(fn.b, names), mu4(fn.b),
                                       "mu4 of the pure-disbelief cell " +
                                           set_str(fe.d, names), mu4(fe.d));
      break;
    }
    if (mu4(fn.c) != mu4(fe.c)) {
      neg.pass = false;
      neg.witness = detail::eq_witness("mu4 of the negated conflict cell " +
                                           set_str(fn.c, names), mu4(fn.c),
                                       "mu4 of the conflict cell " +
                                           set_str(fe.c, names), mu4(fe.c));
      break;
    }
  }
  out.push_back(neg);

  AuditReport contr{"contr", true, ""};
  for (const auto& e : closure) {
    Extent conflict{e.pos & e.neg, e.pos | e.neg};
    FourExtent fc = four_cells(n, conflict);
    FourExtent fe = four_cells(n, e);
    if (mu4(fc.b) != 0) {
      contr.pass = false;
      contr.witness = "mu4 of the contradiction pure-belief cell " +
                      set_str(fc.b, names) + " = " + rat_str(mu4(fc.b));
      break;
    }
    if (mu4(fc.c) != mu4(fe.c)) {
      contr.pass = false;
      contr.witness = detail::eq_witness("mu4 of the contradiction conflict cell " +
                                             set_str(fc.c, names), mu4(fc.c),
                                         "mu4 of the conflict cell " +
                                             set_str(fe.c, names), mu4(fe.c));
      break;
    }
  }
  out.push_back(contr);

  AuditReport bcmon{"BCmon", true, ""};
  for (const auto& e : closure) {
    if (!bcmon.pass) break;
    for (const auto& f : closure) {
      if (!e.pos.subset_of(f.pos)) continue;
      if (bc(e) > bc(f)) {
        bcmon.pass = false;
        bcmon.witness = detail::eq_witness("belief+conflict mass above " +
                                               set_str(e.pos, names), bc(e),
                                           "belief+conflict mass above " +
                                               set_str(f.pos, names), bc(f)) +
                        "; monotonicity fails";
        break;
      }
    }
  }
  out.push_back(bcmon);

  AuditReport bcex{"BCex", true, ""};
  for (size_t i = 0; i < closure.size() && bcex.pass; ++i) {
    for (size_t j = i; j < closure.size(); ++j) {
      const Extent& e = closure[i];
      const Extent& f = closure[j];
      Extent meet{e.pos & f.pos, e.neg | f.neg};
      Extent join{e.pos | f.pos, e.neg & f.neg};
      Rat lhs = bc(e) + bc(f);
      Rat rhs = bc(meet) + bc(join);
      if (lhs != rhs) {
        bcex.pass = false;
        bcex.witness = detail::eq_witness(
            "belief+conflict masses of the pair (" + set_str(e.pos, names) + ", " +
                set_str(f.pos, names) + ")",
            lhs, "the same masses of their meet and join", rhs);
        break;
      }
    }
  }
  out.push_back(bcex);
  return out;
}

enum class TupleAuditPath { Auto, Tuples, Moebius };

namespace detail {

// Checks the order-k inequality family for belief (dir=+1, unions on the big
// side) or plausibility (dir=-1): j-tuples of distinct subsets for j=2..k.
inline bool tuple_monotone(const Measure& mu, int k, bool belief_side,
                           std::string& witness) {
  int n = mu.n;
  uint32_t full = (1u << n);
  // enumerate combinations of distinct subsets, lexicographic by mask value
  for (int j = 2; j <= k; ++j) {
    std::vector<uint32_t> c(j);
    for (int i = 0; i < j; ++i) c[i] = i;
    if (c.back() >= full) break;
    for (;;) {
      // evaluate the inequality for subsets c[0..j-1]
      uint32_t u = 0, v = ~0u;
      for (int i = 0; i < j; ++i) {
        u |= c[i];
        v &= c[i];
      }
      Rat big = belief_side ? mu(BitSet(n, u)) : mu(BitSet(n, v & (full - 1)));
      Rat sum = 0;
      for (uint32_t mask = 1; mask < (1u << j); ++mask) {
        uint32_t inter = ~0u, uni = 0;
        for (int i = 0; i < j; ++i)
          if (mask & (1u << i)) {
            inter &= c[i];
            uni |= c[i];
          }
        Rat term = belief_side ? mu(BitSet(n, inter & (full - 1)))
                               : mu(BitSet(n, uni));
        if (__builtin_popcount(mask) % 2 == 1)
          sum += term;
        else
          sum -= term;
      }
      bool ok = belief_side ? big >= sum : big <= sum;
      if (!ok) {
        witness = "order-" + std::to_string(j) + " inequality fails on sets";
        for (int i = 0; i < j; ++i)
          witness += " " + set_str(BitSet(n, c[i]), mu.names);
        witness += ": " + rat_str(big) + (belief_side ? " < " : " > ") + rat_str(sum);
        return false;
      }
      // next combination
      int i = j - 1;
      while (i >= 0 && c[i] == full - static_cast<uint32_t>(j - i)) --i;
      if (i < 0) break;
      ++c[i];
      for (int t = i + 1; t < j; ++t) c[t] = c[t - 1] + 1;
    }
  }
  return true;
}

}  // namespace detail

// Belief audit: normalization, monotonicity, and the order-k monotonicity
// inequalities.  At full order k=|W| the Moebius route decides the same
// property exactly.
inline AuditReport audit_belief(const Measure& mu, int k,
                                TupleAuditPath path = TupleAuditPath::Auto) {
  AuditReport r{"belief-order-" + std::to_string(k), true, ""};
  int n = mu.n;
  if (k > n) throw input_error("audit order exceeds the number of worlds");
  if (!mu.total() && mu.kind == Measure::Kind::Subsets)
    throw input_error("belief audit requires a total measure");

  BitSet empty(n), whole = BitSet::full(n);
  if (mu(empty) != 0) {
    r.pass = false;
    r.witness = "value on the empty set is " + rat_str(mu(empty));
    return r;
  }
  if (mu(whole) != 1) {
    r.pass = false;
    r.witness = "value on the whole space is " + rat_str(mu(whole));
    return r;
  }
  for (uint32_t y = 0; y < (1u << n); ++y) {
    Rat vy = mu(BitSet(n, y));
    if (!in_unit(vy)) {
      r.pass = false;
      r.witness = "value outside [0,1] on " + set_str(BitSet(n, y), mu.names);
      return r;
    }
    for (uint32_t x = y; x != 0; x = (x - 1) & y) {
      if (mu(BitSet(n, x)) > vy) {
        r.pass = false;
        r.witness = detail::eq_witness("value on " + set_str(BitSet(n, x), mu.names),
                                       mu(BitSet(n, x)),
                                       "value on " + set_str(BitSet(n, y), mu.names),
                                       vy) +
                    "; monotonicity fails";
        return r;
      }
    }
  }

  bool use_moebius = path == TupleAuditPath::Moebius ||
                     (path == TupleAuditPath::Auto && k == n);
  if (use_moebius) {
    if (k != n) throw input_error("the Moebius route decides full order only");
    for (const auto& [a, v] : moebius_of(mu)) {
      if (v < 0) {
        r.pass = false;
        r.witness = "Moebius coefficient of " + set_str(a, mu.names) + " is " +
                    rat_str(v);
        return r;
      }
    }
    return r;
  }
  std::string w;
  if (!detail::tuple_monotone(mu, k, true, w)) {
    r.pass = false;
    r.witness = w;
  }
  return r;
}

inline AuditReport audit_plausibility(const Measure& mu, int k,
                                      TupleAuditPath path = TupleAuditPath::Auto) {
  AuditReport r{"plausibility-order-" + std::to_string(k), true, ""};
  int n = mu.n;
  if (k > n) throw input_error("audit order exceeds the number of worlds");
  if (!mu.total() && mu.kind == Measure::Kind::Subsets)
    throw input_error("plausibility audit requires a total measure");

  BitSet empty(n), whole = BitSet::full(n);
  if (mu(empty) != 0) {
    r.pass = false;
    r.witness = "value on the empty set is " + rat_str(mu(empty));
    return r;
  }
  if (mu(whole) != 1) {
    r.pass = false;
    r.witness = "value on the whole space is " + rat_str(mu(whole));
    return r;
  }
  for (uint32_t y = 0; y < (1u << n); ++y) {
    Rat vy = mu(BitSet(n, y));
    if (!in_unit(vy)) {
      r.pass = false;
      r.witness = "value outside [0,1] on " + set_str(BitSet(n, y), mu.names);
      return r;
    }
    for (uint32_t x = y; x != 0; x = (x - 1) & y) {
      if (mu(BitSet(n, x)) > vy) {
        r.pass = false;
        r.witness = detail::eq_witness("value on " + set_str(BitSet(n, x), mu.names),
                                       mu(BitSet(n, x)),
                                       "value on " + set_str(BitSet(n, y), mu.names),
                                       vy) +
                    "; monotonicity fails";
        return r;
      }
    }
  }

  bool use_moebius = path == TupleAuditPath::Moebius ||
                     (path == TupleAuditPath::Auto && k == n);
  if (use_moebius) {
    if (k != n) throw input_error("the Moebius route decides full order only");
    // dual belief: q(X) = 1 - pl(complement of X)
    std::map<BitSet, Rat> q;
    for (uint32_t a = 0; a < (1u << n); ++a) {
      BitSet ba(n, a);
      q[ba] = 1 - mu(ba.complement());
    }
    Measure dual = Measure::subsets(n, std::move(q), mu.names);
    for (const auto& [a, v] : moebius_of(dual)) {
      if (v < 0) {
        r.pass = false;
        r.witness = "dual Moebius coefficient of " + set_str(a, mu.names) +
                    " is " + rat_str(v);
        return r;
      }
    }
    return r;
  }
  std::string w;
  if (!detail::tuple_monotone(mu, k, false, w)) {
    r.pass = false;
    r.witness = w;
  }
  return r;
}

// Pointwise dual over the definable extents: for each extent pair (P, N) the
// value 1 - bel(N), the plausibility that the underlying formula is non-false.
inline std::vector<std::pair<Extent, Rat>> dual_pl_of_bel(const BDModel& m,
                                                          const Measure& bel) {
  std::vector<std::pair<Extent, Rat>> out;
  for (const auto& e : definable_extent_closure(m))
    out.push_back({e, 1 - bel(e.neg)});
  return out;
}

}  // namespace bdtl
