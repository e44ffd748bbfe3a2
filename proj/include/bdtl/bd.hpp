#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bdtl/formula.hpp"

namespace bdtl {

struct BDModel {
  std::vector<std::string> worlds;
  std::map<std::string, BitSet> vplus, vminus;

  int size() const { return static_cast<int>(worlds.size()); }

  int world_index(const std::string& w) const {
    for (size_t i = 0; i < worlds.size(); ++i)
      if (worlds[i] == w) return static_cast<int>(i);
    throw input_error("unknown world: " + w);
  }

  std::set<std::string> variables() const {
    std::set<std::string> s;
    for (const auto& [k, _] : vplus) s.insert(k);
    for (const auto& [k, _] : vminus) s.insert(k);
    return s;
  }

  void declare(const std::string& var) {
    if (!vplus.count(var)) vplus[var] = BitSet(size());
    if (!vminus.count(var)) vminus[var] = BitSet(size());
  }
};

struct Extent {
  BitSet pos, neg;
};

inline Extent bd_extents(const BDModel& m, const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var: {
      auto p = m.vplus.find(f->name);
      auto q = m.vminus.find(f->name);
      if (p == m.vplus.end() && q == m.vminus.end())
        throw input_error("variable '" + f->name + "' is not declared in the model");
      BitSet pos = p != m.vplus.end() ? p->second : BitSet(m.size());
      BitSet neg = q != m.vminus.end() ? q->second : BitSet(m.size());
      return {pos, neg};
    }
    case BDKind::Neg: {
      Extent e = bd_extents(m, f->a);
      return {e.neg, e.pos};
    }
    case BDKind::And: {
      Extent l = bd_extents(m, f->a), r = bd_extents(m, f->b);
      return {l.pos & r.pos, l.neg | r.neg};
    }
    case BDKind::Or: {
      Extent l = bd_extents(m, f->a), r = bd_extents(m, f->b);
      return {l.pos | r.pos, l.neg & r.neg};
    }
    case BDKind::Box:
    case BDKind::Dia:
      throw input_error("modal formula evaluated on a plain model without a relation");
  }
  throw internal_error("bad BD node");
}

// The four cells carved out of W by a formula's extents.
struct FourExtent {
  BitSet b, d, c, u;
};

inline FourExtent four_cells(int n, const Extent& e) {
  FourExtent r;
  r.b = e.pos.minus(e.neg);
  r.d = e.neg.minus(e.pos);
  r.c = e.pos & e.neg;
  r.u = BitSet::full(n).minus(e.pos | e.neg);
  return r;
}

inline FourExtent bd_four_extents(const BDModel& m, const BDRef& f) {
  return four_cells(m.size(), bd_extents(m, f));
}

// Four-valued single-world evaluation: (pos, neg) truth bits.
struct FourVal {
  bool pos, neg;
};

inline FourVal bd_eval4(const std::map<std::string, FourVal>& v, const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var: {
      auto it = v.find(f->name);
      if (it == v.end()) throw input_error("unassigned variable: " + f->name);
      return it->second;
    }
    case BDKind::Neg: {
      FourVal x = bd_eval4(v, f->a);
      return {x.neg, x.pos};
    }
    case BDKind::And: {
      FourVal x = bd_eval4(v, f->a), y = bd_eval4(v, f->b);
      return {x.pos && y.pos, x.neg || y.neg};
    }
    case BDKind::Or: {
      FourVal x = bd_eval4(v, f->a), y = bd_eval4(v, f->b);
      return {x.pos || y.pos, x.neg && y.neg};
    }
    default:
      throw input_error("modal formula in a propositional entailment check");
  }
}

// phi entails chi over Belnap-Dunn logic: truth is preserved under every
// four-valued valuation. Decidable by enumerating 4^n valuations.
inline bool bd_entails(const BDRef& phi, const BDRef& chi) {
  std::set<std::string> vars = bd_vars(phi);
  bd_vars_into(chi, vars);
  std::vector<std::string> vs(vars.begin(), vars.end());
  if (vs.size() > 12)
    throw input_error("entailment check limited to 12 variables");
  long total = 1L << (2 * vs.size());
  std::map<std::string, FourVal> assign;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (const auto& name : vs) {
      assign[name] = {(c & 1) != 0, (c & 2) != 0};
      c >>= 2;
    }
    if (bd_eval4(assign, phi).pos && !bd_eval4(assign, chi).pos) return false;
  }
  return true;
}

inline bool bd_equiv(const BDRef& phi, const BDRef& chi) {
  return bd_entails(phi, chi) && bd_entails(chi, phi);
}

// 32-bit positive/negative truth-table signature over the shared variables,
// used to bucket formulas up to semantic equivalence (<= 2 variables).
inline uint64_t bd_signature(const BDRef& f, const std::vector<std::string>& vs) {
  if (vs.size() > 3) throw internal_error("signature limited to 3 variables");
  long total = 1L << (2 * vs.size());
  uint64_t sig = 0;
  std::map<std::string, FourVal> assign;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (const auto& name : vs) {
      assign[name] = {(c & 1) != 0, (c & 2) != 0};
      c >>= 2;
    }
    FourVal r = bd_eval4(assign, f);
    if (r.pos) sig |= uint64_t(1) << (2 * code);
    if (r.neg) sig |= uint64_t(1) << (2 * code + 1);
  }
  return sig;
}

// Smallest family of extent pairs containing the variables' extents and closed
// under the connective clauses.
inline std::vector<Extent> definable_extent_closure(const BDModel& m,
                                                    size_t guard = 4096) {
  std::set<std::pair<BitSet, BitSet>> seen;
  std::vector<Extent> work;
  auto push = [&](const Extent& e) {
    if (seen.insert({e.pos, e.neg}).second) {
      work.push_back(e);
      if (seen.size() > guard)
        throw input_error("definable extent closure exceeds guard");
    }
  };
  for (const auto& var : m.variables()) push(bd_extents(m, bd_var(var)));
  for (size_t i = 0; i < work.size(); ++i) {
    Extent e = work[i];
    push({e.neg, e.pos});
    for (size_t j = 0; j <= i; ++j) {
      Extent f = work[j];
      push({e.pos & f.pos, e.neg | f.neg});
      push({e.pos | f.pos, e.neg & f.neg});
      push({f.pos & e.pos, f.neg | e.neg});
      push({f.pos | e.pos, f.neg & e.neg});
    }
  }
  return work;
}

}  // namespace bdtl
