#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bdtl/linarith.hpp"
#include "bdtl/random_gen.hpp"
#include "bdtl/tableau.hpp"
#include "bdtl/translate.hpp"
#include "bdtl/twolayer.hpp"

namespace bdtl {

enum class Outcome { Valid, NotValid, Unknown };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Valid: return "valid";
    case Outcome::NotValid: return "not-valid";
    default: return "unknown";
  }
}

struct DecideOptions {
  bool exhaustive = true;
  uint64_t seed = 1;
  long budget = 400;
  long support = 0;  // randomized support-list size; 0 takes the theorem bound
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::string mode = "exhaustive";
  std::optional<TLModel> countermodel;
  std::map<std::string, OuterValue> atom_values;
  std::string witness_branch;
  long branches = 0;
  long lp_calls = 0;
  std::string note;
};

namespace detail {

inline bool bd_modal_free(const BDRef& f) {
  if (f->kind == BDKind::Box || f->kind == BDKind::Dia) return false;
  if (f->a && !bd_modal_free(f->a)) return false;
  if (f->b && !bd_modal_free(f->b)) return false;
  return true;
}

inline void check_atom(LogicId logic, const ORef& a) {
  auto bad = [&](const std::string& why) {
    throw input_error("atom " + o_str(a) + " does not belong to " +
                      std::string(logic_name(logic)) + ": " + why);
  };
  auto plain_body = [&](bool want) {
    if (want != bd_modal_free(a->body))
      bad(want ? "the body must not contain box or dia"
               : "the body must start with box or dia");
  };
  switch (logic) {
    case LogicId::LukDelta:
    case LogicId::Luk2Delta:
    case LogicId::NLuk:
      if (a->tag != Tag::Var) bad("the logic is propositional");
      return;
    case LogicId::PrLuk2:
      if (a->tag != Tag::Pr) bad("only Pr atoms are available");
      plain_body(true);
      return;
    case LogicId::FourPr:
      if (a->tag != Tag::Bl && a->tag != Tag::Db && a->tag != Tag::Cf &&
          a->tag != Tag::Uc)
        bad("only Bl/Db/Cf/Uc atoms are available");
      plain_body(true);
      return;
    case LogicId::BelLuk2:
      if (a->tag != Tag::B) bad("only B atoms are available");
      plain_body(true);
      return;
    case LogicId::BelNLuk:
      if (a->tag != Tag::B && a->tag != Tag::Pl)
        bad("only B and Pl atoms are available");
      plain_body(true);
      return;
    case LogicId::ProbS5: {
      if (a->tag != Tag::Pr) bad("only Pr atoms are available");
      const BDRef& b = a->body;
      if (b->kind != BDKind::Box && b->kind != BDKind::Dia)
        bad("the body must start with box or dia");
      if (b->rel != 1) bad("only relation 1 exists here");
      if (!bd_modal_free(b->a)) bad("modalities do not nest");
      return;
    }
    case LogicId::ProbNLukS5: {
      if (a->tag != Tag::Pr1 && a->tag != Tag::Pr2)
        bad("only Pr1 and Pr2 atoms are available");
      const BDRef& b = a->body;
      if (b->kind != BDKind::Box && b->kind != BDKind::Dia)
        bad("the body must start with box or dia");
      int want = a->tag == Tag::Pr1 ? 1 : 2;
      if (b->rel != want) bad("the modality index must match the measure index");
      if (!bd_modal_free(b->a)) bad("modalities do not nest");
      return;
    }
  }
  throw internal_error("bad logic id");
}

inline void check_language(LogicId logic, const ORef& f) {
  bool nluk = is_nluk_family(logic);
  auto foreign = [&](const char* what) {
    throw input_error(std::string(what) + " is not part of the language of " +
                      std::string(logic_name(logic)));
  };
  switch (f->kind) {
    case OKind::Atom:
      check_atom(logic, f);
      return;
    case OKind::BDNeg:
      if (logic == LogicId::LukDelta || logic == LogicId::FourPr)
        foreign("outer negation");
      break;
    case OKind::LukNeg:
    case OKind::Delta:
    case OKind::Impl:
      if (nluk) foreign("the Lukasiewicz connective");
      break;
    case OKind::NNeg:
    case OKind::NImpl:
    case OKind::And:
      if (!nluk) foreign("the weak connective");
      break;
  }
  if (f->a) check_language(logic, f->a);
  if (f->b) check_language(logic, f->b);
}

// Literal complement of a starred variable: the renamed negative half and the
// plain positive half swap.
inline std::string star_complement(const std::string& v) {
  if (v.size() > 3 && v.compare(v.size() - 3, 3, "__1") == 0)
    return v.substr(0, v.size() - 3);
  return v + "__1";
}

// On negation-free bodies over starred variables the negative extent equals
// the positive extent of the literal dual, with conjunction and disjunction
// swapped, once the model mirrors negative extents onto the starred halves.
inline BDRef star_dual(const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var: return bd_var(star_complement(f->name));
    case BDKind::And: return bd_or(star_dual(f->a), star_dual(f->b));
    case BDKind::Or: return bd_and(star_dual(f->a), star_dual(f->b));
    default: throw internal_error("the literal dual needs a negation-free body");
  }
}

inline bool profile_sat(const BDRef& f, uint64_t w,
                        const std::map<std::string, int>& ix) {
  switch (f->kind) {
    case BDKind::Var: {
      auto it = ix.find(f->name);
      if (it == ix.end())
        throw internal_error("profile index misses " + f->name);
      return (w >> it->second) & 1;
    }
    case BDKind::And: return profile_sat(f->a, w, ix) && profile_sat(f->b, w, ix);
    case BDKind::Or: return profile_sat(f->a, w, ix) || profile_sat(f->b, w, ix);
    default:
      throw internal_error("profile satisfaction needs a negation-free body");
  }
}

// States of the cluster machinery are literal sets: bit 2j holds the positive
// literal of variable j, bit 2j+1 the negative one.
inline bool state_neg_lit(const BDRef& f, uint64_t st,
                          const std::map<std::string, int>& ix);

inline bool state_pos_lit(const BDRef& f, uint64_t st,
                          const std::map<std::string, int>& ix) {
  switch (f->kind) {
    case BDKind::Var: return (st >> (2 * ix.at(f->name))) & 1;
    case BDKind::Neg: return state_neg_lit(f->a, st, ix);
    case BDKind::And:
      return state_pos_lit(f->a, st, ix) && state_pos_lit(f->b, st, ix);
    case BDKind::Or:
      return state_pos_lit(f->a, st, ix) || state_pos_lit(f->b, st, ix);
    default: throw internal_error("nested modality below a modal atom");
  }
}

inline bool state_neg_lit(const BDRef& f, uint64_t st,
                          const std::map<std::string, int>& ix) {
  switch (f->kind) {
    case BDKind::Var: return (st >> (2 * ix.at(f->name) + 1)) & 1;
    case BDKind::Neg: return state_pos_lit(f->a, st, ix);
    case BDKind::And:
      return state_neg_lit(f->a, st, ix) || state_neg_lit(f->b, st, ix);
    case BDKind::Or:
      return state_neg_lit(f->a, st, ix) && state_neg_lit(f->b, st, ix);
    default: throw internal_error("nested modality below a modal atom");
  }
}

// Depth-first walk over the complete branches, one at a time, so branch
// counts exponential in the formula size never sit in memory at once.  The
// visitor returns true to stop early (a countermodel was found).
template <typename Fn>
bool for_each_branch(const Branch& root, Calculus calc, Fn&& fn,
                     long budget = 1L << 20) {
  std::vector<Branch> stack{root};
  long done = 0;
  while (!stack.empty()) {
    Branch b = std::move(stack.back());
    stack.pop_back();
    if (b.complete()) {
      if (++done > budget) throw input_error("branch budget exhausted");
      if (fn(static_cast<const Branch&>(b))) return true;
      continue;
    }
    std::vector<Branch> next = expand(b, calc);
    for (auto it = next.rbegin(); it != next.rend(); ++it)
      stack.push_back(std::move(*it));
  }
  return false;
}

// Greedy support reduction: weight groups are pinned to zero smallest-first
// as long as the system stays feasible, so countermodels come out small.
inline Feasibility sparsify(LinSystem& sys, Feasibility fz,
                            const std::vector<std::vector<std::string>>& groups,
                            long& lp_calls) {
  auto weight = [&](const std::vector<std::string>& g) {
    Rat s = 0;
    for (const std::string& v : g) {
      auto it = fz.witness.find(v);
      if (it != fz.witness.end()) s += it->second;
    }
    return s;
  };
  std::vector<size_t> order;
  for (size_t k = 0; k < groups.size(); ++k)
    if (weight(groups[k]) > 0) order.push_back(k);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    Rat wa = weight(groups[a]), wb = weight(groups[b]);
    return wa != wb ? wa < wb : a < b;
  });
  for (size_t k : order) {
    if (weight(groups[k]) == 0) continue;
    LinSystem trial = sys;
    for (const std::string& v : groups[k])
      trial.add(LinExpr::var(v), Rel::Le, LinExpr::constant(0));
    ++lp_calls;
    Feasibility next = feasible(trial);
    if (next.ok) {
      sys = std::move(trial);
      fz = std::move(next);
    }
  }
  return fz;
}

// Checks the claimed countermodel against the original sequent and stores it
// together with the values of every atom occurring in the sequent.
inline void attach_countermodel(Verdict& out, LogicId logic, TLModel m,
                                const std::vector<ORef>& premises,
                                const ORef& alpha) {
  for (const ORef& g : premises)
    if (!designated(logic, tl_eval(m, g)))
      throw internal_error("countermodel drops the premise " + o_str(g));
  if (designated(logic, tl_eval(m, alpha)))
    throw internal_error("countermodel fails to refute " + o_str(alpha));
  for (const ORef& f : premises)
    for (const ORef& a : o_atoms(f))
      out.atom_values.emplace(o_str(a), tl_eval(m, a));
  for (const ORef& a : o_atoms(alpha))
    out.atom_values.emplace(o_str(a), tl_eval(m, a));
  out.countermodel = std::move(m);
  out.outcome = Outcome::NotValid;
}

struct EngineModel {
  BDModel base;
  Measure mu;
};

struct EngineResult {
  Outcome outcome = Outcome::Unknown;
  std::optional<EngineModel> model;
  std::string branch;
  long branches = 0;
  long lp_calls = 0;
  std::string note;
};

// Branch closure for starred measure formulas: the branch constraints are
// joined with one weight per positive-profile of the starred variables, the
// total weight pinned to one, and each atomic side variable tied to the mass
// of the profiles satisfying its body (the literal dual of it on side two).
// A feasible branch maps straight back to a model over the original
// variables: the profile bit of a plain variable lands in the positive
// extent, the bit of a starred half in the negative extent of its base.
inline EngineResult measure_engine(const Branch& root,
                                   const std::vector<std::string>& declare_vars,
                                   const DecideOptions& opt) {
  EngineResult out;
  std::set<std::string> pv;
  bool dual = false;
  for (const LabelledEntry& e : root.entries) {
    for (const std::string& v : o_inner_vars(e.formula)) pv.insert(v);
    if (e.side == 2) dual = true;
  }
  if (dual) {
    std::set<std::string> comp;
    for (const std::string& v : pv) comp.insert(star_complement(v));
    pv.insert(comp.begin(), comp.end());
  }
  std::vector<std::string> P(pv.begin(), pv.end());
  if (P.size() > 62)
    throw input_error("too many starred variables for profile weights");
  std::map<std::string, int> ix;
  for (size_t j = 0; j < P.size(); ++j) ix[P[j]] = static_cast<int>(j);

  auto ties_of = [&](const BranchSystem& bs) {
    std::vector<std::pair<std::string, BDRef>> ties;
    for (const auto& [name, av] : bs.atoms)
      ties.push_back({name, av.second == 1 ? av.first->body
                                           : star_dual(av.first->body)});
    return ties;
  };

  auto build_model = [&](const std::map<std::string, Rat>& w,
                         const std::vector<std::pair<std::string, uint64_t>>&
                             weights) {
    EngineModel em;
    std::vector<Rat> mass;
    std::vector<uint64_t> masks;
    for (const auto& [uv, mask] : weights) {
      auto it = w.find(uv);
      if (it == w.end() || it->second == 0) continue;
      mass.push_back(it->second);
      masks.push_back(mask);
    }
    for (uint64_t mask : masks) {
      std::string bits(P.size(), '0');
      for (size_t j = 0; j < P.size(); ++j)
        if ((mask >> j) & 1) bits[j] = '1';
      em.base.worlds.push_back("w" + (bits.empty() ? "0" : bits));
    }
    for (const std::string& v : declare_vars) em.base.declare(v);
    for (size_t widx = 0; widx < masks.size(); ++widx) {
      for (size_t j = 0; j < P.size(); ++j) {
        if (!((masks[widx] >> j) & 1)) continue;
        bool negated =
            P[j].size() > 3 && P[j].compare(P[j].size() - 3, 3, "__1") == 0;
        std::string base = negated ? P[j].substr(0, P[j].size() - 3) : P[j];
        auto& extent = negated ? em.base.vminus : em.base.vplus;
        auto it = extent.find(base);
        if (it == extent.end())
          throw internal_error("profile variable " + P[j] + " is undeclared");
        it->second.set(static_cast<int>(widx));
      }
    }
    em.mu = Measure::atoms(std::move(mass), em.base.worlds);
    return em;
  };

  auto close_with = [&](const Branch& b, const BranchSystem& bs,
                        const std::vector<std::pair<std::string, BDRef>>& ties,
                        const std::vector<std::pair<std::string, uint64_t>>&
                            columns) -> bool {
    LinSystem sys = bs.system;
    LinExpr total;
    for (const auto& [uv, mask] : columns) total += LinExpr::var(uv);
    sys.add(std::move(total), Rel::Eq, LinExpr::constant(1));
    for (const auto& [tv, body] : ties) {
      LinExpr s;
      for (const auto& [uv, mask] : columns)
        if (profile_sat(body, mask, ix)) s += LinExpr::var(uv);
      sys.add(std::move(s), Rel::Eq, LinExpr::var(tv));
    }
    ++out.lp_calls;
    Feasibility fz = feasible(sys);
    if (!fz.ok) return false;
    std::vector<std::vector<std::string>> groups;
    for (const auto& [uv, mask] : columns) groups.push_back({uv});
    fz = sparsify(sys, std::move(fz), groups, out.lp_calls);
    if (!branch_satisfied(b, fz.witness, Calculus::Luk2))
      throw internal_error("open branch rejects its own witness");
    out.model = build_model(fz.witness, columns);
    out.branch = b.id;
    out.outcome = Outcome::NotValid;
    return true;
  };

  if (opt.exhaustive) {
    if (P.size() > 10)
      throw input_error(
          "exhaustive profile enumeration is limited to 10 starred variables; "
          "rerun with the randomized mode");
    // profiles with the same satisfaction pattern share one weight column;
    // branches with the same atom set share the whole column construction
    std::map<std::string, std::vector<std::pair<std::string, uint64_t>>> cache;
    bool found = for_each_branch(root, Calculus::Luk2, [&](const Branch& b) {
      ++out.branches;
      BranchSystem bs = branch_to_constraints(b);
      auto ties = ties_of(bs);
      std::string ckey;
      for (const auto& [tv, body] : ties) {
        ckey += tv;
        ckey += '|';
      }
      auto [slot, fresh] = cache.try_emplace(std::move(ckey));
      auto& columns = slot->second;
      if (fresh) {
        std::set<std::string> seen;
        uint64_t masks = uint64_t(1) << P.size();
        uint64_t patterns = ties.size() < 20 ? uint64_t(1) << ties.size()
                                             : masks;
        for (uint64_t m = 0; m < masks; ++m) {
          std::string pat(ties.size(), '0');
          for (size_t t = 0; t < ties.size(); ++t)
            if (profile_sat(ties[t].second, m, ix)) pat[t] = '1';
          if (seen.insert(pat).second)
            columns.push_back({"u_" + std::to_string(columns.size()), m});
          if (columns.size() >= patterns) break;
        }
      }
      return close_with(b, bs, ties, columns);
    });
    if (!found) out.outcome = Outcome::Valid;
    return out;
  }

  std::mt19937_64 rng(opt.seed);
  for (long it = 0; it < opt.budget; ++it) {
    ++out.branches;
    Branch b = random_branch(root, Calculus::Luk2, rng);
    BranchSystem bs = branch_to_constraints(b);
    auto ties = ties_of(bs);
    long want = opt.support > 0
                    ? opt.support
                    : static_cast<long>(bs.system.constraints.size()) +
                          static_cast<long>(ties.size()) + 1;
    uint64_t space = uint64_t(1) << P.size();
    if (want > static_cast<long>(space)) want = static_cast<long>(space);
    std::set<uint64_t> chosen;
    for (long a = 0; a < 64 * want && static_cast<long>(chosen.size()) < want;
         ++a)
      chosen.insert(rng() % space);
    std::vector<std::pair<std::string, uint64_t>> columns;
    for (uint64_t m : chosen)
      columns.push_back({"u_" + std::to_string(columns.size()), m});
    if (close_with(b, bs, ties, columns)) return out;
  }
  out.outcome = Outcome::Unknown;
  out.note = "no countermodel within the budget; leaning valid";
  return out;
}

struct S5EngineResult {
  Outcome outcome = Outcome::Unknown;
  std::optional<KripkeModel> model;
  std::string branch;
  long branches = 0;
  long lp_calls = 0;
  std::string note;
};

struct ClusterTie {
  std::string lpvar;
  int measure = 1;
  int side = 1;
  bool box = true;
  BDRef inner;
};

// Branch closure for modal measure formulas: weights live on clusters of
// literal states, one independent distribution per measure index.  A modal
// atom is cluster-uniform, so its side variable ties to the mass of the
// clusters where the box body holds at every state (respectively, where the
// dia body holds somewhere; negative extents dualize).  Feasible weights
// become a disjoint union of the support clusters.
inline S5EngineResult s5_engine(const Branch& root, Calculus calc, int measures,
                                std::vector<std::string> vars,
                                const DecideOptions& opt) {
  S5EngineResult out;
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::map<std::string, int> ix;
  for (size_t j = 0; j < vars.size(); ++j) ix[vars[j]] = static_cast<int>(j);
  int lits = 2 * static_cast<int>(vars.size());
  if (lits >= 62) throw input_error("too many variables for literal states");

  std::set<std::string> atom_keys;
  for (const LabelledEntry& e : root.entries)
    for (const ORef& a : o_atoms(e.formula)) atom_keys.insert(o_str(a));
  int bound = 2 * static_cast<int>(atom_keys.size()) + 1;

  auto tie_of = [&](const std::string& lpvar, const ORef& atom,
                    int side) -> ClusterTie {
    const BDRef& b = atom->body;
    if (b->kind != BDKind::Box && b->kind != BDKind::Dia)
      throw internal_error("cluster coherence needs box or dia atom bodies");
    return {lpvar, atom->tag == Tag::Pr2 ? 2 : 1, side,
            b->kind == BDKind::Box, b->a};
  };

  auto tie_bit = [&](const ClusterTie& t, const std::vector<uint64_t>& cluster) {
    bool want_all = t.side == 1 ? t.box : !t.box;
    for (uint64_t st : cluster) {
      bool v = t.side == 1 ? state_pos_lit(t.inner, st, ix)
                           : state_neg_lit(t.inner, st, ix);
      if (want_all && !v) return false;
      if (!want_all && v) return true;
    }
    return want_all;
  };

  auto bits_of_state = [&](uint64_t st) {
    if (lits == 0) return std::string("e");
    std::string s(lits, '0');
    for (int j = 0; j < lits; ++j)
      if ((st >> j) & 1) s[j] = '1';
    return s;
  };

  struct Column {
    std::string u1, u2;
    std::vector<uint64_t> states;
  };

  auto build_model = [&](const std::map<std::string, Rat>& w,
                         const std::vector<Column>& columns) {
    auto look = [&](const std::string& v) {
      auto it = w.find(v);
      return it == w.end() ? Rat(0) : it->second;
    };
    std::vector<std::pair<const Column*, std::pair<Rat, Rat>>> chosen;
    int total = 0;
    for (const Column& c : columns) {
      Rat m1 = look(c.u1);
      Rat m2 = measures == 2 ? look(c.u2) : Rat(0);
      if (m1 == 0 && m2 == 0) continue;
      chosen.push_back({&c, {m1, m2}});
      total += static_cast<int>(c.states.size());
    }
    KripkeModel km;
    int ci = 0;
    for (const auto& [col, mm] : chosen) {
      for (uint64_t st : col->states)
        km.base.worlds.push_back("c" + std::to_string(ci) + "@" +
                                 bits_of_state(st));
      ++ci;
    }
    for (const std::string& v : vars) km.base.declare(v);
    std::vector<Rat> w1, w2;
    int widx = 0;
    for (const auto& [col, mm] : chosen) {
      BitSet block(total);
      Rat sz(static_cast<long>(col->states.size()));
      for (uint64_t st : col->states) {
        for (size_t j = 0; j < vars.size(); ++j) {
          if ((st >> (2 * j)) & 1) km.base.vplus[vars[j]].set(widx);
          if ((st >> (2 * j + 1)) & 1) km.base.vminus[vars[j]].set(widx);
        }
        block.set(widx);
        w1.push_back(mm.first / sz);
        if (measures == 2) w2.push_back(mm.second / sz);
        ++widx;
      }
      km.part1.push_back(block);
      if (measures == 2) km.part2.push_back(block);
    }
    km.pi1 = Measure::atoms(std::move(w1), km.base.worlds);
    if (measures == 2) km.pi2 = Measure::atoms(std::move(w2), km.base.worlds);
    km.validate();
    return km;
  };

  auto close_with = [&](const Branch& b, const BranchSystem& bs,
                        const std::vector<ClusterTie>& ties,
                        const std::vector<Column>& columns) -> bool {
    LinSystem sys = bs.system;
    for (int m = 1; m <= measures; ++m) {
      LinExpr total;
      for (const Column& c : columns)
        total += LinExpr::var(m == 1 ? c.u1 : c.u2);
      sys.add(std::move(total), Rel::Eq, LinExpr::constant(1));
    }
    for (const ClusterTie& t : ties) {
      LinExpr s;
      for (const Column& c : columns)
        if (tie_bit(t, c.states))
          s += LinExpr::var(t.measure == 1 ? c.u1 : c.u2);
      sys.add(std::move(s), Rel::Eq, LinExpr::var(t.lpvar));
    }
    ++out.lp_calls;
    Feasibility fz = feasible(sys);
    if (!fz.ok) return false;
    std::vector<std::vector<std::string>> groups;
    for (const Column& c : columns) {
      std::vector<std::string> g{c.u1};
      if (measures == 2) g.push_back(c.u2);
      groups.push_back(std::move(g));
    }
    fz = sparsify(sys, std::move(fz), groups, out.lp_calls);
    if (!branch_satisfied(b, fz.witness, calc))
      throw internal_error("open branch rejects its own witness");
    out.model = build_model(fz.witness, columns);
    out.branch = b.id;
    out.outcome = Outcome::NotValid;
    return true;
  };

  auto make_column = [&](size_t k, std::vector<uint64_t> states) {
    Column c;
    c.u1 = "m1_" + std::to_string(k);
    c.u2 = "m2_" + std::to_string(k);
    c.states = std::move(states);
    return c;
  };

  if (opt.exhaustive) {
    if (vars.size() > 2)
      throw input_error(
          "exhaustive cluster enumeration is limited to 2 variables; rerun "
          "with the randomized mode");
    uint32_t sc = 1u << lits;
    int cap = std::min<int>(bound, static_cast<int>(sc));
    // clusters ascending by size; equal tie patterns share one column and
    // branches with the same atom set share the whole column construction
    std::map<std::string, std::vector<Column>> cache;
    bool found = for_each_branch(root, calc, [&](const Branch& b) {
      ++out.branches;
      BranchSystem bs = branch_to_constraints(b);
      std::vector<ClusterTie> ties;
      for (const auto& [name, av] : bs.atoms)
        ties.push_back(tie_of(name, av.first, av.second));
      std::string ckey;
      for (const ClusterTie& t : ties) {
        ckey += t.lpvar;
        ckey += '|';
      }
      auto [slot, fresh] = cache.try_emplace(std::move(ckey));
      auto& columns = slot->second;
      if (fresh) {
        std::set<std::string> seen;
        size_t patterns =
            ties.size() < 20 ? size_t(1) << ties.size() : SIZE_MAX;
        for (int k = 1; k <= cap && columns.size() < patterns; ++k) {
          uint32_t mask = (1u << k) - 1;
          while (mask < (1u << sc) && columns.size() < patterns) {
            std::vector<uint64_t> states;
            for (uint32_t s = 0; s < sc; ++s)
              if (mask & (1u << s)) states.push_back(s);
            std::string pat(ties.size(), '0');
            for (size_t t = 0; t < ties.size(); ++t)
              if (tie_bit(ties[t], states)) pat[t] = '1';
            if (seen.insert(pat).second)
              columns.push_back(make_column(columns.size(), std::move(states)));
            uint32_t low = mask & (~mask + 1);
            uint32_t up = mask + low;
            mask = up | (((mask ^ up) >> 2) / low);
          }
        }
      }
      return close_with(b, bs, ties, columns);
    });
    if (!found) out.outcome = Outcome::Valid;
    return out;
  }

  std::mt19937_64 rng(opt.seed);
  uint64_t stspace = uint64_t(1) << lits;
  for (long it = 0; it < opt.budget; ++it) {
    ++out.branches;
    Branch b = random_branch(root, calc, rng);
    BranchSystem bs = branch_to_constraints(b);
    std::vector<ClusterTie> ties;
    for (const auto& [name, av] : bs.atoms)
      ties.push_back(tie_of(name, av.first, av.second));
    long want = opt.support > 0
                    ? opt.support
                    : static_cast<long>(bs.system.constraints.size()) +
                          static_cast<long>(ties.size()) + measures;
    std::vector<Column> columns;
    for (long i = 0; i < want; ++i) {
      size_t k = 1 + static_cast<size_t>(rng() % static_cast<uint64_t>(bound));
      if (k > stspace) k = static_cast<size_t>(stspace);
      std::set<uint64_t> sts;
      for (size_t a = 0; a < 64 * k && sts.size() < k; ++a)
        sts.insert(rng() % stspace);
      columns.push_back(make_column(
          columns.size(), std::vector<uint64_t>(sts.begin(), sts.end())));
    }
    if (close_with(b, bs, ties, columns)) return out;
  }
  out.outcome = Outcome::Unknown;
  out.note = "no countermodel within the budget; leaning valid";
  return out;
}

inline std::vector<std::string> sequent_vars(const std::vector<ORef>& premises,
                                             const ORef& alpha) {
  std::set<std::string> vs = o_inner_vars(alpha);
  for (const ORef& g : premises) {
    std::set<std::string> more = o_inner_vars(g);
    vs.insert(more.begin(), more.end());
  }
  return {vs.begin(), vs.end()};
}

inline void take_diagnostics(Verdict& out, Outcome oc, const std::string& br,
                             long branches, long lps, const std::string& note) {
  out.outcome = oc;
  out.witness_branch = br;
  out.branches += branches;
  out.lp_calls += lps;
  if (!note.empty()) out.note = note;
}

}  // namespace detail

// Propositional validity and entailment through branch closure.  Premises
// enter the root at their designated values, the conclusion bounded below it.
inline Verdict decide_prop(LogicId logic, const std::vector<ORef>& premises,
                           const ORef& alpha, const DecideOptions& opt = {}) {
  for (const ORef& g : premises) detail::check_language(logic, g);
  detail::check_language(logic, alpha);
  Calculus calc =
      logic == LogicId::NLuk ? Calculus::NLuk : Calculus::Luk2;
  std::vector<LabelledEntry> entries;
  for (const ORef& g : premises) {
    entries.push_back({g, 1, Dir::Ge, LinExpr::constant(1)});
    if (logic == LogicId::Luk2Delta)
      entries.push_back({g, 2, Dir::Le, LinExpr::constant(0)});
  }
  LinExpr c = LinExpr::var("c");
  entries.push_back({alpha, 1, Dir::Le, c});
  Branch root =
      root_branch(std::move(entries), {{c, Rel::Lt, LinExpr::constant(1)}});

  std::set<std::string> vs = o_inner_vars(alpha);
  for (const ORef& g : premises) {
    std::set<std::string> more = o_inner_vars(g);
    vs.insert(more.begin(), more.end());
  }

  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";
  auto try_branch = [&](const Branch& b) -> bool {
    ++out.lp_calls;
    BranchSystem bs = branch_to_constraints(b);
    Feasibility fz = feasible(bs.system);
    if (!fz.ok) return false;
    if (!branch_satisfied(b, fz.witness, calc))
      throw internal_error("open branch rejects its own witness");
    auto look = [&](const std::string& name) {
      auto it = fz.witness.find(name);
      return it == fz.witness.end() ? Rat(0) : it->second;
    };
    std::map<std::string, PairVal> val;
    for (const std::string& v : vs)
      val[v] = {look("v1(" + v + ")"), look("v2(" + v + ")")};
    auto atom = [&](const ORef& a) -> PairVal {
      auto it = val.find(a->name);
      if (it == val.end()) throw internal_error("unvalued atom " + a->name);
      return it->second;
    };
    auto value = [&](const ORef& f) -> OuterValue {
      if (logic == LogicId::LukDelta)
        return {false,
                {eval_luk_delta(f, [&](const ORef& a) { return atom(a).t; }),
                 Rat(0)}};
      if (logic == LogicId::NLuk) return {true, eval_nluk(f, atom)};
      return {true, eval_luk2(f, atom)};
    };
    for (const ORef& g : premises)
      if (!designated(logic, value(g)))
        throw internal_error("countermodel drops the premise " + o_str(g));
    if (designated(logic, value(alpha)))
      throw internal_error("countermodel fails to refute " + o_str(alpha));
    for (const auto& [v, pv] : val) {
      if (logic == LogicId::LukDelta)
        out.atom_values.emplace(v, OuterValue{false, {pv.t, Rat(0)}});
      else
        out.atom_values.emplace(v, OuterValue{true, pv});
    }
    out.witness_branch = b.id;
    out.outcome = Outcome::NotValid;
    return true;
  };

  if (opt.exhaustive) {
    bool found = detail::for_each_branch(root, calc, [&](const Branch& b) {
      ++out.branches;
      return try_branch(b);
    });
    if (!found) out.outcome = Outcome::Valid;
    return out;
  }
  std::mt19937_64 rng(opt.seed);
  for (long it = 0; it < opt.budget; ++it) {
    ++out.branches;
    Branch b = random_branch(root, calc, rng);
    if (try_branch(b)) return out;
  }
  out.outcome = Outcome::Unknown;
  out.note = "no countermodel within the budget; leaning valid";
  return out;
}

// Measure entailment over one probability: outer negations move onto the
// atoms, bodies lose their negations through starred variables, and each
// branch closes against the profile weights.  Premises pin the designated
// pair; refuting the first coordinate of the conclusion suffices because
// conflation swaps a designated-pair failure into one.
inline Verdict decide_pr_luk2(const std::vector<ORef>& premises,
                              const ORef& alpha, const DecideOptions& opt = {}) {
  for (const ORef& g : premises) detail::check_language(LogicId::PrLuk2, g);
  detail::check_language(LogicId::PrLuk2, alpha);
  std::vector<std::string> declare = detail::sequent_vars(premises, alpha);
  std::vector<LabelledEntry> entries;
  for (const ORef& g : premises) {
    ORef n = star_neg_removal(neg_push(LogicId::PrLuk2, g));
    entries.push_back({n, 1, Dir::Ge, LinExpr::constant(1)});
    entries.push_back({n, 2, Dir::Le, LinExpr::constant(0)});
  }
  ORef na = star_neg_removal(neg_push(LogicId::PrLuk2, alpha));
  LinExpr c = LinExpr::var("c");
  entries.push_back({na, 1, Dir::Le, c});
  Branch root =
      root_branch(std::move(entries), {{c, Rel::Lt, LinExpr::constant(1)}});

  detail::EngineResult er = detail::measure_engine(root, declare, opt);
  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";
  detail::take_diagnostics(out, er.outcome, er.branch, er.branches, er.lp_calls,
                           er.note);
  if (er.outcome == Outcome::NotValid) {
    TLModel m =
        tl_pr_luk2(std::move(er.model->base), std::move(er.model->mu), false);
    detail::attach_countermodel(out, LogicId::PrLuk2, std::move(m), premises,
                                alpha);
  }
  return out;
}

// Four-valued probability entailment through the pair image: the translation
// stores the single truth value in the first coordinate, so premises enter
// at the first coordinate only and the conclusion is refuted there.
inline Verdict decide_four_pr(const std::vector<ORef>& premises,
                              const ORef& alpha, const DecideOptions& opt = {}) {
  for (const ORef& g : premises) detail::check_language(LogicId::FourPr, g);
  detail::check_language(LogicId::FourPr, alpha);
  std::vector<std::string> declare = detail::sequent_vars(premises, alpha);
  std::vector<LabelledEntry> entries;
  for (const ORef& g : premises)
    entries.push_back(
        {star_neg_removal(to_pm(g)), 1, Dir::Ge, LinExpr::constant(1)});
  LinExpr c = LinExpr::var("c");
  entries.push_back({star_neg_removal(to_pm(alpha)), 1, Dir::Le, c});
  Branch root =
      root_branch(std::move(entries), {{c, Rel::Lt, LinExpr::constant(1)}});

  detail::EngineResult er = detail::measure_engine(root, declare, opt);
  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";
  detail::take_diagnostics(out, er.outcome, er.branch, er.branches, er.lp_calls,
                           er.note);
  if (er.outcome == Outcome::NotValid) {
    TLModel m =
        tl_four_pr(std::move(er.model->base), std::move(er.model->mu), false);
    detail::attach_countermodel(out, LogicId::FourPr, std::move(m), premises,
                                alpha);
  }
  return out;
}

// Modal probability entailment over one measure: branches close against
// cluster weights; the countermodel is the disjoint union of the support
// clusters.
inline Verdict decide_prob_s5(const std::vector<ORef>& premises,
                              const ORef& alpha, const DecideOptions& opt = {}) {
  for (const ORef& g : premises) detail::check_language(LogicId::ProbS5, g);
  detail::check_language(LogicId::ProbS5, alpha);
  std::vector<std::string> vars = detail::sequent_vars(premises, alpha);
  std::vector<LabelledEntry> entries;
  for (const ORef& g : premises) {
    ORef n = neg_push(LogicId::ProbS5, g);
    entries.push_back({n, 1, Dir::Ge, LinExpr::constant(1)});
    entries.push_back({n, 2, Dir::Le, LinExpr::constant(0)});
  }
  LinExpr c = LinExpr::var("c");
  entries.push_back({neg_push(LogicId::ProbS5, alpha), 1, Dir::Le, c});
  Branch root =
      root_branch(std::move(entries), {{c, Rel::Lt, LinExpr::constant(1)}});

  detail::S5EngineResult er =
      detail::s5_engine(root, Calculus::Luk2, 1, vars, opt);
  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";
  detail::take_diagnostics(out, er.outcome, er.branch, er.branches, er.lp_calls,
                           er.note);
  if (er.outcome == Outcome::NotValid) {
    TLModel m = tl_prob_s5(std::move(*er.model), false);
    detail::attach_countermodel(out, LogicId::ProbS5, std::move(m), premises,
                                alpha);
  }
  return out;
}

// Modal probability entailment over two measures.  Entailment reads the
// first coordinate, so premises enter there only; both weight distributions
// live on one shared cluster system.
inline Verdict decide_prob_nluk_s5(const std::vector<ORef>& premises,
                                   const ORef& alpha,
                                   const DecideOptions& opt = {}) {
  for (const ORef& g : premises)
    detail::check_language(LogicId::ProbNLukS5, g);
  detail::check_language(LogicId::ProbNLukS5, alpha);
  std::vector<std::string> vars = detail::sequent_vars(premises, alpha);
  std::vector<LabelledEntry> entries;
  for (const ORef& g : premises)
    entries.push_back(
        {neg_push(LogicId::ProbNLukS5, g), 1, Dir::Ge, LinExpr::constant(1)});
  LinExpr c = LinExpr::var("c");
  entries.push_back({neg_push(LogicId::ProbNLukS5, alpha), 1, Dir::Le, c});
  Branch root =
      root_branch(std::move(entries), {{c, Rel::Lt, LinExpr::constant(1)}});

  detail::S5EngineResult er =
      detail::s5_engine(root, Calculus::NLuk, 2, vars, opt);
  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";
  detail::take_diagnostics(out, er.outcome, er.branch, er.branches, er.lp_calls,
                           er.note);
  if (er.outcome == Outcome::NotValid) {
    TLModel m = tl_prob_nluk_s5(std::move(*er.model), false);
    detail::attach_countermodel(out, LogicId::ProbNLukS5, std::move(m),
                                premises, alpha);
  }
  return out;
}

// Belief entailment over one belief function, through the two box images.
// The first run refutes the truth coordinate of the conclusion, the second
// drives its falsity coordinate above zero; premises pin both images to the
// designated pair in each run.  A found model maps back through the
// set-level induced belief function.
inline Verdict decide_bel_luk2(const std::vector<ORef>& premises,
                               const ORef& alpha, const DecideOptions& opt = {}) {
  for (const ORef& g : premises) detail::check_language(LogicId::BelLuk2, g);
  detail::check_language(LogicId::BelLuk2, alpha);
  std::vector<std::string> vars = detail::sequent_vars(premises, alpha);
  std::vector<LabelledEntry> shared;
  for (const ORef& g : premises) {
    ORef n = neg_push(LogicId::BelLuk2, g);
    shared.push_back({boxplus(n), 1, Dir::Ge, LinExpr::constant(1)});
    shared.push_back({boxminus(n), 1, Dir::Le, LinExpr::constant(0)});
  }
  ORef na = neg_push(LogicId::BelLuk2, alpha);
  LinExpr c = LinExpr::var("c");

  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";

  auto run = [&](const ORef& image, Dir dir, Rel rel, const LinExpr& lhs,
                 const LinExpr& rhs) {
    std::vector<LabelledEntry> entries = shared;
    entries.push_back({image, 1, dir, c});
    Branch root = root_branch(std::move(entries), {{lhs, rel, rhs}});
    return detail::s5_engine(root, Calculus::Luk2, 1, vars, opt);
  };

  auto finish = [&](detail::S5EngineResult er, const char* which) -> bool {
    out.branches += er.branches;
    out.lp_calls += er.lp_calls;
    if (er.outcome != Outcome::NotValid) return false;
    out.witness_branch = er.branch;
    out.note = which;
    KripkeModel km = std::move(*er.model);
    Measure bel = induced_bel_set(km);
    TLModel m = tl_bel_luk2(km.base, std::move(bel), false);
    detail::attach_countermodel(out, LogicId::BelLuk2, std::move(m), premises,
                                alpha);
    return true;
  };

  detail::S5EngineResult plus =
      run(boxplus(na), Dir::Le, Rel::Lt, c, LinExpr::constant(1));
  Outcome first = plus.outcome;
  if (finish(std::move(plus), "the truth coordinate falls short"))
    return out;
  detail::S5EngineResult minus =
      run(boxminus(na), Dir::Ge, Rel::Lt, LinExpr::constant(0), c);
  Outcome second = minus.outcome;
  if (finish(std::move(minus), "the falsity coordinate comes out positive"))
    return out;
  out.outcome = first == Outcome::Valid && second == Outcome::Valid
                    ? Outcome::Valid
                    : Outcome::Unknown;
  if (out.outcome == Outcome::Unknown)
    out.note = "no countermodel within the budget; leaning valid";
  return out;
}

// Belief and plausibility entailment through the two-measure modal logic.
// The found model carries two partitions; belief is induced from the first,
// plausibility from the second.
inline Verdict decide_bel_nluk(const std::vector<ORef>& premises,
                               const ORef& alpha, const DecideOptions& opt = {}) {
  for (const ORef& g : premises) detail::check_language(LogicId::BelNLuk, g);
  detail::check_language(LogicId::BelNLuk, alpha);
  std::vector<std::string> vars = detail::sequent_vars(premises, alpha);
  std::vector<LabelledEntry> entries;
  for (const ORef& g : premises)
    entries.push_back({box_dia(neg_push(LogicId::BelNLuk, g)), 1, Dir::Ge,
                       LinExpr::constant(1)});
  LinExpr c = LinExpr::var("c");
  entries.push_back(
      {box_dia(neg_push(LogicId::BelNLuk, alpha)), 1, Dir::Le, c});
  Branch root =
      root_branch(std::move(entries), {{c, Rel::Lt, LinExpr::constant(1)}});

  detail::S5EngineResult er =
      detail::s5_engine(root, Calculus::NLuk, 2, vars, opt);
  Verdict out;
  out.mode = opt.exhaustive ? "exhaustive" : "randomized";
  detail::take_diagnostics(out, er.outcome, er.branch, er.branches, er.lp_calls,
                           er.note);
  if (er.outcome == Outcome::NotValid) {
    KripkeModel km = std::move(*er.model);
    KripkeModel first{km.base, km.part1, {}, km.pi1, {}};
    KripkeModel second{km.base, km.part2, {}, km.pi2, {}};
    Measure bel = induced_bel_set(first);
    Measure pl = induced_pl_set(second);
    TLModel m = tl_bel_nluk(km.base, std::move(bel), std::move(pl), false);
    detail::attach_countermodel(out, LogicId::BelNLuk, std::move(m), premises,
                                alpha);
  }
  return out;
}

inline Verdict decide(LogicId logic, const std::vector<ORef>& premises,
                      const ORef& alpha, const DecideOptions& opt = {}) {
  switch (logic) {
    case LogicId::LukDelta:
    case LogicId::Luk2Delta:
    case LogicId::NLuk:
      return decide_prop(logic, premises, alpha, opt);
    case LogicId::PrLuk2: return decide_pr_luk2(premises, alpha, opt);
    case LogicId::FourPr: return decide_four_pr(premises, alpha, opt);
    case LogicId::BelLuk2: return decide_bel_luk2(premises, alpha, opt);
    case LogicId::BelNLuk: return decide_bel_nluk(premises, alpha, opt);
    case LogicId::ProbS5: return decide_prob_s5(premises, alpha, opt);
    case LogicId::ProbNLukS5: return decide_prob_nluk_s5(premises, alpha, opt);
  }
  throw internal_error("bad logic id");
}

inline Verdict decide_valid(LogicId logic, const ORef& alpha,
                            const DecideOptions& opt = {}) {
  return decide(logic, {}, alpha, opt);
}

struct SearchResult {
  bool found = false;
  std::optional<TLModel> model;
  std::map<std::string, OuterValue> atom_values;
  long tried = 0;
};

// Model search as an independent falsifier: random models over the sequent's
// variables, first hit wins.  A miss proves nothing; a hit contradicts any
// validity claim.
inline SearchResult falsify_by_search(LogicId logic,
                                      const std::vector<ORef>& premises,
                                      const ORef& alpha, uint64_t seed = 1,
                                      long budget = 500) {
  for (const ORef& g : premises) detail::check_language(logic, g);
  detail::check_language(logic, alpha);
  SearchResult out;
  std::mt19937_64 rng(seed);
  std::vector<std::string> vars = detail::sequent_vars(premises, alpha);

  if (is_propositional(logic)) {
    for (long it = 0; it < budget; ++it) {
      ++out.tried;
      std::map<std::string, PairVal> val;
      for (const std::string& v : vars)
        val[v] = {random_unit(rng),
                  logic == LogicId::LukDelta ? Rat(0) : random_unit(rng)};
      auto atom = [&](const ORef& a) { return val.at(a->name); };
      auto value = [&](const ORef& f) -> OuterValue {
        if (logic == LogicId::LukDelta)
          return {false,
                  {eval_luk_delta(f, [&](const ORef& a) { return atom(a).t; }),
                   Rat(0)}};
        if (logic == LogicId::NLuk) return {true, eval_nluk(f, atom)};
        return {true, eval_luk2(f, atom)};
      };
      bool keep = true;
      for (const ORef& g : premises)
        if (!designated(logic, value(g))) {
          keep = false;
          break;
        }
      if (!keep || designated(logic, value(alpha))) continue;
      for (const auto& [v, pv] : val)
        out.atom_values.emplace(
            v, logic == LogicId::LukDelta
                   ? OuterValue{false, {pv.t, Rat(0)}}
                   : OuterValue{true, pv});
      out.found = true;
      return out;
    }
    return out;
  }

  if (vars.empty()) vars.push_back("p1");
  for (long it = 0; it < budget; ++it) {
    ++out.tried;
    int n = 1 + static_cast<int>(rng() % 4);
    TLModel m = random_tl_model(rng, logic, vars, n);
    bool keep = true;
    for (const ORef& g : premises)
      if (!designated(logic, tl_eval(m, g))) {
        keep = false;
        break;
      }
    if (!keep || designated(logic, tl_eval(m, alpha))) continue;
    for (const ORef& g : premises)
      for (const ORef& a : o_atoms(g))
        out.atom_values.emplace(o_str(a), tl_eval(m, a));
    for (const ORef& a : o_atoms(alpha))
      out.atom_values.emplace(o_str(a), tl_eval(m, a));
    out.model = std::move(m);
    out.found = true;
    return out;
  }
  return out;
}

}  // namespace bdtl
