#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdtl/bd.hpp"
#include "bdtl/decide.hpp"
#include "bdtl/formula.hpp"

namespace bdtl {

// A scheme instance: what each metavariable stands for.  Outer metavariables
// (?0, ?1, ...) bind whole outer formulas, inner ones (?a, ?b) bind the
// Belnap-Dunn formulas inside modal atoms.
struct SchemeMatch {
  std::map<std::string, ORef> outer;
  std::map<std::string, BDRef> inner;
};

struct ProofStep {
  std::string rule;    // "axiom", "premise", "mp", "delta-nec", "conf"
  std::string scheme;  // axiom only
  long i = 0, j = 0;   // cited line or premise numbers, 1-indexed
};

struct ProofLine {
  ORef formula;
  ProofStep by;
};

struct Proof {
  LogicId calculus = LogicId::PrLuk2;
  std::vector<ProofLine> lines;
};

struct ProofReport {
  bool ok = false;
  long line = 0;  // first bad line when not ok
  std::string reason;
};

namespace detail {

inline bool is_meta(const std::string& n) { return !n.empty() && n[0] == '?'; }

inline bool match_inner(const BDRef& pat, const BDRef& f, SchemeMatch& s) {
  if (pat->kind == BDKind::Var && is_meta(pat->name)) {
    auto [it, fresh] = s.inner.try_emplace(pat->name, f);
    return fresh || bd_eq(it->second, f);
  }
  if (pat->kind != f->kind || pat->rel != f->rel) return false;
  switch (pat->kind) {
    case BDKind::Var: return pat->name == f->name;
    case BDKind::Neg:
    case BDKind::Box:
    case BDKind::Dia: return match_inner(pat->a, f->a, s);
    case BDKind::And:
    case BDKind::Or:
      return match_inner(pat->a, f->a, s) && match_inner(pat->b, f->b, s);
  }
  return false;
}

inline bool match_outer(const ORef& pat, const ORef& f, SchemeMatch& s) {
  if (pat->kind == OKind::Atom && pat->tag == Tag::Var && is_meta(pat->name)) {
    auto [it, fresh] = s.outer.try_emplace(pat->name, f);
    return fresh || o_eq(it->second, f);
  }
  if (pat->kind != f->kind) return false;
  if (pat->kind == OKind::Atom) {
    if (pat->tag != f->tag) return false;
    if (pat->tag == Tag::Var) return pat->name == f->name;
    return match_inner(pat->body, f->body, s);
  }
  if (!match_outer(pat->a, f->a, s)) return false;
  return !pat->b || match_outer(pat->b, f->b, s);
}

enum class SideCond { None, Entails, Equiv };

struct Scheme {
  std::string id;
  std::vector<ORef> patterns;
  SideCond side = SideCond::None;
};

inline std::vector<Scheme> luk_delta_schemes() {
  ORef A = o_var("?0"), C = o_var("?1"), P = o_var("?2");
  return {
      {"w", {o_impl(A, o_impl(C, A))}},
      {"sf", {o_impl(o_impl(A, C), o_impl(o_impl(C, P), o_impl(A, P)))}},
      {"waj", {o_impl(o_impl(o_impl(A, C), C), o_impl(o_impl(C, A), A))}},
      {"co", {o_impl(o_impl(o_lneg(C), o_lneg(A)), o_impl(A, C))}},
      {"delta1", {o_or_sugar(o_delta(A), o_lneg(o_delta(A)))}},
      {"delta2", {o_impl(o_delta(A), A)}},
      {"delta3", {o_impl(o_delta(A), o_delta(o_delta(A)))}},
      {"delta4",
       {o_impl(o_delta(o_or_sugar(A, C)), o_or_sugar(o_delta(A), o_delta(C)))}},
      {"delta5",
       {o_impl(o_delta(o_impl(A, C)), o_impl(o_delta(A), o_delta(C)))}},
  };
}

inline std::vector<Scheme> luk2_extra_schemes() {
  ORef A = o_var("?0"), C = o_var("?1");
  return {
      {"invol", {o_iff(o_bdneg(o_bdneg(A)), A)}},
      {"neg-comm", {o_iff(o_bdneg(o_lneg(A)), o_lneg(o_bdneg(A)))}},
      {"neg-impl",
       {o_iff(o_impl(o_lneg(o_bdneg(A)), o_lneg(o_bdneg(C))),
              o_lneg(o_bdneg(o_impl(A, C))))}},
      {"neg-delta",
       {o_iff(o_bdneg(o_delta(A)), o_lneg(o_delta(o_lneg(o_bdneg(A)))))}},
  };
}

inline std::vector<Scheme> pm_schemes() {
  BDRef a = bd_var("?a"), b = bd_var("?b");
  auto pr = [](BDRef x) { return o_atom(Tag::Pr, std::move(x)); };
  return {
      {"pm-mon", {o_impl(pr(a), pr(b))}, SideCond::Entails},
      {"pm-neg", {o_iff(pr(bd_neg(a)), o_bdneg(pr(a)))}},
      {"pm-ex",
       {o_iff(pr(bd_or(a, b)),
              o_oplus(o_ominus(pr(a), pr(bd_and(a, b))), pr(b)))}},
  };
}

inline std::vector<Scheme> four_pr_schemes() {
  BDRef a = bd_var("?a"), b = bd_var("?b");
  auto at = [](Tag t, BDRef x) { return o_atom(t, std::move(x)); };
  const Tag cells[] = {Tag::Bl, Tag::Db, Tag::Cf, Tag::Uc};

  Scheme equiv{"4equiv", {}, SideCond::Equiv};
  for (Tag x : cells) equiv.patterns.push_back(o_iff(at(x, a), at(x, b)));

  Scheme part2{"4part2", {}};
  for (Tag x1 : cells)
    for (Tag x2 : cells)
      for (Tag x3 : cells)
        for (Tag x4 : cells) {
          if (x1 == x2 || x1 == x3 || x1 == x4 || x2 == x3 || x2 == x4 ||
              x3 == x4)
            continue;
          ORef sum3 = o_oplus(o_oplus(at(x1, a), at(x2, a)), at(x3, a));
          part2.patterns.push_back(
              o_iff(o_ominus(o_oplus(sum3, at(x4, a)), at(x4, a)), sum3));
        }

  ORef bc_a = o_oplus(at(Tag::Bl, a), at(Tag::Cf, a));
  ORef bc_b = o_oplus(at(Tag::Bl, b), at(Tag::Cf, b));
  ORef bc_and = o_oplus(at(Tag::Bl, bd_and(a, b)), at(Tag::Cf, bd_and(a, b)));
  ORef bc_or = o_oplus(at(Tag::Bl, bd_or(a, b)), at(Tag::Cf, bd_or(a, b)));
  return {
      std::move(equiv),
      {"4contr",
       {o_lneg(at(Tag::Bl, bd_and(a, bd_neg(a)))),
        o_iff(at(Tag::Cf, a), at(Tag::Cf, bd_and(a, bd_neg(a))))}},
      {"4neg",
       {o_iff(at(Tag::Bl, bd_neg(a)), at(Tag::Db, a)),
        o_iff(at(Tag::Cf, bd_neg(a)), at(Tag::Cf, a))}},
      {"4mon", {o_impl(bc_a, bc_b)}, SideCond::Entails},
      {"4part1",
       {o_oplus(o_oplus(o_oplus(at(Tag::Bl, a), at(Tag::Db, a)), at(Tag::Cf, a)),
                at(Tag::Uc, a))}},
      std::move(part2),
      {"4ex", {o_iff(bc_or, o_oplus(o_ominus(bc_a, bc_and), bc_b))}},
  };
}

inline const std::vector<Scheme>& scheme_table(LogicId calc) {
  static const std::map<LogicId, std::vector<Scheme>> tables = [] {
    std::map<LogicId, std::vector<Scheme>> t;
    std::vector<Scheme> base = luk_delta_schemes();
    t[LogicId::LukDelta] = base;

    std::vector<Scheme> luk2 = base;
    for (Scheme& s : luk2_extra_schemes()) luk2.push_back(std::move(s));
    t[LogicId::Luk2Delta] = luk2;

    std::vector<Scheme> pm = luk2;
    for (Scheme& s : pm_schemes()) pm.push_back(std::move(s));
    t[LogicId::PrLuk2] = std::move(pm);

    std::vector<Scheme> fp = std::move(base);
    for (Scheme& s : four_pr_schemes()) fp.push_back(std::move(s));
    t[LogicId::FourPr] = std::move(fp);
    return t;
  }();
  auto it = tables.find(calc);
  if (it == tables.end())
    throw input_error("no Hilbert calculus for " + logic_name(calc));
  return it->second;
}

inline bool side_holds(SideCond side, const SchemeMatch& m) {
  if (side == SideCond::None) return true;
  const BDRef& a = m.inner.at("?a");
  const BDRef& b = m.inner.at("?b");
  if (side == SideCond::Entails) return bd_entails(a, b);
  return bd_entails(a, b) && bd_entails(b, a);
}

// Replaces each distinct modal atom by a fresh propositional variable, so the
// outer skeleton can be decided in the underlying propositional logic.
inline ORef outer_skeleton(const ORef& f, std::map<std::string, ORef>& atoms) {
  if (f->kind == OKind::Atom) {
    std::string key = o_str(f);
    auto [it, fresh] = atoms.try_emplace(
        std::move(key), o_var("s" + std::to_string(atoms.size())));
    return it->second;
  }
  ORef a = outer_skeleton(f->a, atoms);
  ORef b = f->b ? outer_skeleton(f->b, atoms) : nullptr;
  return f->b ? o_bin(f->kind, std::move(a), std::move(b))
              : o_un(f->kind, std::move(a));
}

}  // namespace detail

// Scheme instance check: structural matching for the listed axiom schemes,
// with the Belnap-Dunn side conditions discharged by the entailment oracle.
// The scheme "outer" accepts any formula whose modal-atom skeleton the
// underlying propositional decider certifies valid.
inline std::optional<SchemeMatch> match_axiom(LogicId calc,
                                              const std::string& scheme,
                                              const ORef& formula) {
  const std::vector<detail::Scheme>& table = detail::scheme_table(calc);
  if (scheme == "outer") {
    if (calc != LogicId::PrLuk2 && calc != LogicId::FourPr)
      throw input_error("the scheme outer does not belong to " +
                        logic_name(calc));
    std::map<std::string, ORef> atoms;
    ORef skeleton = detail::outer_skeleton(formula, atoms);
    LogicId prop =
        calc == LogicId::PrLuk2 ? LogicId::Luk2Delta : LogicId::LukDelta;
    if (decide_prop(prop, {}, skeleton).outcome == Outcome::Valid)
      return SchemeMatch{};
    return std::nullopt;
  }
  for (const detail::Scheme& s : table) {
    if (s.id != scheme) continue;
    for (const ORef& pat : s.patterns) {
      SchemeMatch m;
      if (detail::match_outer(pat, formula, m) && detail::side_holds(s.side, m))
        return m;
    }
    return std::nullopt;
  }
  throw input_error("the scheme " + scheme + " does not belong to " +
                    logic_name(calc));
}

// Line-by-line Hilbert proof check; stops at the first unjustified line.
// Rule conventions: mp cites [antecedent, implication]; delta-nec and conf
// cite the single line they transform; premise indexes the given list.
inline ProofReport check_proof(const Proof& p,
                               const std::vector<ORef>& premises = {}) {
  LogicId calc = p.calculus;
  detail::scheme_table(calc);
  if (p.lines.empty()) return {false, 0, "a proof needs at least one line"};

  auto cited = [&](long ref, long current) {
    return ref >= 1 && ref < current;
  };
  for (long k = 1; k <= static_cast<long>(p.lines.size()); ++k) {
    const ProofLine& line = p.lines[k - 1];
    const ProofStep& by = line.by;
    try {
      detail::check_language(calc, line.formula);
    } catch (const input_error& e) {
      return {false, k, e.what()};
    }
    if (by.rule == "axiom") {
      std::optional<SchemeMatch> m;
      try {
        m = match_axiom(calc, by.scheme, line.formula);
      } catch (const input_error& e) {
        return {false, k, e.what()};
      }
      if (!m)
        return {false, k,
                "the formula is not an instance of the scheme " + by.scheme};
    } else if (by.rule == "premise") {
      if (by.i < 1 || by.i > static_cast<long>(premises.size()))
        return {false, k, "premise index out of range"};
      if (!o_eq(premises[by.i - 1], line.formula))
        return {false, k, "the formula differs from the cited premise"};
    } else if (by.rule == "mp") {
      if (!cited(by.i, k) || !cited(by.j, k))
        return {false, k, "modus ponens cites a line out of range"};
      const ORef& phi = p.lines[by.i - 1].formula;
      const ORef& imp = p.lines[by.j - 1].formula;
      if (imp->kind != OKind::Impl || !o_eq(imp->a, phi) ||
          !o_eq(imp->b, line.formula))
        return {false, k, "modus ponens does not fit the cited lines"};
    } else if (by.rule == "delta-nec") {
      if (!cited(by.i, k))
        return {false, k, "delta necessitation cites a line out of range"};
      if (!o_eq(line.formula, o_delta(p.lines[by.i - 1].formula)))
        return {false, k, "the formula is not the delta of the cited line"};
    } else if (by.rule == "conf") {
      if (calc != LogicId::Luk2Delta && calc != LogicId::PrLuk2)
        return {false, k,
                "the conflation rule is not available in " + logic_name(calc)};
      if (!cited(by.i, k))
        return {false, k, "conflation cites a line out of range"};
      if (!o_eq(line.formula, o_lneg(o_bdneg(p.lines[by.i - 1].formula))))
        return {false, k, "the formula is not the conflation of the cited line"};
    } else {
      return {false, k, "unknown justification " + by.rule};
    }
  }
  return {true, 0, ""};
}

}  // namespace bdtl
