#pragma once

#include <utility>
#include <vector>

#include "bdtl/kripke.hpp"
#include "bdtl/luk.hpp"

namespace bdtl {

// A two-layered model: an inner Belnap-Dunn model (plain or S5) plus the
// measure bundle of the chosen logic.  Build through the tl_* factories; they
// audit the bundle against the measure axioms unless told not to.
struct TLModel {
  LogicId logic = LogicId::PrLuk2;
  BDModel prop;
  KripkeModel frame;
  Measure mu;
  Measure bel, pl;

  const BDModel& inner() const { return is_s5_family(logic) ? frame.base : prop; }
};

namespace detail {

inline void require_pass(const AuditReport& r) {
  if (!r.pass)
    throw input_error("measure fails the '" + r.axiom + "' condition: " + r.witness);
}

inline void require_dimension(const Measure& mu, const BDModel& base,
                              const char* what) {
  if (mu.n != base.size())
    throw input_error(std::string(what) + " is sized for " + std::to_string(mu.n) +
                      " worlds but the model has " + std::to_string(base.size()));
}

}  // namespace detail

inline TLModel tl_pr_luk2(BDModel base, Measure mu, bool audit = true) {
  TLModel m;
  m.logic = LogicId::PrLuk2;
  m.prop = std::move(base);
  m.mu = std::move(mu);
  detail::require_dimension(m.mu, m.prop, "the measure");
  if (audit)
    for (const AuditReport& r : audit_pm_probability(m.prop, m.mu))
      detail::require_pass(r);
  return m;
}

inline TLModel tl_four_pr(BDModel base, Measure mu4, bool audit = true) {
  TLModel m;
  m.logic = LogicId::FourPr;
  m.prop = std::move(base);
  m.mu = std::move(mu4);
  detail::require_dimension(m.mu, m.prop, "the measure");
  if (audit)
    for (const AuditReport& r : audit_four_probability(m.prop, m.mu))
      detail::require_pass(r);
  return m;
}

inline TLModel tl_bel_luk2(BDModel base, Measure bel, bool audit = true) {
  TLModel m;
  m.logic = LogicId::BelLuk2;
  m.prop = std::move(base);
  m.bel = std::move(bel);
  detail::require_dimension(m.bel, m.prop, "the belief function");
  if (audit) detail::require_pass(audit_belief(m.bel, m.bel.n));
  return m;
}

inline TLModel tl_bel_nluk(BDModel base, Measure bel, Measure pl, bool audit = true) {
  TLModel m;
  m.logic = LogicId::BelNLuk;
  m.prop = std::move(base);
  m.bel = std::move(bel);
  m.pl = std::move(pl);
  detail::require_dimension(m.bel, m.prop, "the belief function");
  detail::require_dimension(m.pl, m.prop, "the plausibility function");
  if (audit) {
    detail::require_pass(audit_belief(m.bel, m.bel.n));
    detail::require_pass(audit_plausibility(m.pl, m.pl.n));
  }
  return m;
}

inline TLModel tl_prob_s5(KripkeModel frame, bool audit = true) {
  if (frame.two_relations())
    throw input_error("this logic uses a single relation");
  TLModel m;
  m.logic = LogicId::ProbS5;
  m.frame = std::move(frame);
  if (audit) m.frame.validate();
  return m;
}

inline TLModel tl_prob_nluk_s5(KripkeModel frame, bool audit = true) {
  if (!frame.two_relations())
    throw input_error("this logic needs two relations and two measures");
  TLModel m;
  m.logic = LogicId::ProbNLukS5;
  m.frame = std::move(frame);
  if (audit) m.frame.validate();
  return m;
}

namespace detail {

inline const BDRef& s5_body(const ORef& a, int want_rel) {
  if (!a->body || (a->body->kind != BDKind::Box && a->body->kind != BDKind::Dia))
    throw input_error("the atom '" + o_str(a) + "' needs a modal head");
  if (a->body->rel != want_rel)
    throw input_error("the atom '" + o_str(a) + "' uses the wrong relation index");
  return a->body;
}

}  // namespace detail

// Value of one modal atom under the model's measure bundle (the single-valued
// logic of the four cells has its own entry point below).
inline PairVal tl_induce_pair(const TLModel& m, const ORef& a) {
  if (a->kind != OKind::Atom || a->tag == Tag::Var)
    throw input_error("only modal atoms have induced values");
  switch (m.logic) {
    case LogicId::PrLuk2: {
      if (a->tag != Tag::Pr) break;
      Extent e = bd_extents(m.prop, a->body);
      return {m.mu(e.pos), m.mu(e.neg)};
    }
    case LogicId::BelLuk2: {
      if (a->tag != Tag::B) break;
      Extent e = bd_extents(m.prop, a->body);
      return {m.bel(e.pos), m.bel(e.neg)};
    }
    case LogicId::BelNLuk: {
      if (a->tag != Tag::B && a->tag != Tag::Pl) break;
      Extent e = bd_extents(m.prop, a->body);
      if (a->tag == Tag::B) return {m.bel(e.pos), m.pl(e.neg)};
      return {m.pl(e.pos), m.bel(e.neg)};
    }
    case LogicId::ProbS5: {
      if (a->tag != Tag::Pr) break;
      Extent e = kripke_extents(m.frame, detail::s5_body(a, 1));
      return {m.frame.pi1(e.pos), m.frame.pi1(e.neg)};
    }
    case LogicId::ProbNLukS5: {
      if (a->tag != Tag::Pr1 && a->tag != Tag::Pr2) break;
      int rel = a->tag == Tag::Pr1 ? 1 : 2;
      Extent e = kripke_extents(m.frame, detail::s5_body(a, rel));
      const Measure& pi = rel == 1 ? m.frame.pi1 : m.frame.pi2;
      return {pi(e.pos), pi(e.neg)};
    }
    default: break;
  }
  throw input_error("atom '" + o_str(a) + "' does not belong to " +
                    logic_name(m.logic));
}

inline Rat tl_induce_truth(const TLModel& m, const ORef& a) {
  if (m.logic != LogicId::FourPr)
    throw input_error("single-valued induction belongs to the four-cell logic");
  if (a->kind != OKind::Atom || a->tag == Tag::Var)
    throw input_error("only modal atoms have induced values");
  FourExtent fe = four_cells(m.prop.size(), bd_extents(m.prop, a->body));
  switch (a->tag) {
    case Tag::Bl: return m.mu(fe.b);
    case Tag::Db: return m.mu(fe.d);
    case Tag::Cf: return m.mu(fe.c);
    case Tag::Uc: return m.mu(fe.u);
    default:
      throw input_error("atom '" + o_str(a) + "' does not belong to " +
                        logic_name(m.logic));
  }
}

// Value of an outer formula; single-valued logics report only the truth
// coordinate.
struct OuterValue {
  bool paired = true;
  PairVal v;

  std::string str() const { return paired ? pair_str(v) : rat_str(v.t); }
};

inline bool designated(LogicId l, const OuterValue& x) {
  if (!x.paired || is_nluk_family(l)) return x.v.t == 1;
  return x.v.t == 1 && x.v.f == 0;
}

inline OuterValue tl_eval(const TLModel& m, const ORef& f) {
  if (m.logic == LogicId::FourPr) {
    Rat t = eval_luk_delta(f, [&](const ORef& a) { return tl_induce_truth(m, a); });
    return {false, {t, Rat(0)}};
  }
  auto atom = [&](const ORef& a) { return tl_induce_pair(m, a); };
  if (is_nluk_family(m.logic)) return {true, eval_nluk(f, atom)};
  return {true, eval_luk2(f, atom)};
}

// Entailment on one model: false exactly when every premise takes the
// designated value but the conclusion does not.
inline bool tl_entails_on_model(const TLModel& m, const std::vector<ORef>& gamma,
                                const ORef& alpha) {
  for (const ORef& g : gamma)
    if (!designated(m.logic, tl_eval(m, g))) return true;
  return designated(m.logic, tl_eval(m, alpha));
}

// Swaps each variable's extents for their complements, turning the value of
// every outer formula into the flipped pair (1-e2, 1-e1).  Sound for the
// additive logics over classical probability measures.
inline TLModel conflate(const TLModel& m) {
  if (m.logic != LogicId::PrLuk2 && m.logic != LogicId::ProbS5)
    throw input_error("conflation applies to the additive pair logics only");
  if (m.logic == LogicId::PrLuk2 && !m.mu.classical_probability())
    throw input_error("conflation requires a classical probability measure");

  TLModel out = m;
  BDModel& base = m.logic == LogicId::PrLuk2 ? out.prop : out.frame.base;
  const BDModel& src = m.logic == LogicId::PrLuk2 ? m.prop : m.frame.base;
  int n = src.size();
  for (const std::string& var : src.variables()) {
    auto ip = src.vplus.find(var);
    auto in = src.vminus.find(var);
    BitSet pos = ip == src.vplus.end() ? BitSet(n) : ip->second;
    BitSet neg = in == src.vminus.end() ? BitSet(n) : in->second;
    base.vplus[var] = neg.complement();
    base.vminus[var] = pos.complement();
  }
  return out;
}

}  // namespace bdtl
