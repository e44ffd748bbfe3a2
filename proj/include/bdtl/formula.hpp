#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bdtl/common.hpp"

namespace bdtl {

enum class LogicId {
  LukDelta,
  Luk2Delta,
  NLuk,
  PrLuk2,
  FourPr,
  BelLuk2,
  BelNLuk,
  ProbS5,
  ProbNLukS5,
};

inline bool is_propositional(LogicId l) {
  return l == LogicId::LukDelta || l == LogicId::Luk2Delta || l == LogicId::NLuk;
}
inline bool is_nluk_family(LogicId l) {
  return l == LogicId::NLuk || l == LogicId::BelNLuk || l == LogicId::ProbNLukS5;
}
inline bool is_s5_family(LogicId l) {
  return l == LogicId::ProbS5 || l == LogicId::ProbNLukS5;
}

inline std::string logic_name(LogicId l) {
  switch (l) {
    case LogicId::LukDelta: return "luk";
    case LogicId::Luk2Delta: return "luk2";
    case LogicId::NLuk: return "nluk";
    case LogicId::PrLuk2: return "pr-luk2";
    case LogicId::FourPr: return "4pr";
    case LogicId::BelLuk2: return "bel-luk2";
    case LogicId::BelNLuk: return "bel-nluk";
    case LogicId::ProbS5: return "prob-s5";
    case LogicId::ProbNLukS5: return "prob-nluk-s5";
  }
  throw internal_error("bad logic id");
}

inline LogicId logic_from_name(const std::string& s) {
  for (LogicId l : {LogicId::LukDelta, LogicId::Luk2Delta, LogicId::NLuk, LogicId::PrLuk2,
                    LogicId::FourPr, LogicId::BelLuk2, LogicId::BelNLuk, LogicId::ProbS5,
                    LogicId::ProbNLukS5})
    if (logic_name(l) == s) return l;
  throw input_error("unknown logic: " + s);
}

// Inner layer: Belnap-Dunn formulas, optionally with S5 modalities at the root
// of two-layered atom bodies.
struct BDF;
using BDRef = std::shared_ptr<const BDF>;

enum class BDKind { Var, Neg, And, Or, Box, Dia };

struct BDF {
  BDKind kind;
  std::string name;  // Var
  BDRef a, b;
  int rel = 1;  // Box/Dia relation index (1 or 2)
};

inline BDRef bd_var(std::string n) {
  return std::make_shared<BDF>(BDF{BDKind::Var, std::move(n), nullptr, nullptr, 1});
}
inline BDRef bd_neg(BDRef x) {
  return std::make_shared<BDF>(BDF{BDKind::Neg, "", std::move(x), nullptr, 1});
}
inline BDRef bd_and(BDRef x, BDRef y) {
  return std::make_shared<BDF>(BDF{BDKind::And, "", std::move(x), std::move(y), 1});
}
inline BDRef bd_or(BDRef x, BDRef y) {
  return std::make_shared<BDF>(BDF{BDKind::Or, "", std::move(x), std::move(y), 1});
}
inline BDRef bd_box(BDRef x, int rel = 1) {
  return std::make_shared<BDF>(BDF{BDKind::Box, "", std::move(x), nullptr, rel});
}
inline BDRef bd_dia(BDRef x, int rel = 1) {
  return std::make_shared<BDF>(BDF{BDKind::Dia, "", std::move(x), nullptr, rel});
}

inline bool bd_eq(const BDRef& x, const BDRef& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->rel != y->rel || x->name != y->name) return false;
  return bd_eq(x->a, y->a) && bd_eq(x->b, y->b);
}

inline std::string bd_str(const BDRef& f, int parent_prec = 0) {
  // precedence: | = 1, & = 2, unary = 3
  switch (f->kind) {
    case BDKind::Var: return f->name;
    case BDKind::Neg: return "!" + bd_str(f->a, 3);
    case BDKind::Box:
      return (f->rel == 2 ? "[]2 " : "[] ") + bd_str(f->a, 3);
    case BDKind::Dia:
      return (f->rel == 2 ? "<>2 " : "<> ") + bd_str(f->a, 3);
    case BDKind::And: {
      std::string s = bd_str(f->a, 2) + " & " + bd_str(f->b, 2);
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case BDKind::Or: {
      std::string s = bd_str(f->a, 1) + " | " + bd_str(f->b, 1);
      return parent_prec > 1 ? "(" + s + ")" : s;
    }
  }
  throw internal_error("bad BD node");
}

// Symbol count; binary connectives count their surrounding brackets.
inline long bd_len(const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var: return 1;
    case BDKind::Neg:
    case BDKind::Box:
    case BDKind::Dia: return 1 + bd_len(f->a);
    case BDKind::And:
    case BDKind::Or: return bd_len(f->a) + bd_len(f->b) + 3;
  }
  throw internal_error("bad BD node");
}

inline void bd_vars_into(const BDRef& f, std::set<std::string>& out) {
  if (f->kind == BDKind::Var) {
    out.insert(f->name);
    return;
  }
  if (f->a) bd_vars_into(f->a, out);
  if (f->b) bd_vars_into(f->b, out);
}

inline std::set<std::string> bd_vars(const BDRef& f) {
  std::set<std::string> s;
  bd_vars_into(f, s);
  return s;
}

// Literals occurring as subformulas: plain variables and negated variables.
inline void bd_lits_into(const BDRef& f, std::set<std::pair<std::string, bool>>& out) {
  switch (f->kind) {
    case BDKind::Var: out.insert({f->name, false}); return;
    case BDKind::Neg:
      if (f->a->kind == BDKind::Var) {
        out.insert({f->a->name, true});
        return;
      }
      bd_lits_into(f->a, out);
      return;
    default:
      if (f->a) bd_lits_into(f->a, out);
      if (f->b) bd_lits_into(f->b, out);
  }
}

// Negation normal form; preserves both extents pointwise.
inline BDRef bd_nnf(const BDRef& f, bool negated = false) {
  switch (f->kind) {
    case BDKind::Var: return negated ? bd_neg(f) : f;
    case BDKind::Neg: return bd_nnf(f->a, !negated);
    case BDKind::And: {
      auto l = bd_nnf(f->a, negated), r = bd_nnf(f->b, negated);
      return negated ? bd_or(l, r) : bd_and(l, r);
    }
    case BDKind::Or: {
      auto l = bd_nnf(f->a, negated), r = bd_nnf(f->b, negated);
      return negated ? bd_and(l, r) : bd_or(l, r);
    }
    case BDKind::Box: {
      auto body = bd_nnf(f->a, negated);
      return negated ? bd_dia(body, f->rel) : bd_box(body, f->rel);
    }
    case BDKind::Dia: {
      auto body = bd_nnf(f->a, negated);
      return negated ? bd_box(body, f->rel) : bd_dia(body, f->rel);
    }
  }
  throw internal_error("bad BD node");
}

// Outer layer.
enum class Tag { Var, Pr, Bl, Db, Cf, Uc, B, Pl, Pr1, Pr2 };

inline std::string tag_name(Tag t) {
  switch (t) {
    case Tag::Var: return "";
    case Tag::Pr: return "Pr";
    case Tag::Bl: return "Bl";
    case Tag::Db: return "Db";
    case Tag::Cf: return "Cf";
    case Tag::Uc: return "Uc";
    case Tag::B: return "B";
    case Tag::Pl: return "Pl";
    case Tag::Pr1: return "Pr1";
    case Tag::Pr2: return "Pr2";
  }
  throw internal_error("bad tag");
}

struct OF;
using ORef = std::shared_ptr<const OF>;

enum class OKind { Atom, BDNeg, LukNeg, NNeg, Delta, Impl, NImpl, And };

struct OF {
  OKind kind;
  // Atom payload: tag + body (modal) or tag=Var + name (propositional).
  Tag tag = Tag::Var;
  std::string name;
  BDRef body;
  ORef a, b;
};

inline ORef o_var(std::string n) {
  auto f = std::make_shared<OF>();
  f->kind = OKind::Atom;
  f->tag = Tag::Var;
  f->name = std::move(n);
  return f;
}
inline ORef o_atom(Tag t, BDRef body) {
  auto f = std::make_shared<OF>();
  f->kind = OKind::Atom;
  f->tag = t;
  f->body = std::move(body);
  return f;
}
inline ORef o_un(OKind k, ORef x) {
  auto f = std::make_shared<OF>();
  f->kind = k;
  f->a = std::move(x);
  return f;
}
inline ORef o_bin(OKind k, ORef x, ORef y) {
  auto f = std::make_shared<OF>();
  f->kind = k;
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}
inline ORef o_bdneg(ORef x) { return o_un(OKind::BDNeg, std::move(x)); }
inline ORef o_lneg(ORef x) { return o_un(OKind::LukNeg, std::move(x)); }
inline ORef o_nneg(ORef x) { return o_un(OKind::NNeg, std::move(x)); }
inline ORef o_delta(ORef x) { return o_un(OKind::Delta, std::move(x)); }
inline ORef o_impl(ORef x, ORef y) { return o_bin(OKind::Impl, std::move(x), std::move(y)); }
inline ORef o_nimpl(ORef x, ORef y) { return o_bin(OKind::NImpl, std::move(x), std::move(y)); }
inline ORef o_and(ORef x, ORef y) { return o_bin(OKind::And, std::move(x), std::move(y)); }

// Defined connectives of the Lukasiewicz family, expanded at construction.
inline ORef o_or_sugar(ORef x, ORef y) { return o_impl(o_impl(x, y), y); }
inline ORef o_and_sugar(ORef x, ORef y) {
  return o_lneg(o_or_sugar(o_lneg(std::move(x)), o_lneg(std::move(y))));
}
inline ORef o_oplus(ORef x, ORef y) { return o_impl(o_lneg(std::move(x)), std::move(y)); }
inline ORef o_odot(ORef x, ORef y) {
  return o_lneg(o_impl(std::move(x), o_lneg(std::move(y))));
}
inline ORef o_ominus(ORef x, ORef y) { return o_odot(std::move(x), o_lneg(std::move(y))); }
inline ORef o_iff(ORef x, ORef y) { return o_odot(o_impl(x, y), o_impl(y, x)); }

inline bool o_eq(const ORef& x, const ORef& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  if (x->kind == OKind::Atom)
    return x->tag == y->tag && x->name == y->name &&
           (x->tag == Tag::Var || bd_eq(x->body, y->body));
  return o_eq(x->a, y->a) && o_eq(x->b, y->b);
}

inline long o_len(const ORef& f) {
  switch (f->kind) {
    case OKind::Atom:
      return f->tag == Tag::Var ? 1 : 2 + bd_len(f->body);
    case OKind::BDNeg:
    case OKind::LukNeg:
    case OKind::NNeg:
    case OKind::Delta: return 1 + o_len(f->a);
    case OKind::Impl:
    case OKind::NImpl:
    case OKind::And: return o_len(f->a) + o_len(f->b) + 3;
  }
  throw internal_error("bad outer node");
}

inline void o_atoms_into(const ORef& f, std::vector<ORef>& out) {
  if (f->kind == OKind::Atom) {
    for (const auto& g : out)
      if (o_eq(g, f)) return;
    out.push_back(f);
    return;
  }
  if (f->a) o_atoms_into(f->a, out);
  if (f->b) o_atoms_into(f->b, out);
}

inline std::vector<ORef> o_atoms(const ORef& f) {
  std::vector<ORef> v;
  o_atoms_into(f, v);
  return v;
}

inline std::set<std::string> o_inner_vars(const ORef& f) {
  std::set<std::string> s;
  std::vector<ORef> atoms = o_atoms(f);
  for (const auto& a : atoms) {
    if (a->tag == Tag::Var)
      s.insert(a->name);
    else
      bd_vars_into(a->body, s);
  }
  return s;
}

// Display: recognize the expansion patterns and print them back as sugar.
namespace detail {

struct SugarMatch {
  const char* op;
  int prec;
  ORef l, r;
};

// precedence (outer): <-> 1, -> 2, | 3, & 4, (+)/(-) 5, (.) 6, unary 7
inline bool match_sugar(const ORef& f, SugarMatch& m) {
  if (f->kind == OKind::LukNeg && f->a->kind == OKind::Impl) {
    const ORef& A = f->a->a;
    const ORef& B = f->a->b;
    // x & y  ==  ~((~x -> ~y) -> ~y)
    if (A->kind == OKind::Impl && A->a->kind == OKind::LukNeg &&
        A->b->kind == OKind::LukNeg && B->kind == OKind::LukNeg &&
        o_eq(A->b, B)) {
      m = {"&", 4, A->a->a, B->a};
      return true;
    }
    // x <-> y  ==  ~((x -> y) -> ~(y -> x))
    if (A->kind == OKind::Impl && B->kind == OKind::LukNeg &&
        B->a->kind == OKind::Impl && o_eq(A->a, B->a->b) && o_eq(A->b, B->a->a)) {
      m = {"<->", 1, A->a, A->b};
      return true;
    }
    // x (-) y  ==  ~(x -> ~~y)
    if (B->kind == OKind::LukNeg && B->a->kind == OKind::LukNeg) {
      m = {"(-)", 5, A, B->a->a};
      return true;
    }
    // x (.) y  ==  ~(x -> ~y)
    if (B->kind == OKind::LukNeg) {
      m = {"(.)", 6, A, B->a};
      return true;
    }
  }
  if (f->kind == OKind::Impl) {
    // x (+) y  ==  ~x -> y
    if (f->a->kind == OKind::LukNeg) {
      m = {"(+)", 5, f->a->a, f->b};
      return true;
    }
    // x | y  ==  (x -> y) -> y
    if (f->a->kind == OKind::Impl && o_eq(f->a->b, f->b)) {
      m = {"|", 3, f->a->a, f->b};
      return true;
    }
  }
  return false;
}

inline std::string o_str_rec(const ORef& f, int parent_prec, bool sugar) {
  if (sugar) {
    SugarMatch m;
    if (match_sugar(f, m)) {
      bool right_assoc = std::string(m.op) == "->";
      std::string s = o_str_rec(m.l, m.prec + (right_assoc ? 1 : 0), sugar) + " " + m.op +
                      " " + o_str_rec(m.r, m.prec + (right_assoc ? 0 : 1), sugar);
      return parent_prec > m.prec ? "(" + s + ")" : s;
    }
  }
  switch (f->kind) {
    case OKind::Atom:
      if (f->tag == Tag::Var) return f->name;
      return tag_name(f->tag) + " " +
             (f->body->kind == BDKind::Var ? f->body->name
              : f->body->kind == BDKind::Neg || f->body->kind == BDKind::Box ||
                      f->body->kind == BDKind::Dia
                  ? bd_str(f->body)
                  : "(" + bd_str(f->body) + ")");
    case OKind::BDNeg: return "!" + o_str_rec(f->a, 7, sugar);
    case OKind::LukNeg:
    case OKind::NNeg: return "~" + o_str_rec(f->a, 7, sugar);
    case OKind::Delta: return "#" + o_str_rec(f->a, 7, sugar);
    case OKind::Impl:
    case OKind::NImpl: {
      std::string s = o_str_rec(f->a, 3, sugar) + " -> " + o_str_rec(f->b, 2, sugar);
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case OKind::And: {
      std::string s = o_str_rec(f->a, 4, sugar) + " & " + o_str_rec(f->b, 5, sugar);
      return parent_prec > 4 ? "(" + s + ")" : s;
    }
  }
  throw internal_error("bad outer node");
}

}  // namespace detail

inline std::string o_str(const ORef& f, bool resugar = true) {
  return detail::o_str_rec(f, 0, resugar);
}

}  // namespace bdtl
