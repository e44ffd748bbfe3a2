#pragma once

#include <string>
#include <utility>

#include "bdtl/common.hpp"
#include "bdtl/formula.hpp"

namespace bdtl {

namespace detail {

inline void check_len(const char* what, long out, long factor, long add, long in) {
  if (out > factor * in + add)
    throw internal_error(std::string(what) + " exceeded its length envelope: " +
                         std::to_string(out) + " > " + std::to_string(factor) + "*" +
                         std::to_string(in) + "+" + std::to_string(add));
}

inline BDRef dual_head_negated(const BDRef& body) {
  BDRef inner = bd_neg(body->a);
  return body->kind == BDKind::Box ? bd_dia(inner, body->rel) : bd_box(inner, body->rel);
}

// Rewrites the negation of an atom as an atom.  For probability atoms the
// negation moves onto the body; over a modal body the head flips to its dual
// so that the result is again a legal atom.  Belief atoms swap with their
// duals where the language has one.
inline ORef push_neg_atom(LogicId logic, const ORef& f) {
  switch (f->tag) {
    case Tag::Var: return o_bdneg(f);
    case Tag::Pr:
    case Tag::Pr1:
    case Tag::Pr2:
      if (f->body->kind == BDKind::Box || f->body->kind == BDKind::Dia)
        return o_atom(f->tag, dual_head_negated(f->body));
      return o_atom(f->tag, bd_neg(f->body));
    case Tag::B:
      return o_atom(logic == LogicId::BelNLuk ? Tag::Pl : Tag::B, bd_neg(f->body));
    case Tag::Pl: return o_atom(Tag::B, bd_neg(f->body));
    case Tag::Bl:
    case Tag::Db:
    case Tag::Cf:
    case Tag::Uc:
      throw input_error("negation is not part of the language of " +
                        std::string(logic_name(logic)));
  }
  throw internal_error("bad tag");
}

inline ORef push_plain(LogicId logic, const ORef& f);

// Rewrites !f without a leading negation.  The Lukasiewicz-family rules
// preserve both coordinates.  The NLuk-family rules for & and -> preserve
// the truth coordinate only: the falsity coordinate of a conjunction has no
// dual connective in that language, and validity reads just the first
// coordinate there.
inline ORef push_neg(LogicId logic, const ORef& f) {
  switch (f->kind) {
    case OKind::Atom: return push_neg_atom(logic, f);
    case OKind::BDNeg: return push_plain(logic, f->a);
    case OKind::LukNeg: return o_lneg(push_neg(logic, f->a));
    case OKind::NNeg: return o_nneg(o_nneg(push_plain(logic, f->a)));
    case OKind::Delta:
      return o_lneg(o_delta(o_lneg(push_neg(logic, f->a))));
    case OKind::Impl:
      return o_lneg(o_impl(push_neg(logic, f->b), push_neg(logic, f->a)));
    case OKind::NImpl:
      return o_nneg(o_nimpl(push_plain(logic, f->a), o_nneg(push_neg(logic, f->b))));
    case OKind::And:
      return o_nneg(o_and(o_nneg(push_neg(logic, f->a)), o_nneg(push_neg(logic, f->b))));
  }
  throw internal_error("bad outer node");
}

inline ORef push_plain(LogicId logic, const ORef& f) {
  switch (f->kind) {
    case OKind::Atom: return f;
    case OKind::BDNeg: return push_neg(logic, f->a);
    case OKind::LukNeg: return o_lneg(push_plain(logic, f->a));
    case OKind::NNeg: return o_nneg(push_plain(logic, f->a));
    case OKind::Delta: return o_delta(push_plain(logic, f->a));
    case OKind::Impl:
      return o_impl(push_plain(logic, f->a), push_plain(logic, f->b));
    case OKind::NImpl:
      return o_nimpl(push_plain(logic, f->a), push_plain(logic, f->b));
    case OKind::And:
      return o_and(push_plain(logic, f->a), push_plain(logic, f->b));
  }
  throw internal_error("bad outer node");
}

}  // namespace detail

// Moves every outer negation onto the atoms, where it is absorbed into the
// body (and, over modal or belief atoms, flips the head to its dual).  The
// result contains no BDNeg node above an atom; over the propositional pair
// logics a negated variable is already normal and stays put.
inline ORef neg_push(LogicId logic, const ORef& f) {
  ORef out = detail::push_plain(logic, f);
  detail::check_len("neg_push", o_len(out), 3, 3, o_len(f));
  return out;
}

// Probability atoms over one measure expressed through the four-valued ones:
// Pr phi becomes Bl phi (+) Cf phi, the connectives map unchanged.  Input
// must be negation-normalized first.
inline ORef to_four(const ORef& f) {
  struct Impl {
    static ORef go(const ORef& g) {
      switch (g->kind) {
        case OKind::Atom:
          if (g->tag != Tag::Pr)
            throw input_error("to_four expects Pr atoms, got " + tag_name(g->tag));
          if (g->body->kind == BDKind::Box || g->body->kind == BDKind::Dia)
            throw input_error("to_four does not apply to modal bodies");
          return o_oplus(o_atom(Tag::Bl, g->body), o_atom(Tag::Cf, g->body));
        case OKind::BDNeg:
          throw input_error("to_four expects an outer-negation-free formula");
        case OKind::LukNeg: return o_lneg(go(g->a));
        case OKind::Delta: return o_delta(go(g->a));
        case OKind::Impl: return o_impl(go(g->a), go(g->b));
        default:
          throw input_error("to_four expects a Lukasiewicz-family formula");
      }
    }
  };
  ORef out = Impl::go(f);
  detail::check_len("to_four", o_len(out), 3, 8, o_len(f));
  return out;
}

// Four-valued probability atoms expressed through a single measure:
//   Bl phi  ->  Pr phi (-) Pr(phi & !phi)
//   Db phi  ->  Pr !phi (-) Pr(phi & !phi)
//   Cf phi  ->  Pr(phi & !phi)
//   Uc phi  ->  ~Pr(phi | !phi)
inline ORef to_pm(const ORef& f) {
  struct Impl {
    static ORef conflict(const BDRef& body) {
      return o_atom(Tag::Pr, bd_and(body, bd_neg(body)));
    }
    static ORef go(const ORef& g) {
      switch (g->kind) {
        case OKind::Atom:
          switch (g->tag) {
            case Tag::Bl: return o_ominus(o_atom(Tag::Pr, g->body), conflict(g->body));
            case Tag::Db:
              return o_ominus(o_atom(Tag::Pr, bd_neg(g->body)), conflict(g->body));
            case Tag::Cf: return conflict(g->body);
            case Tag::Uc:
              return o_lneg(o_atom(Tag::Pr, bd_or(g->body, bd_neg(g->body))));
            default:
              throw input_error("to_pm expects Bl/Db/Cf/Uc atoms, got " +
                                tag_name(g->tag));
          }
        case OKind::BDNeg:
          throw input_error("to_pm expects an outer-negation-free formula");
        case OKind::LukNeg: return o_lneg(go(g->a));
        case OKind::Delta: return o_delta(go(g->a));
        case OKind::Impl: return o_impl(go(g->a), go(g->b));
        default:
          throw input_error("to_pm expects a Lukasiewicz-family formula");
      }
    }
  };
  ORef out = Impl::go(f);
  detail::check_len("to_pm", o_len(out), 4, 16, o_len(f));
  return out;
}

// Replaces each negated variable of a negation-normal body by a fresh
// variable carrying the reserved "__1" suffix, so the body mentions no
// negation at all.  The parser refuses "__" in user input, so the fresh
// names cannot collide.
inline BDRef bd_star(const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var: return f;
    case BDKind::Neg:
      if (f->a->kind != BDKind::Var)
        throw internal_error("bd_star expects a negation-normal body");
      return bd_var(f->a->name + "__1");
    case BDKind::And: return bd_and(bd_star(f->a), bd_star(f->b));
    case BDKind::Or: return bd_or(bd_star(f->a), bd_star(f->b));
    case BDKind::Box:
    case BDKind::Dia:
      throw internal_error("bd_star expects a propositional body");
  }
  throw internal_error("bad BD node");
}

// Strips body negation from every probability atom: the body is normalized
// to negation normal form, then negated variables become fresh primed
// variables.  Modal heads stay in place; only the part below them changes.
// Truth coordinates are preserved on the matching renamed model, and
// validity is preserved both ways.
inline ORef star_neg_removal(const ORef& f) {
  struct Impl {
    static BDRef body(const BDRef& b) {
      if (b->kind == BDKind::Box || b->kind == BDKind::Dia) {
        BDRef inner = body(b->a);
        return b->kind == BDKind::Box ? bd_box(inner, b->rel) : bd_dia(inner, b->rel);
      }
      BDRef n = bd_nnf(b);
      detail::check_len("negation normal form", bd_len(n), 2, 1, bd_len(b));
      return bd_star(n);
    }
    static ORef go(const ORef& g) {
      switch (g->kind) {
        case OKind::Atom:
          if (g->tag != Tag::Pr && g->tag != Tag::Pr1 && g->tag != Tag::Pr2)
            throw input_error("star_neg_removal expects probability atoms, got " +
                              tag_name(g->tag));
          return o_atom(g->tag, body(g->body));
        case OKind::BDNeg:
          throw input_error("star_neg_removal expects an outer-negation-free formula");
        case OKind::LukNeg: return o_lneg(go(g->a));
        case OKind::Delta: return o_delta(go(g->a));
        case OKind::Impl: return o_impl(go(g->a), go(g->b));
        default:
          throw input_error("star_neg_removal expects a Lukasiewicz-family formula");
      }
    }
  };
  return Impl::go(f);
}

namespace detail {

inline BDRef belief_body(const ORef& g, const char* what) {
  if (g->tag != Tag::B)
    throw input_error(std::string(what) + " expects B atoms, got " + tag_name(g->tag));
  return g->body;
}

}  // namespace detail

// Truth-coordinate image of a belief formula inside the modal probability
// logic: B phi becomes Pr([] phi), the connectives map unchanged.
inline ORef boxplus(const ORef& f) {
  switch (f->kind) {
    case OKind::Atom:
      return o_atom(Tag::Pr, bd_box(detail::belief_body(f, "boxplus"), 1));
    case OKind::BDNeg:
      throw input_error("boxplus expects an outer-negation-free formula");
    case OKind::LukNeg: return o_lneg(boxplus(f->a));
    case OKind::Delta: return o_delta(boxplus(f->a));
    case OKind::Impl: return o_impl(boxplus(f->a), boxplus(f->b));
    default: throw input_error("boxplus expects a Lukasiewicz-family formula");
  }
}

// Falsity-coordinate image of a belief formula: B phi becomes Pr([] !phi),
// and each connective maps to the one governing second coordinates, so the
// first coordinate of the image tracks the second coordinate of the input.
inline ORef boxminus(const ORef& f) {
  switch (f->kind) {
    case OKind::Atom:
      return o_atom(Tag::Pr, bd_box(bd_neg(detail::belief_body(f, "boxminus")), 1));
    case OKind::BDNeg:
      throw input_error("boxminus expects an outer-negation-free formula");
    case OKind::LukNeg: return o_lneg(boxminus(f->a));
    case OKind::Delta: return o_lneg(o_delta(o_lneg(boxminus(f->a))));
    case OKind::Impl: return o_ominus(boxminus(f->b), boxminus(f->a));
    default: throw input_error("boxminus expects a Lukasiewicz-family formula");
  }
}

// Belief and plausibility atoms expressed through the two-measure modal
// probability logic: B phi becomes Pr1([]1 phi), Pl phi becomes Pr2(<>2 phi).
inline ORef box_dia(const ORef& f) {
  switch (f->kind) {
    case OKind::Atom:
      if (f->tag == Tag::B) return o_atom(Tag::Pr1, bd_box(f->body, 1));
      if (f->tag == Tag::Pl) return o_atom(Tag::Pr2, bd_dia(f->body, 2));
      throw input_error("box_dia expects B/Pl atoms, got " + tag_name(f->tag));
    case OKind::BDNeg:
      throw input_error("box_dia expects an outer-negation-free formula");
    case OKind::NNeg: return o_nneg(box_dia(f->a));
    case OKind::And: return o_and(box_dia(f->a), box_dia(f->b));
    case OKind::NImpl: return o_nimpl(box_dia(f->a), box_dia(f->b));
    default: throw input_error("box_dia expects an NLuk-family formula");
  }
}

// Renames every B atom to a Pr atom and changes nothing else.  Sound in one
// direction only: belief validity follows from probability validity of the
// image, not conversely.
inline ORef b_to_pr(const ORef& f) {
  if (f->kind == OKind::Atom) {
    if (f->tag == Tag::B) return o_atom(Tag::Pr, f->body);
    if (f->tag == Tag::Var) return f;
    throw input_error("b_to_pr expects B atoms, got " + tag_name(f->tag));
  }
  auto g = std::make_shared<OF>(*f);
  if (f->a) g->a = b_to_pr(f->a);
  if (f->b) g->b = b_to_pr(f->b);
  return g;
}

}  // namespace bdtl
