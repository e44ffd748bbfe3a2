#pragma once

#include <algorithm>
#include <map>
#include <string>

#include "bdtl/formula.hpp"

namespace bdtl {

namespace luk {

inline Rat neg(const Rat& a) { return 1 - a; }
inline Rat delta(const Rat& a) { return a == 1 ? Rat(1) : Rat(0); }
inline Rat conj(const Rat& a, const Rat& b) { return std::min(a, b); }
inline Rat disj(const Rat& a, const Rat& b) { return std::max(a, b); }
inline Rat impl(const Rat& a, const Rat& b) {
  Rat r = 1 - a + b;
  return r < 1 ? r : Rat(1);
}
inline Rat strong_conj(const Rat& a, const Rat& b) {
  Rat r = a + b - 1;
  return r > 0 ? r : Rat(0);
}
inline Rat strong_disj(const Rat& a, const Rat& b) {
  Rat r = a + b;
  return r < 1 ? r : Rat(1);
}
inline Rat truncated_minus(const Rat& a, const Rat& b) {
  Rat r = a - b;
  return r > 0 ? r : Rat(0);
}

}  // namespace luk

struct PairVal {
  Rat t, f;
  bool operator==(const PairVal& o) const { return t == o.t && f == o.f; }
};

inline std::string pair_str(const PairVal& v) {
  return "(" + rat_str(v.t) + ", " + rat_str(v.f) + ")";
}

// Single-component Lukasiewicz evaluation (Delta extension); atoms valued in [0,1].
template <typename AtomFn>
Rat eval_luk_delta(const ORef& f, AtomFn&& atom) {
  switch (f->kind) {
    case OKind::Atom: return atom(f);
    case OKind::LukNeg: return luk::neg(eval_luk_delta(f->a, atom));
    case OKind::Delta: return luk::delta(eval_luk_delta(f->a, atom));
    case OKind::Impl:
      return luk::impl(eval_luk_delta(f->a, atom), eval_luk_delta(f->b, atom));
    default:
      throw input_error("connective outside the single-valued Lukasiewicz language");
  }
}

// Paired Lukasiewicz evaluation: independent truth and falsity coordinates,
// with the inner negation swapping them.
template <typename AtomFn>
PairVal eval_luk2(const ORef& f, AtomFn&& atom) {
  switch (f->kind) {
    case OKind::Atom: return atom(f);
    case OKind::BDNeg: {
      PairVal v = eval_luk2(f->a, atom);
      return {v.f, v.t};
    }
    case OKind::LukNeg: {
      PairVal v = eval_luk2(f->a, atom);
      return {luk::neg(v.t), luk::neg(v.f)};
    }
    case OKind::Delta: {
      PairVal v = eval_luk2(f->a, atom);
      return {luk::delta(v.t), luk::neg(luk::delta(luk::neg(v.f)))};
    }
    case OKind::Impl: {
      PairVal x = eval_luk2(f->a, atom), y = eval_luk2(f->b, atom);
      return {luk::impl(x.t, y.t), luk::truncated_minus(y.f, x.f)};
    }
    default:
      throw input_error("connective outside the paired Lukasiewicz language");
  }
}

// Paired evaluation for the weak-implication language with min-conjunction.
template <typename AtomFn>
PairVal eval_nluk(const ORef& f, AtomFn&& atom) {
  switch (f->kind) {
    case OKind::Atom: return atom(f);
    case OKind::BDNeg: {
      PairVal v = eval_nluk(f->a, atom);
      return {v.f, v.t};
    }
    case OKind::NNeg: {
      PairVal v = eval_nluk(f->a, atom);
      return {luk::neg(v.t), v.t};
    }
    case OKind::And: {
      PairVal x = eval_nluk(f->a, atom), y = eval_nluk(f->b, atom);
      return {luk::conj(x.t, y.t), luk::disj(x.f, y.f)};
    }
    case OKind::NImpl: {
      PairVal x = eval_nluk(f->a, atom), y = eval_nluk(f->b, atom);
      return {luk::impl(x.t, y.t), luk::strong_conj(x.t, y.f)};
    }
    default:
      throw input_error("connective outside the weak-implication language");
  }
}

inline Rat eval_luk_delta_vals(const ORef& f, const std::map<std::string, Rat>& v) {
  return eval_luk_delta(f, [&](const ORef& a) -> Rat {
    auto it = v.find(a->name);
    if (it == v.end()) throw input_error("unassigned atom: " + a->name);
    return it->second;
  });
}

inline PairVal eval_luk2_vals(const ORef& f, const std::map<std::string, PairVal>& v) {
  return eval_luk2(f, [&](const ORef& a) -> PairVal {
    auto it = v.find(a->name);
    if (it == v.end()) throw input_error("unassigned atom: " + a->name);
    return it->second;
  });
}

inline PairVal eval_nluk_vals(const ORef& f, const std::map<std::string, PairVal>& v) {
  return eval_nluk(f, [&](const ORef& a) -> PairVal {
    auto it = v.find(a->name);
    if (it == v.end()) throw input_error("unassigned atom: " + a->name);
    return it->second;
  });
}

}  // namespace bdtl
