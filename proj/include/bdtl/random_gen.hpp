#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bdtl/formula.hpp"
#include "bdtl/kripke.hpp"
#include "bdtl/measure.hpp"
#include "bdtl/twolayer.hpp"

namespace bdtl {

// Seeded generators for models, measures, and formulas.  Everything here is a
// pure function of the generator state, so a seed reproduces a whole run.

inline Rat random_unit(std::mt19937_64& rng, int den = 8) {
  return Rat(static_cast<long>(rng() % (den + 1)), den);
}

inline BDModel random_base(std::mt19937_64& rng, int n,
                           const std::vector<std::string>& vars) {
  BDModel b;
  for (int i = 0; i < n; ++i) b.worlds.push_back("w" + std::to_string(i + 1));
  for (const std::string& name : vars) {
    b.declare(name);
    for (int w = 0; w < n; ++w) {
      if (rng() % 2) b.vplus[name].set(w);
      if (rng() % 2) b.vminus[name].set(w);
    }
  }
  return b;
}

inline BDModel random_base(std::mt19937_64& rng, int n, int vars) {
  std::vector<std::string> names;
  for (int v = 0; v < vars; ++v) names.push_back("p" + std::to_string(v + 1));
  return random_base(rng, n, names);
}

inline Measure random_probability(std::mt19937_64& rng, const BDModel& b) {
  int n = b.size();
  std::vector<Rat> w(n);
  Rat left = 1;
  for (int i = 0; i + 1 < n; ++i) {
    Rat x = left * Rat(rng() % 5, 4);
    w[i] = x;
    left -= x;
  }
  w[n - 1] = left;
  return Measure::atoms(std::move(w), b.worlds);
}

inline KripkeModel random_kripke(std::mt19937_64& rng, int n,
                                 const std::vector<std::string>& vars,
                                 bool two_rel) {
  KripkeModel m;
  m.base = random_base(rng, n, vars);
  auto random_partition = [&] {
    std::vector<BitSet> blocks;
    std::vector<int> owner(n);
    int k = 1 + static_cast<int>(rng() % n);
    for (int w = 0; w < n; ++w) owner[w] = static_cast<int>(rng() % k);
    for (int c = 0; c < k; ++c) {
      BitSet b(n);
      for (int w = 0; w < n; ++w)
        if (owner[w] == c) b.set(w);
      if (b.any()) blocks.push_back(b);
    }
    return blocks;
  };
  m.part1 = random_partition();
  m.pi1 = random_probability(rng, m.base);
  if (two_rel) {
    m.part2 = random_partition();
    m.pi2 = random_probability(rng, m.base);
  }
  m.validate();
  return m;
}

inline KripkeModel random_kripke(std::mt19937_64& rng, int n, int vars,
                                 bool two_rel) {
  std::vector<std::string> names;
  for (int v = 0; v < vars; ++v) names.push_back("p" + std::to_string(v + 1));
  return random_kripke(rng, n, names, two_rel);
}

inline MassFunction random_mass(std::mt19937_64& rng, const BDModel& b) {
  int n = b.size();
  MassFunction mf;
  mf.n = n;
  mf.names = b.worlds;
  int focal = 1 + static_cast<int>(rng() % 3);
  Rat left = 1;
  for (int i = 0; i < focal; ++i) {
    uint32_t mask = 1 + static_cast<uint32_t>(rng() % ((1u << n) - 1));
    Rat x = i + 1 == focal ? left : left * Rat(rng() % 5, 4);
    left -= x;
    mf.m[BitSet(n, mask)] += x;
  }
  mf.validate();
  return mf;
}

inline BDRef random_body(std::mt19937_64& rng, int vars) {
  auto leaf = [&] {
    BDRef v = bd_var("p" + std::to_string(1 + rng() % vars));
    return rng() % 2 ? bd_neg(v) : v;
  };
  BDRef f = leaf();
  int extra = static_cast<int>(rng() % 3);
  for (int i = 0; i < extra; ++i)
    f = rng() % 2 ? bd_and(f, leaf()) : bd_or(f, leaf());
  return f;
}

inline ORef random_atom(std::mt19937_64& rng, LogicId logic, int vars) {
  if (is_propositional(logic))
    return o_var("p" + std::to_string(1 + rng() % vars));
  BDRef body = random_body(rng, vars);
  switch (logic) {
    case LogicId::PrLuk2: return o_atom(Tag::Pr, body);
    case LogicId::FourPr:
      switch (rng() % 4) {
        case 0: return o_atom(Tag::Bl, body);
        case 1: return o_atom(Tag::Db, body);
        case 2: return o_atom(Tag::Cf, body);
        default: return o_atom(Tag::Uc, body);
      }
    case LogicId::BelLuk2: return o_atom(Tag::B, body);
    case LogicId::BelNLuk:
      return o_atom(rng() % 2 ? Tag::B : Tag::Pl, body);
    case LogicId::ProbS5:
      return o_atom(Tag::Pr, rng() % 2 ? bd_box(body, 1) : bd_dia(body, 1));
    case LogicId::ProbNLukS5: {
      int rel = 1 + static_cast<int>(rng() % 2);
      BDRef head = rng() % 2 ? bd_box(body, rel) : bd_dia(body, rel);
      return o_atom(rel == 1 ? Tag::Pr1 : Tag::Pr2, head);
    }
    default: throw internal_error("no atom shape for this logic");
  }
}

inline ORef random_outer(std::mt19937_64& rng, LogicId logic, int vars,
                         bool with_neg) {
  bool nluk = is_nluk_family(logic);
  bool neg = with_neg && logic != LogicId::LukDelta;
  ORef f = random_atom(rng, logic, vars);
  int steps = static_cast<int>(rng() % 4);
  for (int i = 0; i < steps; ++i) {
    switch (rng() % (neg ? 4 : 3)) {
      case 0: f = nluk ? o_nneg(f) : o_lneg(f); break;
      case 1:
        if (nluk)
          f = rng() % 2 ? o_and(f, random_atom(rng, logic, vars))
                        : o_and(random_atom(rng, logic, vars), f);
        else
          f = o_delta(f);
        break;
      case 2:
        f = rng() % 2 ? (nluk ? o_nimpl(f, random_atom(rng, logic, vars))
                              : o_impl(f, random_atom(rng, logic, vars)))
                      : (nluk ? o_nimpl(random_atom(rng, logic, vars), f)
                              : o_impl(random_atom(rng, logic, vars), f));
        break;
      default: f = o_bdneg(f); break;
    }
  }
  return f;
}

// A model of the right shape for one of the two-layer logics, over the given
// inner variables.  The belief and plausibility measures are drawn from
// independent mass functions: a dual pair would tie them together and hide
// countermodels that need bel and pl to disagree.
inline TLModel random_tl_model(std::mt19937_64& rng, LogicId logic,
                               const std::vector<std::string>& vars, int n) {
  switch (logic) {
    case LogicId::PrLuk2: {
      BDModel b = random_base(rng, n, vars);
      Measure mu = random_probability(rng, b);
      return tl_pr_luk2(std::move(b), std::move(mu), false);
    }
    case LogicId::FourPr: {
      BDModel b = random_base(rng, n, vars);
      Measure mu = random_probability(rng, b);
      return tl_four_pr(std::move(b), std::move(mu), false);
    }
    case LogicId::BelLuk2: {
      BDModel b = random_base(rng, n, vars);
      Measure bel = bel_from_mass(random_mass(rng, b));
      return tl_bel_luk2(std::move(b), std::move(bel), false);
    }
    case LogicId::BelNLuk: {
      BDModel b = random_base(rng, n, vars);
      Measure bel = bel_from_mass(random_mass(rng, b));
      Measure pl = pl_from_mass(random_mass(rng, b));
      return tl_bel_nluk(std::move(b), std::move(bel), std::move(pl), false);
    }
    case LogicId::ProbS5:
      return tl_prob_s5(random_kripke(rng, n, vars, false), false);
    case LogicId::ProbNLukS5:
      return tl_prob_nluk_s5(random_kripke(rng, n, vars, true), false);
    default:
      throw input_error("propositional logics have valuations, not models");
  }
}

}  // namespace bdtl
