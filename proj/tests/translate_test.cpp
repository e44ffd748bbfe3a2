#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bdtl/parser.hpp"
#include "bdtl/translate.hpp"
#include "bdtl/twolayer.hpp"

using namespace bdtl;

namespace {

BDModel fig_base() {
  BDModel b;
  b.worlds = {"w1", "w2", "w3"};
  b.declare("p");
  b.declare("q");
  b.vplus["p"].set(0);
  b.vminus["p"].set(2);
  b.vplus["q"].set(0);
  b.vminus["q"].set(0);
  b.vminus["q"].set(1);
  return b;
}

Measure fig_measure() {
  return Measure::atoms({Rat(1, 3), Rat(1, 2), Rat(1, 6)},
                        {"w1", "w2", "w3"});
}

BDModel random_base(std::mt19937_64& rng, int n, int vars) {
  BDModel b;
  for (int i = 0; i < n; ++i) b.worlds.push_back("w" + std::to_string(i + 1));
  for (int v = 0; v < vars; ++v) {
    std::string name = "p" + std::to_string(v + 1);
    b.declare(name);
    for (int w = 0; w < n; ++w) {
      if (rng() % 2) b.vplus[name].set(w);
      if (rng() % 2) b.vminus[name].set(w);
    }
  }
  return b;
}

Measure random_probability(std::mt19937_64& rng, const BDModel& b) {
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

KripkeModel random_kripke(std::mt19937_64& rng, int n, int vars, bool two_rel) {
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

MassFunction random_mass(std::mt19937_64& rng, const BDModel& b) {
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

BDRef random_body(std::mt19937_64& rng, int vars) {
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

ORef random_atom(std::mt19937_64& rng, LogicId logic, int vars) {
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

ORef random_outer(std::mt19937_64& rng, LogicId logic, int vars, bool with_neg) {
  bool nluk = is_nluk_family(logic);
  ORef f = random_atom(rng, logic, vars);
  int steps = static_cast<int>(rng() % 4);
  for (int i = 0; i < steps; ++i) {
    switch (rng() % (with_neg ? 4 : 3)) {
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

bool outer_neg_free(const ORef& f) {
  if (f->kind == OKind::BDNeg) return false;
  if (f->kind == OKind::Atom) return true;
  return outer_neg_free(f->a) && (!f->b || outer_neg_free(f->b));
}

bool body_neg_free(const BDRef& f) {
  if (f->kind == BDKind::Neg) return false;
  return (!f->a || body_neg_free(f->a)) && (!f->b || body_neg_free(f->b));
}

// Extends a model with one fresh variable per base variable whose positive
// extent is the base variable's negative extent.
BDModel starred_base(const BDModel& b) {
  BDModel s = b;
  for (const auto& [name, neg] : b.vminus) {
    std::string primed = name + "__1";
    s.declare(primed);
    s.vplus[primed] = neg;
  }
  return s;
}

}  // namespace

TEST_CASE("pushing negation inward: examples", "[translate]") {
  auto pushed = [](LogicId logic, const std::string& in, const std::string& want) {
    ORef got = neg_push(logic, parse_formula(logic, in));
    INFO(in << "  pushed to  " << o_str(got));
    CHECK(o_eq(got, parse_formula(logic, want)));
  };

  SECTION("single-measure probability") {
    pushed(LogicId::PrLuk2, "!Pr p", "Pr !p");
    pushed(LogicId::PrLuk2, "!!Pr p", "Pr p");
    pushed(LogicId::PrLuk2, "!~Pr p", "~Pr !p");
    pushed(LogicId::PrLuk2, "!(Pr p -> Pr q)", "~(Pr !q -> Pr !p)");
    pushed(LogicId::PrLuk2, "!#Pr p", "~#~Pr !p");
    pushed(LogicId::PrLuk2, "Pr p -> !Pr q", "Pr p -> Pr !q");
  }

  SECTION("belief over the square") {
    pushed(LogicId::BelLuk2, "!B p", "B !p");
    pushed(LogicId::BelLuk2, "!(B p -> B q)", "~(B !q -> B !p)");
  }

  SECTION("belief and plausibility swap as duals") {
    pushed(LogicId::BelNLuk, "!B p", "Pl !p");
    pushed(LogicId::BelNLuk, "!Pl p", "B !p");
    pushed(LogicId::BelNLuk, "!~B p", "~~B p");
    pushed(LogicId::BelNLuk, "!(B p & Pl q)", "~(~Pl !p & ~B !q)");
    pushed(LogicId::BelNLuk, "!(B p -> Pl q)", "~(B p -> ~B !q)");
  }

  SECTION("modal heads flip to their duals") {
    pushed(LogicId::ProbS5, "!Pr [] p", "Pr <> !p");
    pushed(LogicId::ProbS5, "!Pr <> (p & q)", "Pr [] !(p & q)");
    pushed(LogicId::ProbNLukS5, "!Pr1 []1 p", "Pr1 <>1 !p");
    pushed(LogicId::ProbNLukS5, "!Pr2 <>2 p", "Pr2 []2 !p");
  }

  SECTION("formulas without negation are untouched") {
    ORef f = parse_formula(LogicId::FourPr, "Bl p (+) Cf p");
    CHECK(o_eq(neg_push(LogicId::FourPr, f), f));
  }
}

TEST_CASE("pushing negation preserves evaluation", "[translate]") {
  std::mt19937_64 rng(20260819);

  SECTION("paired logics keep both coordinates") {
    for (int t = 0; t < 60; ++t) {
      BDModel b = random_base(rng, 2 + static_cast<int>(rng() % 3), 2);
      TLModel m = tl_pr_luk2(b, random_probability(rng, b));
      ORef a = random_outer(rng, LogicId::PrLuk2, 2, true);
      ORef n = neg_push(LogicId::PrLuk2, a);
      INFO(o_str(a) << "  pushed to  " << o_str(n));
      CHECK(outer_neg_free(n));
      PairVal va = tl_eval(m, a).v, vn = tl_eval(m, n).v;
      CHECK(va.t == vn.t);
      CHECK(va.f == vn.f);
    }
    for (int t = 0; t < 40; ++t) {
      BDModel b = random_base(rng, 2 + static_cast<int>(rng() % 3), 2);
      TLModel m = tl_bel_luk2(b, bel_from_mass(random_mass(rng, b)));
      ORef a = random_outer(rng, LogicId::BelLuk2, 2, true);
      ORef n = neg_push(LogicId::BelLuk2, a);
      PairVal va = tl_eval(m, a).v, vn = tl_eval(m, n).v;
      CHECK(va.t == vn.t);
      CHECK(va.f == vn.f);
    }
    for (int t = 0; t < 40; ++t) {
      TLModel m = tl_prob_s5(random_kripke(rng, 2 + static_cast<int>(rng() % 4), 2, false));
      ORef a = random_outer(rng, LogicId::ProbS5, 2, true);
      ORef n = neg_push(LogicId::ProbS5, a);
      PairVal va = tl_eval(m, a).v, vn = tl_eval(m, n).v;
      CHECK(va.t == vn.t);
      CHECK(va.f == vn.f);
    }
  }

  SECTION("the NLuk family keeps the truth coordinate") {
    for (int t = 0; t < 40; ++t) {
      BDModel b = random_base(rng, 2 + static_cast<int>(rng() % 3), 2);
      MassFunction mf = random_mass(rng, b);
      TLModel m = tl_bel_nluk(b, bel_from_mass(mf), pl_from_mass(mf));
      ORef a = random_outer(rng, LogicId::BelNLuk, 2, true);
      ORef n = neg_push(LogicId::BelNLuk, a);
      INFO(o_str(a) << "  pushed to  " << o_str(n));
      CHECK(outer_neg_free(n));
      CHECK(tl_eval(m, a).v.t == tl_eval(m, n).v.t);
    }
    for (int t = 0; t < 40; ++t) {
      TLModel m =
          tl_prob_nluk_s5(random_kripke(rng, 2 + static_cast<int>(rng() % 4), 2, true));
      ORef a = random_outer(rng, LogicId::ProbNLukS5, 2, true);
      ORef n = neg_push(LogicId::ProbNLukS5, a);
      CHECK(tl_eval(m, a).v.t == tl_eval(m, n).v.t);
    }
  }
}

TEST_CASE("four-valued image: examples", "[translate]") {
  auto image = [](const std::string& in, const std::string& want) {
    ORef got = to_four(parse_formula(LogicId::PrLuk2, in));
    INFO(in << "  maps to  " << o_str(got));
    CHECK(o_eq(got, parse_formula(LogicId::FourPr, want)));
  };
  image("Pr p", "Bl p (+) Cf p");
  image("~Pr p", "~(Bl p (+) Cf p)");
  image("Pr p -> #Pr q", "(Bl p (+) Cf p) -> #(Bl q (+) Cf q)");

  CHECK_THROWS_AS(to_four(parse_formula(LogicId::PrLuk2, "!Pr p")), input_error);
  CHECK_THROWS_AS(to_four(parse_formula(LogicId::FourPr, "Bl p")), input_error);
}

TEST_CASE("single-measure image: examples", "[translate]") {
  auto image = [](const std::string& in, const std::string& want) {
    ORef got = to_pm(parse_formula(LogicId::FourPr, in));
    INFO(in << "  maps to  " << o_str(got));
    CHECK(o_eq(got, parse_formula(LogicId::PrLuk2, want)));
  };
  image("Bl p", "Pr p (-) Pr (p & !p)");
  image("Db p", "Pr !p (-) Pr (p & !p)");
  image("Cf p", "Pr (p & !p)");
  image("Uc p", "~Pr (p | !p)");
  image("#Bl p -> Cf q", "#(Pr p (-) Pr (p & !p)) -> Pr (q & !q)");

  CHECK_THROWS_AS(to_pm(parse_formula(LogicId::PrLuk2, "Pr p")), input_error);
}

TEST_CASE("the two images preserve values over a shared classical measure",
          "[translate]") {
  std::mt19937_64 rng(1123581321);

  SECTION("fixed values on the three-world example") {
    TLModel pr = tl_pr_luk2(fig_base(), fig_measure());
    TLModel four = tl_four_pr(fig_base(), fig_measure());
    auto pm_value = [&](const std::string& s) {
      return tl_eval(pr, to_pm(parse_formula(LogicId::FourPr, s))).v.t;
    };
    CHECK(pm_value("Bl (q | !q)") == Rat(1, 2));
    CHECK(pm_value("Bl (p & !q)") == 0);
    CHECK(pm_value("Db (p & !q)") == Rat(1, 6));
    CHECK(pm_value("Cf (p & !q)") == Rat(1, 3));
    ORef a = parse_formula(LogicId::PrLuk2, "Pr (p & !q)");
    CHECK(tl_eval(four, to_four(a)).v.t == Rat(1, 3));
  }

  SECTION("random formulas agree both ways") {
    for (int t = 0; t < 60; ++t) {
      BDModel b = random_base(rng, 2 + static_cast<int>(rng() % 3), 2);
      Measure mu = random_probability(rng, b);
      TLModel pr = tl_pr_luk2(b, mu);
      TLModel four = tl_four_pr(b, mu);

      ORef a = neg_push(LogicId::PrLuk2, random_outer(rng, LogicId::PrLuk2, 2, true));
      INFO("forward: " << o_str(a));
      Rat e1 = tl_eval(pr, a).v.t;
      CHECK(e1 == tl_eval(four, to_four(a)).v.t);
      CHECK(e1 == tl_eval(pr, to_pm(to_four(a))).v.t);

      ORef beta = random_outer(rng, LogicId::FourPr, 2, false);
      INFO("backward: " << o_str(beta));
      Rat e4 = tl_eval(four, beta).v.t;
      CHECK(e4 == tl_eval(pr, to_pm(beta)).v.t);
      CHECK(e4 == tl_eval(four, to_four(to_pm(beta))).v.t);
    }
  }
}

TEST_CASE("star removal: examples", "[translate]") {
  ORef a = star_neg_removal(parse_formula(LogicId::PrLuk2, "Pr !p"));
  CHECK(o_eq(a, o_atom(Tag::Pr, bd_var("p__1"))));

  ORef b = star_neg_removal(parse_formula(LogicId::PrLuk2, "Pr !(p | !q)"));
  CHECK(o_eq(b, o_atom(Tag::Pr, bd_and(bd_var("p__1"), bd_var("q")))));

  ORef c = star_neg_removal(parse_formula(LogicId::PrLuk2, "Pr (p & q)"));
  CHECK(o_eq(c, o_atom(Tag::Pr, bd_and(bd_var("p"), bd_var("q")))));

  ORef d = star_neg_removal(parse_formula(LogicId::ProbS5, "Pr [] !p"));
  CHECK(o_eq(d, o_atom(Tag::Pr, bd_box(bd_var("p__1"), 1))));

  CHECK_THROWS_AS(star_neg_removal(parse_formula(LogicId::PrLuk2, "!Pr p")),
                  input_error);
}

TEST_CASE("star removal preserves truth on the extended model", "[translate]") {
  std::mt19937_64 rng(271828);

  SECTION("plain bodies") {
    for (int t = 0; t < 60; ++t) {
      BDModel b = random_base(rng, 2 + static_cast<int>(rng() % 3), 2);
      Measure mu = random_probability(rng, b);
      TLModel m0 = tl_pr_luk2(b, mu);
      TLModel m1 = tl_pr_luk2(starred_base(b), mu);
      ORef a = neg_push(LogicId::PrLuk2, random_outer(rng, LogicId::PrLuk2, 2, true));
      ORef s = star_neg_removal(a);
      INFO(o_str(a) << "  starred to  " << o_str(s));
      for (const ORef& atom : o_atoms(s)) CHECK(body_neg_free(atom->body));
      CHECK(tl_eval(m0, a).v.t == tl_eval(m1, s).v.t);
    }
  }

  SECTION("bodies under modal heads") {
    for (int t = 0; t < 40; ++t) {
      KripkeModel k = random_kripke(rng, 2 + static_cast<int>(rng() % 4), 2, false);
      KripkeModel ks = k;
      ks.base = starred_base(k.base);
      TLModel m0 = tl_prob_s5(k);
      TLModel m1 = tl_prob_s5(ks);
      ORef a = neg_push(LogicId::ProbS5, random_outer(rng, LogicId::ProbS5, 2, true));
      ORef s = star_neg_removal(a);
      CHECK(tl_eval(m0, a).v.t == tl_eval(m1, s).v.t);
    }
  }
}

TEST_CASE("box images: examples", "[translate]") {
  ORef bp = parse_formula(LogicId::BelLuk2, "B p");
  CHECK(o_eq(boxplus(bp), parse_formula(LogicId::ProbS5, "Pr [] p")));
  CHECK(o_eq(boxminus(bp), parse_formula(LogicId::ProbS5, "Pr [] !p")));

  ORef imp = parse_formula(LogicId::BelLuk2, "B p -> B q");
  CHECK(o_eq(boxplus(imp), parse_formula(LogicId::ProbS5, "Pr [] p -> Pr [] q")));
  CHECK(o_eq(boxminus(imp),
             parse_formula(LogicId::ProbS5, "Pr [] !q (-) Pr [] !p")));

  ORef dl = parse_formula(LogicId::BelLuk2, "#B p");
  CHECK(o_eq(boxplus(dl), parse_formula(LogicId::ProbS5, "#Pr [] p")));
  CHECK(o_eq(boxminus(dl), parse_formula(LogicId::ProbS5, "~#~Pr [] !p")));

  CHECK(o_eq(box_dia(parse_formula(LogicId::BelNLuk, "B p")),
             parse_formula(LogicId::ProbNLukS5, "Pr1 []1 p")));
  CHECK(o_eq(box_dia(parse_formula(LogicId::BelNLuk, "Pl q")),
             parse_formula(LogicId::ProbNLukS5, "Pr2 <>2 q")));
  CHECK(o_eq(box_dia(parse_formula(LogicId::BelNLuk, "B p & ~Pl q")),
             parse_formula(LogicId::ProbNLukS5, "Pr1 []1 p & ~Pr2 <>2 q")));

  CHECK_THROWS_AS(boxplus(parse_formula(LogicId::BelNLuk, "Pl p")), input_error);
  CHECK_THROWS_AS(box_dia(parse_formula(LogicId::PrLuk2, "#Pr p")), input_error);
}

TEST_CASE("box images track belief on the induced models", "[translate]") {
  std::mt19937_64 rng(6180339);

  SECTION("single relation carries the pair through both images") {
    for (int t = 0; t < 40; ++t) {
      int n = 2 + static_cast<int>(rng() % 4);
      KripkeModel k = random_kripke(rng, n, 2, false);
      TLModel mb = tl_bel_luk2(k.base, induced_bel_set(k));
      TLModel ms = tl_prob_s5(k);
      ORef a = neg_push(LogicId::BelLuk2, random_outer(rng, LogicId::BelLuk2, 2, true));
      INFO(o_str(a));
      PairVal v = tl_eval(mb, a).v;
      CHECK(v.t == tl_eval(ms, boxplus(a)).v.t);
      CHECK(v.f == tl_eval(ms, boxminus(a)).v.t);
    }
  }

  SECTION("two relations carry the truth coordinate") {
    for (int t = 0; t < 40; ++t) {
      int n = 2 + static_cast<int>(rng() % 4);
      KripkeModel k = random_kripke(rng, n, 2, true);
      KripkeModel r1, r2;
      r1.base = k.base;
      r1.part1 = k.part1;
      r1.pi1 = k.pi1;
      r2.base = k.base;
      r2.part1 = k.part2;
      r2.pi1 = k.pi2;
      TLModel mb = tl_bel_nluk(k.base, induced_bel_set(r1), induced_pl_set(r2));
      TLModel ms = tl_prob_nluk_s5(k);
      ORef a = neg_push(LogicId::BelNLuk, random_outer(rng, LogicId::BelNLuk, 2, true));
      INFO(o_str(a));
      CHECK(tl_eval(mb, a).v.t == tl_eval(ms, box_dia(a)).v.t);
    }
  }
}

TEST_CASE("tag renaming into the probability language", "[translate]") {
  ORef a = parse_formula(LogicId::BelLuk2, "!B p -> ~#B (p & q)");
  CHECK(o_eq(b_to_pr(a), parse_formula(LogicId::PrLuk2, "!Pr p -> ~#Pr (p & q)")));
  CHECK(o_eq(b_to_pr(parse_formula(LogicId::BelLuk2, "B p")),
             parse_formula(LogicId::PrLuk2, "Pr p")));
}

TEST_CASE("length envelopes hold on random formulas", "[translate]") {
  std::mt19937_64 rng(31415926);
  for (int t = 0; t < 300; ++t) {
    ORef a = random_outer(rng, LogicId::PrLuk2, 2, true);
    ORef n = neg_push(LogicId::PrLuk2, a);
    CHECK(o_len(n) <= 3 * o_len(a) + 3);
    CHECK(o_len(to_four(n)) <= 3 * o_len(n) + 8);

    ORef beta = random_outer(rng, LogicId::FourPr, 2, false);
    CHECK(o_len(to_pm(beta)) <= 4 * o_len(beta) + 16);

    ORef c = random_outer(rng, LogicId::BelNLuk, 2, true);
    CHECK(o_len(neg_push(LogicId::BelNLuk, c)) <= 3 * o_len(c) + 3);
  }
}
