#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bdtl/linarith.hpp"

using namespace bdtl;

namespace {

LinExpr lx(const std::string& v, Rat c = 1) { return LinExpr::var(v, std::move(c)); }
LinExpr lc(Rat c) { return LinExpr::constant(std::move(c)); }

bool satisfies(const LinSystem& s, const std::map<std::string, Rat>& a,
               bool strictly_checked = true) {
  for (const auto& c : s.constraints) {
    Rat l = c.left.eval(a), r = c.right.eval(a);
    bool ok = c.rel == Rel::Le ? l <= r
              : c.rel == Rel::Lt ? (strictly_checked ? l < r : l <= r)
                                 : l == r;
    if (!ok) return false;
  }
  for (const auto& [v, x] : a)
    if (!in_unit(x)) return false;
  return true;
}

LinSystem random_system(std::mt19937_64& rng, int vars, int rows, bool with_strict) {
  LinSystem s;
  auto expr = [&] {
    LinExpr e;
    for (int v = 0; v < vars; ++v) {
      int c = static_cast<int>(rng() % 5) - 2;
      if (c != 0) e += lx("x" + std::to_string(v + 1), Rat(c));
    }
    e += lc(Rat(static_cast<int>(rng() % 9) - 2, 2));
    return e;
  };
  for (int i = 0; i < rows; ++i) {
    Rel r = rng() % 4 == 0 ? Rel::Eq : Rel::Le;
    if (with_strict && rng() % 3 == 0) r = Rel::Lt;
    s.add(expr(), r, expr());
  }
  return s;
}

}  // namespace

TEST_CASE("feasibility on small fixed systems", "[linarith]") {
  SECTION("an upper bound below one is satisfiable") {
    LinSystem s;
    s.add(lx("x"), Rel::Le, lx("c"));
    s.add(lx("c"), Rel::Lt, lc(1));
    Feasibility f = feasible(s);
    REQUIRE(f.ok);
    CHECK(satisfies(s, f.witness));
  }

  SECTION("contradictory bounds") {
    LinSystem s;
    s.add(lx("x"), Rel::Le, lc(0));
    s.add(lc(1), Rel::Le, lx("x"));
    Feasibility f = feasible(s);
    CHECK_FALSE(f.ok);
    CHECK(!f.reason.empty());
  }

  SECTION("equalities force a gap") {
    LinSystem s;
    s.add(lx("u1") + lx("u2"), Rel::Eq, lc(1));
    s.add(lx("u1"), Rel::Eq, lx("z"));
    s.add(lx("z"), Rel::Le, lc(Rat(1, 3)));
    s.add(lx("u2"), Rel::Le, lc(Rat(1, 2)));
    CHECK_FALSE(feasible(s).ok);
  }

  SECTION("the unit bounds are implicit") {
    LinSystem s;
    s.add(lc(2), Rel::Le, lx("x"));
    CHECK_FALSE(feasible(s).ok);

    LinSystem t;
    t.add(lc(Rat(5, 2)), Rel::Le, lx("x") + lx("y"));
    CHECK_FALSE(feasible(t).ok);

    LinSystem u;
    u.add(lc(Rat(3, 2)), Rel::Le, lx("x") + lx("y"));
    Feasibility f = feasible(u);
    REQUIRE(f.ok);
    CHECK(satisfies(u, f.witness));
  }

  SECTION("an empty system is satisfiable") { CHECK(feasible(LinSystem{}).ok); }
}

TEST_CASE("strict inequalities are handled natively", "[linarith]") {
  SECTION("strict against the matching non-strict bound") {
    LinSystem s;
    s.add(lx("x"), Rel::Lt, lc(1));
    s.add(lc(1), Rel::Le, lx("x"));
    CHECK_FALSE(feasible(s).ok);
  }

  SECTION("an open interval yields an interior witness") {
    LinSystem s;
    s.add(lx("x"), Rel::Lt, lc(Rat(1, 3)));
    s.add(lc(Rat(1, 4)), Rel::Lt, lx("x"));
    Feasibility f = feasible(s);
    REQUIRE(f.ok);
    CHECK(f.witness.at("x") > Rat(1, 4));
    CHECK(f.witness.at("x") < Rat(1, 3));
  }

  SECTION("a strict cycle is empty") {
    LinSystem s;
    s.add(lx("x"), Rel::Le, lx("y"));
    s.add(lx("y"), Rel::Lt, lx("x"));
    CHECK_FALSE(feasible(s).ok);
    LinSystem t;
    t.add(lx("x"), Rel::Lt, lx("x"));
    CHECK_FALSE(feasible(t).ok);
  }
}

TEST_CASE("equality chains substitute through", "[linarith]") {
  LinSystem s;
  s.add(lx("x"), Rel::Eq, lx("y"));
  s.add(lx("y"), Rel::Eq, lx("z"));
  s.add(lx("z"), Rel::Eq, lc(1));
  Feasibility f = feasible(s);
  REQUIRE(f.ok);
  CHECK(f.witness.at("x") == 1);
  CHECK(f.witness.at("y") == 1);

  LinSystem t;
  t.add(lx("x"), Rel::Eq, lx("y"));
  t.add(lx("x") + lx("y"), Rel::Eq, lc(1));
  Feasibility g = feasible(t);
  REQUIRE(g.ok);
  CHECK(g.witness.at("x") == Rat(1, 2));

  LinSystem u;
  u.add(lx("x"), Rel::Eq, lx("x"));
  CHECK(feasible(u).ok);
}

TEST_CASE("elimination agrees with the simplex oracle", "[linarith]") {
  std::mt19937_64 rng(97531);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int t = 0; t < 300; ++t) {
    LinSystem s = random_system(rng, 2 + static_cast<int>(rng() % 3),
                                3 + static_cast<int>(rng() % 5), false);
    Feasibility fm = feasible(s);
    Feasibility sx = feasible_simplex(s);
    INFO(s.dump_lp());
    REQUIRE(fm.ok == sx.ok);
    if (fm.ok) {
      ++feasible_seen;
      CHECK(satisfies(s, fm.witness));
      CHECK(satisfies(s, sx.witness));
    } else {
      ++infeasible_seen;
    }
  }
  CHECK(feasible_seen > 20);
  CHECK(infeasible_seen > 20);

  LinSystem strict;
  strict.add(lx("x"), Rel::Lt, lc(1));
  CHECK_THROWS_AS(feasible_simplex(strict), input_error);
}

TEST_CASE("strictness only shrinks the solution set", "[linarith]") {
  std::mt19937_64 rng(86420);
  for (int t = 0; t < 200; ++t) {
    LinSystem s = random_system(rng, 2 + static_cast<int>(rng() % 2),
                                3 + static_cast<int>(rng() % 4), true);
    LinSystem relaxed = s;
    for (auto& c : relaxed.constraints)
      if (c.rel == Rel::Lt) c.rel = Rel::Le;
    Feasibility fs = feasible(s);
    Feasibility fr = feasible(relaxed);
    INFO(s.dump_lp());
    if (fs.ok) {
      CHECK(fr.ok);
      CHECK(satisfies(s, fs.witness));
    }
    if (!fr.ok) CHECK_FALSE(fs.ok);
  }
}

TEST_CASE("systems print one constraint per line", "[linarith]") {
  LinSystem s;
  s.add(lx("x", Rat(3, 4)) + lx("y"), Rel::Lt, lc(2));
  s.add(lx("x") - lx("y", Rat(1, 2)), Rel::Eq, lc(0));
  CHECK(s.dump_lp() == "3/4 x + 1 y < 2\n1 x - 1/2 y = 0\n");
}
