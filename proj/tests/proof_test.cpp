#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "bdtl/decide.hpp"
#include "bdtl/parser.hpp"
#include "bdtl/proof.hpp"

using namespace bdtl;

namespace {

ORef fml(LogicId logic, const std::string& src) {
  return parse_formula(logic, src);
}

ProofStep ax(std::string scheme) { return {"axiom", std::move(scheme), 0, 0}; }
ProofStep prem(long i) { return {"premise", "", i, 0}; }
ProofStep mp(long i, long j) { return {"mp", "", i, j}; }
ProofStep dnec(long i) { return {"delta-nec", "", i, 0}; }
ProofStep conf(long i) { return {"conf", "", i, 0}; }

Proof proof_of(LogicId calc,
               const std::vector<std::pair<std::string, ProofStep>>& lines) {
  Proof p;
  p.calculus = calc;
  for (const auto& [src, by] : lines) p.lines.push_back({fml(calc, src), by});
  return p;
}

}  // namespace

TEST_CASE("axiom schemes match their instances", "[proof]") {
  SECTION("weakening instantiated with modal atoms") {
    auto m = match_axiom(LogicId::PrLuk2, "w",
                         fml(LogicId::PrLuk2, "Pr p -> (Pr q -> Pr p)"));
    REQUIRE(m.has_value());
    REQUIRE(o_eq(m->outer.at("?0"), fml(LogicId::PrLuk2, "Pr p")));
    REQUIRE(o_eq(m->outer.at("?1"), fml(LogicId::PrLuk2, "Pr q")));
    REQUIRE_FALSE(match_axiom(LogicId::PrLuk2, "w",
                              fml(LogicId::PrLuk2, "Pr p -> (Pr q -> Pr q)")));
  }

  SECTION("monotonicity discharges its entailment") {
    REQUIRE(match_axiom(LogicId::PrLuk2, "pm-mon",
                        fml(LogicId::PrLuk2, "Pr (p & q) -> Pr p")));
    REQUIRE_FALSE(match_axiom(LogicId::PrLuk2, "pm-mon",
                              fml(LogicId::PrLuk2, "Pr p -> Pr q")));
    REQUIRE(match_axiom(
        LogicId::FourPr, "4mon",
        fml(LogicId::FourPr,
            "(Bl (p & q) (+) Cf (p & q)) -> (Bl p (+) Cf p)")));
    REQUIRE_FALSE(match_axiom(
        LogicId::FourPr, "4mon",
        fml(LogicId::FourPr, "(Bl p (+) Cf p) -> (Bl q (+) Cf q)")));
  }

  SECTION("inclusion-exclusion is matched structurally") {
    REQUIRE(match_axiom(
        LogicId::PrLuk2, "pm-ex",
        fml(LogicId::PrLuk2,
            "Pr (p | q) <-> ((Pr p (-) Pr (p & q)) (+) Pr q)")));
    REQUIRE_FALSE(match_axiom(
        LogicId::PrLuk2, "pm-ex",
        fml(LogicId::PrLuk2,
            "Pr (p | q) <-> ((Pr p (-) Pr (q & p)) (+) Pr q)")));
  }

  SECTION("equivalence cells need interchangeable bodies") {
    REQUIRE(match_axiom(LogicId::FourPr, "4equiv",
                        fml(LogicId::FourPr, "Db (p & q) <-> Db (q & p)")));
    REQUIRE_FALSE(match_axiom(LogicId::FourPr, "4equiv",
                              fml(LogicId::FourPr, "Db p <-> Db q")));
  }

  SECTION("partition subtraction needs four distinct cells") {
    REQUIRE(match_axiom(
        LogicId::FourPr, "4part2",
        fml(LogicId::FourPr,
            "((Bl p (+) Db p (+) Cf p (+) Uc p) (-) Uc p)"
            " <-> (Bl p (+) Db p (+) Cf p)")));
    REQUIRE_FALSE(match_axiom(
        LogicId::FourPr, "4part2",
        fml(LogicId::FourPr,
            "((Bl p (+) Db p (+) Cf p (+) Bl p) (-) Bl p)"
            " <-> (Bl p (+) Db p (+) Cf p)")));
  }

  SECTION("outer lines run through the propositional decider") {
    REQUIRE(match_axiom(LogicId::FourPr, "outer",
                        fml(LogicId::FourPr, "Bl p -> Bl p")));
    REQUIRE_FALSE(match_axiom(LogicId::PrLuk2, "outer",
                              fml(LogicId::PrLuk2, "Pr p (+) Pr !p")));
    REQUIRE_THROWS_AS(
        match_axiom(LogicId::LukDelta, "outer", fml(LogicId::LukDelta, "p")),
        input_error);
    REQUIRE_THROWS_AS(match_axiom(LogicId::FourPr, "pm-mon",
                                  fml(LogicId::FourPr, "Bl p -> Bl p")),
                      input_error);
  }
}

TEST_CASE("accepted instances are valid", "[proof]") {
  struct Case {
    LogicId logic;
    const char* scheme;
    const char* src;
  };
  const Case cases[] = {
      {LogicId::LukDelta, "waj",
       "((p -> q) -> q) -> ((q -> p) -> p)"},
      {LogicId::LukDelta, "delta4", "#(p | q) -> (#p | #q)"},
      {LogicId::Luk2Delta, "neg-delta", "!#p <-> ~#~!p"},
      {LogicId::Luk2Delta, "neg-impl",
       "(~!p -> ~!q) <-> ~!(p -> q)"},
      {LogicId::PrLuk2, "pm-neg", "Pr !(p & q) <-> ! Pr (p & q)"},
      {LogicId::PrLuk2, "pm-ex",
       "Pr (p | q) <-> ((Pr p (-) Pr (p & q)) (+) Pr q)"},
      {LogicId::FourPr, "4part1", "Bl q (+) Db q (+) Cf q (+) Uc q"},
      {LogicId::FourPr, "4neg", "Bl !p <-> Db p"},
      {LogicId::FourPr, "4contr", "Cf p <-> Cf (p & !p)"},
      {LogicId::FourPr, "4ex",
       "(Bl (p | q) (+) Cf (p | q)) <-> ((Bl p (+) Cf p) (-)"
       " (Bl (p & q) (+) Cf (p & q)) (+) (Bl q (+) Cf q))"},
  };
  for (const Case& c : cases) {
    INFO(c.scheme << ": " << c.src);
    ORef f = fml(c.logic, c.src);
    REQUIRE(match_axiom(c.logic, c.scheme, f).has_value());
    REQUIRE(decide(c.logic, {}, f).outcome == Outcome::Valid);
  }
}

TEST_CASE("proofs check line by line", "[proof]") {
  SECTION("delta round trip") {
    Proof p = proof_of(
        LogicId::LukDelta,
        {{"p -> (q -> p)", ax("w")},
         {"#(p -> (q -> p))", dnec(1)},
         {"#(p -> (q -> p)) -> (p -> (q -> p))", ax("delta2")},
         {"p -> (q -> p)", mp(2, 3)}});
    ProofReport r = check_proof(p);
    INFO(r.reason);
    REQUIRE(r.ok);
  }

  SECTION("conflation from a premise") {
    Proof p = proof_of(LogicId::Luk2Delta,
                       {{"p & q", prem(1)},
                        {"~!(p & q)", conf(1)},
                        {"!!(p & q) <-> (p & q)", ax("invol")}});
    ProofReport r = check_proof(p, {fml(LogicId::Luk2Delta, "p & q")});
    INFO(r.reason);
    REQUIRE(r.ok);
  }

  SECTION("probability weakening chain") {
    Proof p = proof_of(LogicId::PrLuk2,
                       {{"Pr p", prem(1)},
                        {"Pr p -> Pr (p | q)", ax("pm-mon")},
                        {"Pr (p | q)", mp(1, 2)}});
    ProofReport r = check_proof(p, {fml(LogicId::PrLuk2, "Pr p")});
    INFO(r.reason);
    REQUIRE(r.ok);
  }

  SECTION("four-probability chain") {
    Proof p = proof_of(
        LogicId::FourPr,
        {{"~ Bl (p & !p)", ax("4contr")},
         {"~ Bl (p & !p) -> (Uc q -> ~ Bl (p & !p))", ax("w")},
         {"Uc q -> ~ Bl (p & !p)", mp(1, 2)},
         {"#(Uc q -> ~ Bl (p & !p))", dnec(3)}});
    ProofReport r = check_proof(p);
    INFO(r.reason);
    REQUIRE(r.ok);
  }

  SECTION("renaming the inner variables changes nothing") {
    Proof p = proof_of(LogicId::PrLuk2,
                       {{"Pr u", prem(1)},
                        {"Pr u -> Pr (u | v)", ax("pm-mon")},
                        {"Pr (u | v)", mp(1, 2)}});
    REQUIRE(check_proof(p, {fml(LogicId::PrLuk2, "Pr u")}).ok);
  }
}

TEST_CASE("mutations are rejected at the bad line", "[proof]") {
  Proof base = proof_of(LogicId::PrLuk2,
                        {{"Pr p", prem(1)},
                         {"Pr p -> Pr (p | q)", ax("pm-mon")},
                         {"Pr (p | q)", mp(1, 2)}});
  std::vector<ORef> prems = {fml(LogicId::PrLuk2, "Pr p")};
  REQUIRE(check_proof(base, prems).ok);

  SECTION("swapped modus ponens operands") {
    Proof p = base;
    p.lines[2].by = mp(2, 1);
    ProofReport r = check_proof(p, prems);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.line == 3);
    REQUIRE(r.reason.find("modus ponens") != std::string::npos);
  }

  SECTION("wrong scheme id") {
    Proof p = base;
    p.lines[1].by = ax("pm-neg");
    ProofReport r = check_proof(p, prems);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.line == 2);
  }

  SECTION("unknown scheme id") {
    Proof p = base;
    p.lines[1].by = ax("pm-upward");
    ProofReport r = check_proof(p, prems);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.line == 2);
    REQUIRE(r.reason.find("does not belong") != std::string::npos);
  }

  SECTION("premise index out of range") {
    Proof p = base;
    p.lines[0].by = prem(2);
    ProofReport r = check_proof(p, prems);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.line == 1);
  }

  SECTION("rule citing a later line") {
    Proof p = base;
    p.lines[2].by = mp(1, 3);
    ProofReport r = check_proof(p, prems);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.line == 3);
  }

  SECTION("conflation outside its calculi") {
    Proof p = proof_of(LogicId::FourPr, {{"~ Bl (p & !p)", ax("4contr")},
                                         {"~ Bl (p & !p)", conf(1)}});
    ProofReport r = check_proof(p);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.line == 2);
    REQUIRE(r.reason.find("not available") != std::string::npos);
  }

  SECTION("empty proof") {
    Proof p;
    p.calculus = LogicId::PrLuk2;
    REQUIRE_FALSE(check_proof(p).ok);
  }

  SECTION("calculus without a proof system") {
    Proof p;
    p.calculus = LogicId::BelLuk2;
    p.lines.push_back({fml(LogicId::BelLuk2, "B p"), ax("w")});
    REQUIRE_THROWS_AS(check_proof(p), input_error);
  }
}
