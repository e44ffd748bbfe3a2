#pragma once

#include <deque>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bdtl/linarith.hpp"
#include "bdtl/luk.hpp"

namespace bdtl {

enum class Calculus { Luk2, NLuk };

enum class Dir { Le, Ge };

// A labelled formula: the claim that the side-1 or side-2 value of the
// formula is below or above the label, an affine expression over [0,1]
// label variables.
struct LabelledEntry {
  ORef formula;
  int side = 1;
  Dir dir = Dir::Le;
  LinExpr label;
};

inline std::string entry_str(const LabelledEntry& e) {
  std::string op = e.dir == Dir::Le ? " <=_" : " >=_";
  return o_str(e.formula) + op + std::to_string(e.side) + " " + e.label.str();
}

struct Branch {
  std::vector<LabelledEntry> entries;
  std::vector<NumericConstraint> constraints;
  std::deque<size_t> queue;  // unexpanded non-atomic entries, FIFO
  int fresh = 0;
  std::string id = "r";

  bool complete() const { return queue.empty(); }
  void push_entry(LabelledEntry e) {
    bool atomic = e.formula->kind == OKind::Atom;
    entries.push_back(std::move(e));
    if (!atomic) queue.push_back(entries.size() - 1);
  }
};

inline Branch root_branch(std::vector<LabelledEntry> entries,
                          std::vector<NumericConstraint> constraints = {}) {
  Branch b;
  b.constraints = std::move(constraints);
  for (LabelledEntry& e : entries) b.push_entry(std::move(e));
  return b;
}

inline std::string branch_str(const Branch& b) {
  std::string s = "branch " + b.id + "\n";
  for (const LabelledEntry& e : b.entries) s += "  " + entry_str(e) + "\n";
  for (const NumericConstraint& c : b.constraints) s += "  " + c.str() + "\n";
  return s;
}

namespace detail {

inline LinExpr one_minus(const LinExpr& i) { return LinExpr::constant(1) - i; }

}  // namespace detail

// Expands the first unexpanded entry of the branch, one successor per rule
// column, columns in printed order.  Fresh label variables are drawn from a
// per-branch counter, so names never clash inside one branch.
inline std::vector<Branch> expand(const Branch& b, Calculus calc) {
  if (b.complete()) throw input_error("branch is already complete");
  Branch base = b;
  size_t idx = base.queue.front();
  base.queue.pop_front();
  const LabelledEntry e = base.entries[idx];
  const LinExpr i = e.label;
  const bool le = e.dir == Dir::Le;
  const int s = e.side;
  const ORef& f = e.formula;

  auto require = [&](Calculus want) {
    if (calc != want)
      throw input_error("connective of '" + o_str(f) + "' is not in this calculus");
  };

  std::vector<Branch> out;
  auto child = [&](std::vector<LabelledEntry> es,
                   std::vector<NumericConstraint> cs = {}) {
    Branch nb = base;
    nb.id += "." + std::to_string(out.size());
    for (LabelledEntry& x : es) nb.push_entry(std::move(x));
    for (NumericConstraint& c : cs) nb.constraints.push_back(std::move(c));
    out.push_back(std::move(nb));
  };
  LinExpr j = LinExpr::var("j" + std::to_string(++base.fresh));
  auto num = [](LinExpr l, Rel r, LinExpr rr) {
    return NumericConstraint{std::move(l), r, std::move(rr)};
  };
  const LinExpr zero = LinExpr::constant(0), one = LinExpr::constant(1);
  const Dir down = Dir::Le, up = Dir::Ge;

  switch (f->kind) {
    case OKind::Atom: throw internal_error("atomic entry in the queue");

    case OKind::BDNeg:
      child({{f->a, 3 - s, e.dir, i}});
      break;

    case OKind::LukNeg:
      require(Calculus::Luk2);
      child({{f->a, s, le ? up : down, detail::one_minus(i)}});
      break;

    case OKind::NNeg:
      require(Calculus::NLuk);
      if (s == 1)
        child({{f->a, 1, le ? up : down, detail::one_minus(i)}});
      else
        child({{f->a, 1, e.dir, i}});
      break;

    case OKind::Delta:
      require(Calculus::Luk2);
      if (le) {
        child({}, {num(one, Rel::Le, i)});
        if (s == 1)
          child({{f->a, 1, down, j}}, {num(j, Rel::Lt, one)});
        else
          child({{f->a, 2, down, j}}, {num(j, Rel::Le, zero)});
      } else {
        child({}, {num(i, Rel::Le, zero)});
        if (s == 1)
          child({{f->a, 1, up, j}}, {num(one, Rel::Le, j)});
        else
          child({{f->a, 2, up, j}}, {num(zero, Rel::Lt, j)});
      }
      break;

    case OKind::Impl: {
      require(Calculus::Luk2);
      LinExpr comp = detail::one_minus(i) + j;  // 1 - i + j
      if (le && s == 1) {
        child({}, {num(one, Rel::Le, i)});
        child({{f->a, 1, up, comp}, {f->b, 1, down, j}}, {num(j, Rel::Le, i)});
      } else if (le && s == 2) {
        child({{f->a, 2, up, j}, {f->b, 2, down, i + j}});
      } else if (!le && s == 1) {
        child({{f->a, 1, down, comp}, {f->b, 1, up, j}});
      } else {
        child({}, {num(i, Rel::Le, zero)});
        child({{f->a, 2, down, j}, {f->b, 2, up, i + j}},
              {num(j, Rel::Le, detail::one_minus(i))});
      }
      break;
    }

    case OKind::NImpl: {
      require(Calculus::NLuk);
      LinExpr comp = detail::one_minus(i) + j;
      if (le && s == 1) {
        child({}, {num(one, Rel::Le, i)});
        child({{f->a, 1, up, comp}, {f->b, 1, down, j}}, {num(j, Rel::Le, i)});
      } else if (le && s == 2) {
        child({{f->a, 1, down, detail::one_minus(j)}, {f->b, 2, down, i + j}});
      } else if (!le && s == 1) {
        child({{f->a, 1, down, comp}, {f->b, 1, up, j}});
      } else {
        child({}, {num(i, Rel::Le, zero)});
        child({{f->a, 1, up, detail::one_minus(j)}, {f->b, 2, up, i + j}},
              {num(j, Rel::Le, detail::one_minus(i))});
      }
      break;
    }

    case OKind::And:
      require(Calculus::NLuk);
      if ((le && s == 1) || (!le && s == 2)) {
        child({{f->a, s, e.dir, i}});
        child({{f->b, s, e.dir, i}});
      } else {
        child({{f->a, s, e.dir, i}, {f->b, s, e.dir, i}});
      }
      break;
  }
  return out;
}

// Exhaustive left-to-right depth-first enumeration of complete branches.
inline std::vector<Branch> enumerate_branches(const Branch& root, Calculus calc,
                                              size_t budget = size_t(1) << 20) {
  std::vector<Branch> out;
  std::vector<Branch> stack{root};
  while (!stack.empty()) {
    Branch b = std::move(stack.back());
    stack.pop_back();
    if (b.complete()) {
      out.push_back(std::move(b));
      continue;
    }
    std::vector<Branch> next = expand(b, calc);
    for (auto it = next.rbegin(); it != next.rend(); ++it)
      stack.push_back(std::move(*it));
    if (out.size() + stack.size() > budget)
      throw input_error("branch budget exhausted");
  }
  return out;
}

// Follows one uniformly random column at every choice point.
inline Branch random_branch(const Branch& root, Calculus calc, std::mt19937_64& rng) {
  Branch b = root;
  while (!b.complete()) {
    std::vector<Branch> next = expand(b, calc);
    b = std::move(next[rng() % next.size()]);
  }
  return b;
}

inline std::string atom_key(const ORef& atom) { return o_str(atom); }

inline std::string atom_var(const ORef& atom, int side) {
  return (side == 1 ? "v1(" : "v2(") + atom_key(atom) + ")";
}

struct BranchSystem {
  LinSystem system;
  // LP variable name of each atomic entry, keyed back to the atom and side.
  std::map<std::string, std::pair<ORef, int>> atoms;
};

// Translation of a complete branch: one [0,1] variable per atomic entry and
// side, inequalities tying it to the entry labels, plus the accumulated
// numerical constraints.
inline BranchSystem branch_to_constraints(const Branch& b) {
  if (!b.complete()) throw input_error("branch is not complete");
  BranchSystem out;
  for (const LabelledEntry& e : b.entries) {
    if (e.formula->kind != OKind::Atom) continue;
    std::string name = atom_var(e.formula, e.side);
    out.atoms.emplace(name, std::make_pair(e.formula, e.side));
    LinExpr x = LinExpr::var(name);
    if (e.dir == Dir::Le)
      out.system.add(std::move(x), Rel::Le, e.label);
    else
      out.system.add(e.label, Rel::Le, std::move(x));
  }
  for (const NumericConstraint& c : b.constraints) out.system.constraints.push_back(c);
  return out;
}

// Re-evaluates every entry of a complete branch under a feasibility witness:
// atom values are read off the witness (unconstrained atoms default to zero),
// labels are evaluated over the witness, and each entry's claimed inequality
// is checked against the recursive evaluation.
inline bool branch_satisfied(const Branch& b, const std::map<std::string, Rat>& w,
                             Calculus calc) {
  auto atom = [&](const ORef& a) -> PairVal {
    auto look = [&](int side) -> Rat {
      auto it = w.find(atom_var(a, side));
      return it == w.end() ? Rat(0) : it->second;
    };
    return {look(1), look(2)};
  };
  auto label_value = [&](const LinExpr& l) {
    Rat r = l.cst;
    for (const auto& [v, c] : l.coef) {
      auto it = w.find(v);
      if (it == w.end()) throw internal_error("label variable " + v + " unassigned");
      r += c * it->second;
    }
    return r;
  };
  for (const LabelledEntry& e : b.entries) {
    PairVal v = calc == Calculus::Luk2 ? eval_luk2(e.formula, atom)
                                       : eval_nluk(e.formula, atom);
    Rat side = e.side == 1 ? v.t : v.f;
    Rat bound = label_value(e.label);
    if (e.dir == Dir::Le ? side > bound : side < bound) return false;
  }
  return true;
}

}  // namespace bdtl
