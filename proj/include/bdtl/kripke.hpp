#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bdtl/measure.hpp"

namespace bdtl {

// S5 frames: relations are stored as partitions into clusters, so the
// equivalence laws hold by construction.  A second partition and measure are
// present only for the two-relation logics.
struct KripkeModel {
  BDModel base;
  std::vector<BitSet> part1, part2;
  Measure pi1, pi2;

  int size() const { return base.size(); }
  bool two_relations() const { return !part2.empty(); }

  const std::vector<BitSet>& partition(int rel) const {
    if (rel == 1) return part1;
    if (rel == 2 && two_relations()) return part2;
    throw input_error("the model has no relation with index " + std::to_string(rel));
  }

  const BitSet& cluster_of(int rel, int w) const {
    for (const BitSet& b : partition(rel))
      if (b.test(w)) return b;
    throw internal_error("world outside every cluster");
  }

  void validate() const {
    for (int rel = 1; rel <= (two_relations() ? 2 : 1); ++rel) {
      BitSet seen(size());
      for (const BitSet& b : partition(rel)) {
        if (b.none()) throw input_error("empty cluster in a partition");
        if ((seen & b).any()) throw input_error("overlapping clusters in a partition");
        seen = seen | b;
      }
      if (!(seen == BitSet::full(size())))
        throw input_error("partition does not cover all worlds");
    }
    auto check_pi = [&](const Measure& pi, const char* name) {
      if (pi.kind != Measure::Kind::Atoms || pi.n != size())
        throw input_error(std::string(name) + " must assign a weight to every world");
      if (!pi.classical_probability())
        throw input_error(std::string(name) + " must be a probability (weights sum to 1)");
    };
    check_pi(pi1, "pi1");
    if (two_relations()) check_pi(pi2, "pi2");
  }
};

// Extents over an S5 model: Box is true on a cluster iff the body is true
// throughout, false iff the body is false somewhere; Dia dually.
inline Extent kripke_extents(const KripkeModel& m, const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var:
    case BDKind::Neg:
    case BDKind::And:
    case BDKind::Or: {
      if (f->kind == BDKind::Var) return bd_extents(m.base, f);
      if (f->kind == BDKind::Neg) {
        Extent e = kripke_extents(m, f->a);
        return {e.neg, e.pos};
      }
      Extent l = kripke_extents(m, f->a), r = kripke_extents(m, f->b);
      if (f->kind == BDKind::And) return {l.pos & r.pos, l.neg | r.neg};
      return {l.pos | r.pos, l.neg & r.neg};
    }
    case BDKind::Box:
    case BDKind::Dia: {
      Extent body = kripke_extents(m, f->a);
      Extent out{BitSet(m.size()), BitSet(m.size())};
      for (const BitSet& c : m.partition(f->rel)) {
        bool all_pos = c.subset_of(body.pos);
        bool some_pos = c.intersects(body.pos);
        bool all_neg = c.subset_of(body.neg);
        bool some_neg = c.intersects(body.neg);
        bool in_pos = f->kind == BDKind::Box ? all_pos : some_pos;
        bool in_neg = f->kind == BDKind::Box ? some_neg : all_neg;
        if (in_pos) out.pos = out.pos | c;
        if (in_neg) out.neg = out.neg | c;
      }
      return out;
    }
  }
  throw internal_error("unreachable");
}

inline std::pair<bool, bool> eval_modal(const KripkeModel& m, int w, const BDRef& f) {
  Extent e = kripke_extents(m, f);
  return {e.pos.test(w), e.neg.test(w)};
}

inline bool fully_modalized(const BDRef& f, bool under_modal = false) {
  switch (f->kind) {
    case BDKind::Var: return under_modal;
    case BDKind::Neg: return fully_modalized(f->a, under_modal);
    case BDKind::And:
    case BDKind::Or:
      return fully_modalized(f->a, under_modal) && fully_modalized(f->b, under_modal);
    case BDKind::Box:
    case BDKind::Dia: return true;
  }
  throw internal_error("unreachable");
}

// One Box- or Dia-headed formula with a propositional body.
struct ModalAtom {
  bool box = true;
  int rel = 1;
  BDRef body;
};

inline Extent modal_atom_extents(const KripkeModel& m, const ModalAtom& g) {
  BDRef f = g.box ? bd_box(g.body, g.rel) : bd_dia(g.body, g.rel);
  return kripke_extents(m, f);
}

// The classical-literal universe shared by the canonical constructions: the
// literal order is p1, !p1, p2, !p2, ... over the sorted variable list, a
// state is a subset of literals encoded as a bitmask, and a cluster is a
// nonempty set of states encoded as a bitmask over state indices.
struct CanonicalSpace {
  std::vector<std::string> vars;

  explicit CanonicalSpace(std::vector<std::string> vs) : vars(std::move(vs)) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (lit_count() > 4)
      throw input_error("canonical constructions are limited to 4 literals (2 variables)");
  }

  int lit_count() const { return 2 * static_cast<int>(vars.size()); }
  int state_count() const { return 1 << lit_count(); }
  uint32_t cluster_universe() const { return (1u << state_count()) - 1; }

  std::string state_bits(uint32_t s) const {
    std::string b(lit_count(), '0');
    for (int j = 0; j < lit_count(); ++j)
      if (s & (1u << j)) b[j] = '1';
    return b.empty() ? "e" : b;
  }

  uint32_t state_from_bits(const std::string& b) const {
    if (b == "e" && lit_count() == 0) return 0;
    if (static_cast<int>(b.size()) != lit_count())
      throw input_error("state encoding '" + b + "' has the wrong width");
    uint32_t s = 0;
    for (int j = 0; j < lit_count(); ++j) {
      if (b[j] == '1')
        s |= (1u << j);
      else if (b[j] != '0')
        throw input_error("state encoding '" + b + "' is not a bitstring");
    }
    return s;
  }

  std::string cluster_label(uint32_t cluster) const {
    std::string out;
    for (int s = 0; s < state_count(); ++s) {
      if (!(cluster & (1u << s))) continue;
      if (!out.empty()) out += ";";
      out += state_bits(s);
    }
    return out;
  }

  uint32_t cluster_from_label(std::string label) const {
    if (label.rfind("u_", 0) == 0) label = label.substr(2);
    uint32_t cluster = 0;
    size_t pos = 0;
    while (pos <= label.size()) {
      size_t next = label.find(';', pos);
      std::string piece =
          label.substr(pos, next == std::string::npos ? next : next - pos);
      cluster |= (1u << state_from_bits(piece));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (cluster == 0) throw input_error("empty cluster label");
    return cluster;
  }

  // literal membership of a state
  bool state_has_pos(uint32_t s, int var) const { return s & (1u << (2 * var)); }
  bool state_has_neg(uint32_t s, int var) const { return s & (1u << (2 * var + 1)); }
};

// Positive/negative masks of a propositional body over all canonical states.
inline std::pair<uint32_t, uint32_t> state_masks(const CanonicalSpace& sp,
                                                 const BDRef& f) {
  switch (f->kind) {
    case BDKind::Var: {
      auto it = std::find(sp.vars.begin(), sp.vars.end(), f->name);
      if (it == sp.vars.end())
        throw input_error("variable '" + f->name + "' is outside the canonical space");
      int v = static_cast<int>(it - sp.vars.begin());
      uint32_t pos = 0, neg = 0;
      for (int s = 0; s < sp.state_count(); ++s) {
        if (sp.state_has_pos(s, v)) pos |= (1u << s);
        if (sp.state_has_neg(s, v)) neg |= (1u << s);
      }
      return {pos, neg};
    }
    case BDKind::Neg: {
      auto [p, n] = state_masks(sp, f->a);
      return {n, p};
    }
    case BDKind::And: {
      auto [p1, n1] = state_masks(sp, f->a);
      auto [p2, n2] = state_masks(sp, f->b);
      return {p1 & p2, n1 | n2};
    }
    case BDKind::Or: {
      auto [p1, n1] = state_masks(sp, f->a);
      auto [p2, n2] = state_masks(sp, f->b);
      return {p1 | p2, n1 & n2};
    }
    default:
      throw input_error("canonical state masks require a propositional body");
  }
}

// Truth/falsity of a Box/Dia atom on one canonical cluster.
inline bool cluster_pos(bool box, uint32_t cluster, uint32_t posmask, uint32_t negmask) {
  (void)negmask;
  if (box) return (cluster & ~posmask) == 0;
  return (cluster & posmask) != 0;
}
inline bool cluster_neg(bool box, uint32_t cluster, uint32_t posmask, uint32_t negmask) {
  (void)posmask;
  if (box) return (cluster & negmask) != 0;
  return (cluster & ~negmask) == 0;
}

// Explicit canonical model: one copy of every nonempty set of states, each
// set forming one cluster.  Guarded to small variable counts; the decision
// procedures enumerate clusters symbolically instead of building this.
inline KripkeModel canonical_s5_model(const std::vector<std::string>& vars) {
  CanonicalSpace sp(vars);
  int sc = sp.state_count();
  long long worlds = static_cast<long long>(sc) * (1LL << (sc - 1));
  if (worlds > 4096)
    throw input_error("explicit canonical model would have " +
                      std::to_string(worlds) + " worlds; limit is 4096");

  KripkeModel m;
  for (uint32_t cluster = 1; cluster <= sp.cluster_universe(); ++cluster) {
    for (int s = 0; s < sc; ++s)
      if (cluster & (1u << s))
        m.base.worlds.push_back(sp.cluster_label(cluster) + "@" + sp.state_bits(s));
  }
  int n = m.base.size();
  for (const std::string& v : sp.vars) m.base.declare(v);

  int w = 0;
  for (uint32_t cluster = 1; cluster <= sp.cluster_universe(); ++cluster) {
    BitSet block(n);
    for (int s = 0; s < sc; ++s) {
      if (!(cluster & (1u << s))) continue;
      block.set(w);
      for (size_t v = 0; v < sp.vars.size(); ++v) {
        if (sp.state_has_pos(s, static_cast<int>(v))) m.base.vplus[sp.vars[v]].set(w);
        if (sp.state_has_neg(s, static_cast<int>(v))) m.base.vminus[sp.vars[v]].set(w);
      }
      ++w;
    }
    m.part1.push_back(block);
  }
  m.pi1 = Measure::atoms(std::vector<Rat>(n, Rat(1, n)), m.base.worlds);
  return m;
}

// Small-model reduction: every cluster shrinks to at most 2m+1 states while
// the measures of all formulas in gamma keep their exact values.  The seed
// state of each shrunk cluster absorbs the removed mass.
inline KripkeModel shrink_model(const KripkeModel& m,
                                const std::vector<ModalAtom>& gamma) {
  if (m.two_relations())
    throw input_error("shrinking applies to single-relation models");
  int mm = static_cast<int>(gamma.size());
  int keep_cap = 2 * mm + 1;

  std::vector<Extent> bodies;
  for (const auto& g : gamma) bodies.push_back(bd_extents(m.base, g.body));

  BitSet kept(m.size());
  std::vector<Rat> weight(m.size(), Rat(0));
  std::vector<BitSet> new_blocks_old_idx;

  for (const BitSet& x : m.part1) {
    if (x.count() <= keep_cap) {
      for (int w : x.members()) weight[w] = m.pi1.atom[w];
      kept = kept | x;
      new_blocks_old_idx.push_back(x);
      continue;
    }
    std::vector<int> members = x.members();
    int seed = members.front();
    BitSet s(m.size());
    s.set(seed);

    auto ensure_witness = [&](const BitSet& target) {
      if (s.intersects(target)) return;
      for (int w : members)
        if (target.test(w)) {
          s.set(w);
          return;
        }
    };
    auto ensure_nonmember = [&](const BitSet& target) {
      // keep some state outside the target set
      if (!s.minus(target).none()) return;
      for (int w : members)
        if (!target.test(w)) {
          s.set(w);
          return;
        }
    };

    for (int i = 0; i < mm; ++i) {
      const Extent& e = bodies[i];
      bool phi_exists = gamma[i].box ? x.intersects(e.neg) : x.intersects(e.pos);
      if (phi_exists) ensure_witness(gamma[i].box ? e.neg : e.pos);
    }
    for (int i = 0; i < mm; ++i) {
      const Extent& e = bodies[i];
      bool phi_forall = gamma[i].box ? x.subset_of(e.pos) : x.subset_of(e.neg);
      if (!phi_forall) ensure_nonmember(gamma[i].box ? e.pos : e.neg);
    }

    Rat removed = 0;
    for (int w : members)
      if (!s.test(w)) removed += m.pi1.atom[w];
    for (int w : s.members()) weight[w] = m.pi1.atom[w];
    weight[seed] = m.pi1.atom[seed] + removed;
    kept = kept | s;
    new_blocks_old_idx.push_back(s);
  }

  // reindex to the surviving worlds
  std::vector<int> old_to_new(m.size(), -1);
  KripkeModel out;
  for (int w : kept.members()) {
    old_to_new[w] = out.base.size();
    out.base.worlds.push_back(m.base.worlds[w]);
  }
  int n = out.base.size();
  for (const auto& [v, e] : m.base.vplus) {
    out.base.declare(v);
    for (int w : e.members())
      if (old_to_new[w] >= 0) out.base.vplus[v].set(old_to_new[w]);
  }
  for (const auto& [v, e] : m.base.vminus) {
    out.base.declare(v);
    for (int w : e.members())
      if (old_to_new[w] >= 0) out.base.vminus[v].set(old_to_new[w]);
  }
  for (const BitSet& b : new_blocks_old_idx) {
    BitSet nb(n);
    for (int w : b.members()) nb.set(old_to_new[w]);
    out.part1.push_back(nb);
  }
  std::vector<Rat> ws(n);
  for (int w : kept.members()) ws[old_to_new[w]] = weight[w];
  out.pi1 = Measure::atoms(std::move(ws), out.base.worlds);
  return out;
}

// Sparse measure on the canonical model: mass per (cluster, state) pair.
struct CanonicalMeasure {
  CanonicalSpace space;
  std::map<std::pair<uint32_t, uint32_t>, Rat> mass;

  explicit CanonicalMeasure(CanonicalSpace sp) : space(std::move(sp)) {}

  Rat of_modal_atom(const ModalAtom& g, bool positive) const {
    auto [p, n] = state_masks(space, g.body);
    Rat s = 0;
    for (const auto& [key, v] : mass) {
      bool in = positive ? cluster_pos(g.box, key.first, p, n)
                         : cluster_neg(g.box, key.first, p, n);
      if (in) s += v;
    }
    return s;
  }

  Rat cluster_mass(uint32_t cluster) const {
    Rat s = 0;
    for (const auto& [key, v] : mass)
      if (key.first == cluster) s += v;
    return s;
  }
};

// The profile of a world: the set of literals it realizes, as a state index.
inline uint32_t world_profile(const CanonicalSpace& sp, const BDModel& base, int w) {
  uint32_t s = 0;
  for (size_t v = 0; v < sp.vars.size(); ++v) {
    auto ip = base.vplus.find(sp.vars[v]);
    auto in = base.vminus.find(sp.vars[v]);
    if (ip != base.vplus.end() && ip->second.test(w)) s |= (1u << (2 * v));
    if (in != base.vminus.end() && in->second.test(w)) s |= (1u << (2 * v + 1));
  }
  return s;
}

// Pushes one relation's measure onto the canonical model: each cluster maps
// to its profile-set twin, and each world's weight lands on its profile.
inline CanonicalMeasure transfer_measure_to_canonical(const KripkeModel& m,
                                                      const CanonicalSpace& sp,
                                                      int rel = 1) {
  CanonicalMeasure out(sp);
  const Measure& pi = rel == 1 ? m.pi1 : m.pi2;
  for (const BitSet& x : m.partition(rel)) {
    uint32_t cluster = 0;
    for (int w : x.members()) cluster |= (1u << world_profile(sp, m.base, w));
    for (int w : x.members())
      out.mass[{cluster, world_profile(sp, m.base, w)}] += pi.atom[w];
  }
  return out;
}

// Greatest bisimulation via partition refinement on the disjoint union; two
// models are bisimilar when they realize the same set of classes.
inline bool bisimilar(const KripkeModel& a, const KripkeModel& b) {
  if (a.two_relations() != b.two_relations()) return false;
  int na = a.size(), nb = b.size(), n = na + nb;

  std::set<std::string> vars;
  for (const auto& [v, _] : a.base.vplus) vars.insert(v);
  for (const auto& [v, _] : a.base.vminus) vars.insert(v);
  for (const auto& [v, _] : b.base.vplus) vars.insert(v);
  for (const auto& [v, _] : b.base.vminus) vars.insert(v);

  auto atom_profile = [&](int i) {
    const BDModel& base = i < na ? a.base : b.base;
    int w = i < na ? i : i - na;
    std::string p;
    for (const auto& v : vars) {
      auto ip = base.vplus.find(v);
      auto in = base.vminus.find(v);
      p += (ip != base.vplus.end() && ip->second.test(w)) ? '1' : '0';
      p += (in != base.vminus.end() && in->second.test(w)) ? '1' : '0';
    }
    return p;
  };
  auto cluster_members = [&](int i, int rel) {
    const KripkeModel& m = i < na ? a : b;
    int w = i < na ? i : i - na;
    std::vector<int> out;
    for (int x : m.cluster_of(rel, w).members()) out.push_back(i < na ? x : x + na);
    return out;
  };

  std::vector<int> cls(n);
  {
    std::map<std::string, int> ids;
    for (int i = 0; i < n; ++i) {
      std::string p = atom_profile(i);
      auto [it, _] = ids.insert({p, static_cast<int>(ids.size())});
      cls[i] = it->second;
    }
  }
  int rels = a.two_relations() ? 2 : 1;
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> key{cls[i]};
      for (int rel = 1; rel <= rels; ++rel) {
        std::set<int> succ;
        for (int j : cluster_members(i, rel)) succ.insert(cls[j]);
        key.push_back(-1);
        for (int c : succ) key.push_back(c);
      }
      auto [it, _] = ids.insert({key, static_cast<int>(ids.size())});
      next[i] = it->second;
    }
    if (next == cls) break;
    cls = next;
  }
  std::set<int> ca, cb;
  for (int i = 0; i < na; ++i) ca.insert(cls[i]);
  for (int i = na; i < n; ++i) cb.insert(cls[i]);
  return ca == cb;
}

// Belief and plausibility values induced by one relation and its measure.
struct BelPlValues {
  Rat bel_pos, bel_neg, pl_pos, pl_neg;
};

inline BelPlValues induced_bel_pl(const KripkeModel& m, const BDRef& phi) {
  if (m.two_relations())
    throw input_error("induced belief requires a single-relation model");
  auto pos_measure = [&](const BDRef& f) {
    Extent e = kripke_extents(m, f);
    return m.pi1(e.pos);
  };
  return {pos_measure(bd_box(phi, 1)), pos_measure(bd_box(bd_neg(phi), 1)),
          pos_measure(bd_dia(phi, 1)), pos_measure(bd_dia(bd_neg(phi), 1))};
}

// Set-level induced functions: bel(X) is the mass of worlds whose whole
// cluster sits inside X, pl(X) the mass of worlds whose cluster meets X.
inline Measure induced_bel_set(const KripkeModel& m) {
  if (m.size() > 12) throw input_error("set-level induction is limited to 12 worlds");
  std::map<BitSet, Rat> t;
  for (uint32_t mask = 0; mask < (1u << m.size()); ++mask) {
    BitSet x(m.size(), mask);
    Rat s = 0;
    for (int w = 0; w < m.size(); ++w)
      if (m.cluster_of(1, w).subset_of(x)) s += m.pi1.atom[w];
    t[x] = s;
  }
  return Measure::subsets(m.size(), std::move(t), m.base.worlds);
}

inline Measure induced_pl_set(const KripkeModel& m) {
  if (m.size() > 12) throw input_error("set-level induction is limited to 12 worlds");
  std::map<BitSet, Rat> t;
  for (uint32_t mask = 0; mask < (1u << m.size()); ++mask) {
    BitSet x(m.size(), mask);
    Rat s = 0;
    for (int w = 0; w < m.size(); ++w)
      if (m.cluster_of(1, w).intersects(x)) s += m.pi1.atom[w];
    t[x] = s;
  }
  return Measure::subsets(m.size(), std::move(t), m.base.worlds);
}

}  // namespace bdtl
