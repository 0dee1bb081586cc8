#include "cpcause/sm.hpp"

#include "cpcause/causation.hpp"
#include "cpcause/engine.hpp"
#include "cpcause/transform.hpp"

#include <algorithm>
#include <set>

namespace cpcause {

int StructuralModel::index_of(const std::string& name) const {
  for (size_t i = 0; i < innate.size(); ++i)
    if (innate[i].name == name) return static_cast<int>(i);
  for (size_t i = 0; i < derived.size(); ++i)
    if (derived[i].name == name) return static_cast<int>(innate.size() + i);
  return -1;
}

const std::string& StructuralModel::var_name(int i) const {
  if (is_innate(i)) return innate.at(static_cast<size_t>(i)).name;
  return derived.at(static_cast<size_t>(i - innate_count())).name;
}

void StructuralModel::validate() const {
  std::set<std::string> seen;
  for (const InnateVar& v : innate) {
    if (!seen.insert(v.name).second)
      throw Error(ErrorKind::syntax, "variable " + v.name + " declared twice");
    if (v.stat_prob <= 0 || v.stat_prob >= 1)
      throw Error(ErrorKind::probability_sum,
                  "probability of " + v.name + " must lie strictly between 0 and 1");
    if (v.norm_prob && (*v.norm_prob <= 0 || *v.norm_prob >= 1))
      throw Error(ErrorKind::probability_sum,
                  "norm of " + v.name + " must lie strictly between 0 and 1");
  }
  for (size_t i = 0; i < derived.size(); ++i) {
    const DerivedVar& v = derived[i];
    if (!seen.insert(v.name).second)
      throw Error(ErrorKind::syntax, "variable " + v.name + " declared twice");
    int self = innate_count() + static_cast<int>(i);
    std::vector<const Formula*> stack{&v.equation};
    while (!stack.empty()) {
      const Formula* f = stack.back();
      stack.pop_back();
      if (f->kind == Formula::Kind::atom) {
        int idx = index_of(f->name);
        if (idx < 0)
          throw Error(ErrorKind::unknown_atom,
                      "equation of " + v.name + " refers to unknown variable " + f->name);
        if (idx >= self)
          throw Error(ErrorKind::cyclic_model,
                      "equation of " + v.name + " must only use earlier variables, not " +
                          f->name);
      }
      for (const Formula& child : f->children) stack.push_back(&child);
    }
  }
  for (const auto& u : contexts)
    if (u.size() != innate.size())
      throw Error(ErrorKind::syntax, "context does not assign every innate variable");
}

bool eval_equation(const StructuralModel& m, const Formula& f, const World& w) {
  switch (f.kind) {
    case Formula::Kind::atom: {
      int idx = m.index_of(f.name);
      if (idx < 0) throw Error(ErrorKind::unknown_atom, "unknown variable " + f.name);
      return w.at(static_cast<size_t>(idx));
    }
    case Formula::Kind::neg:
      return !eval_equation(m, f.children.front(), w);
    case Formula::Kind::conj:
      return std::all_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_equation(m, c, w); });
    case Formula::Kind::disj:
      return std::any_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_equation(m, c, w); });
  }
  return false;
}

World world_for_context(const StructuralModel& m, const Context& u) {
  if (u.size() != m.innate.size())
    throw Error(ErrorKind::syntax, "context does not assign every innate variable");
  World w(static_cast<size_t>(m.var_count()), false);
  for (size_t i = 0; i < u.size(); ++i) w[i] = u[i];
  for (size_t i = 0; i < m.derived.size(); ++i)
    w[m.innate.size() + i] = eval_equation(m, m.derived[i].equation, w);
  return w;
}

Context context_of(const StructuralModel& m, const World& w) {
  return Context(w.begin(), w.begin() + m.innate_count());
}

namespace {

// a variable's typical value; innate typicality follows the governing
// probability, derived typicality follows the equation inside the same world
bool takes_typical_value(const StructuralModel& m, const World& w, int i,
                         TypicalityMode mode) {
  if (m.is_innate(i)) {
    const InnateVar& v = m.innate[static_cast<size_t>(i)];
    Rational governing =
        mode == TypicalityMode::normative_first && v.norm_prob ? *v.norm_prob : v.stat_prob;
    if (governing == Rational(1, 2))
      throw Error(ErrorKind::ambiguous_typicality,
                  v.name + " has governing probability exactly 1/2, no typical value");
    bool typical = governing > Rational(1, 2);
    return w.at(static_cast<size_t>(i)) == typical;
  }
  const DerivedVar& v = m.derived.at(static_cast<size_t>(i - m.innate_count()));
  return w.at(static_cast<size_t>(i)) == eval_equation(m, v.equation, w);
}

} // namespace

NormalityVerdict normality_compare(const StructuralModel& m, const World& w1,
                                   const World& w2, TypicalityMode mode) {
  bool above = false, below = false;
  for (int i = 0; i < m.var_count(); ++i) {
    bool t1 = takes_typical_value(m, w1, i, mode);
    bool t2 = takes_typical_value(m, w2, i, mode);
    if (t1 && !t2) above = true;
    if (!t1 && t2) below = true;
  }
  if (above && below) return NormalityVerdict::incomparable;
  if (above) return NormalityVerdict::more;
  if (below) return NormalityVerdict::less;
  return NormalityVerdict::equal;
}

bool at_least_as_normal(const StructuralModel& m, const World& w1, const World& w2,
                        TypicalityMode mode) {
  auto v = normality_compare(m, w1, w2, mode);
  return v == NormalityVerdict::more || v == NormalityVerdict::equal;
}

namespace {

using Clause = std::vector<Literal>;

Clause merge_clauses(const Clause& a, const Clause& b) {
  Clause out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// negation normal form pushed all the way down, then or-over-and distribution
std::vector<Clause> to_cnf(const Formula& f, bool negated, const CPTheory& t) {
  switch (f.kind) {
    case Formula::Kind::atom: {
      auto id = t.atom_id(f.name);
      if (!id) throw Error(ErrorKind::unknown_atom, "unknown variable " + f.name);
      return {{Literal{*id, !negated}}};
    }
    case Formula::Kind::neg:
      return to_cnf(f.children.front(), !negated, t);
    case Formula::Kind::conj:
    case Formula::Kind::disj: {
      bool conjunctive = (f.kind == Formula::Kind::conj) != negated;
      if (conjunctive) {
        std::vector<Clause> out;
        for (const Formula& child : f.children) {
          auto sub = to_cnf(child, negated, t);
          out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
      }
      std::vector<Clause> acc{{}};
      for (const Formula& child : f.children) {
        auto sub = to_cnf(child, negated, t);
        std::vector<Clause> next;
        for (const Clause& a : acc)
          for (const Clause& s : sub) next.push_back(merge_clauses(a, s));
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

Body cnf_body(const Formula& f, const CPTheory& t) {
  auto lit_less = [](const Literal& a, const Literal& b) {
    return a.atom != b.atom ? a.atom < b.atom : a.positive < b.positive;
  };
  std::vector<Clause> clauses;
  for (Clause clause : to_cnf(f, false, t)) {
    std::sort(clause.begin(), clause.end(), lit_less);
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    bool tautology = false;
    for (size_t i = 0; i + 1 < clause.size(); ++i)
      if (clause[i].atom == clause[i + 1].atom) tautology = true;
    if (!tautology) clauses.push_back(std::move(clause));
  }
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  return Body{std::move(clauses)};
}

std::vector<Context> all_contexts(int n) {
  std::vector<Context> out;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Context u(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = (mask >> i) & 1;
    out.push_back(std::move(u));
  }
  return out;
}

} // namespace

CPTheory translate(const StructuralModel& m) {
  m.validate();
  CPTheory t;
  for (const InnateVar& v : m.innate) {
    AtomId a = t.intern(v.name);
    t.append_law({Disjunct{a, v.stat_prob, v.norm_prob}}, Body{}, t.law_count());
  }
  for (const DerivedVar& v : m.derived) {
    AtomId a = t.intern(v.name);
    Body body = cnf_body(v.equation, t);
    t.append_law({Disjunct{a, 1, std::nullopt}}, std::move(body), t.law_count());
  }
  return t;
}

Branch story_for_context(const StructuralModel& m, const Context& u) {
  CPTheory t = translate(m);
  World w = world_for_context(m, u);
  std::vector<Choice> steps;
  for (int i = 0; i < m.innate_count(); ++i)
    steps.push_back(Choice{i, u[static_cast<size_t>(i)] ? std::optional<AtomId>(i)
                                                        : std::nullopt});
  for (int i = m.innate_count(); i < m.var_count(); ++i)
    if (w[static_cast<size_t>(i)]) steps.push_back(Choice{i, i});
  return replay(t, steps);
}

namespace {

struct CausePair {
  int ci;
  int ei;
  World su;
};

CausePair resolve_pair(const StructuralModel& m, const Context& u, const std::string& c,
                       const std::string& e) {
  m.validate();
  int ci = m.index_of(c);
  if (ci < 0) throw Error(ErrorKind::unknown_atom, "unknown variable " + c);
  int ei = m.index_of(e);
  if (ei < 0) throw Error(ErrorKind::unknown_atom, "unknown variable " + e);
  World su = world_for_context(m, u);
  if (!su[static_cast<size_t>(ci)] || !su[static_cast<size_t>(ei)])
    throw Error(ErrorKind::ce_not_in_world,
                "cause and effect must both hold in the actual world");
  return CausePair{ci, ei, std::move(su)};
}

// counterfactual leaves: the frozen translated theory with c suppressed
std::vector<Trace> witness_traces(const StructuralModel& m, const Context& u, int ci,
                                  int ei) {
  CPTheory t = translate(m);
  Branch b = story_for_context(m, u);
  CPTheory star = t_star(t, b, ci, ei);
  return traces(intervene_neg(star, ci), OrderPolicy::canonical());
}

bool world_before(const World& a, const World& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i];
  return false;
}

} // namespace

bool hh_actual_cause(const StructuralModel& m, const Context& u, const std::string& c,
                     const std::string& e) {
  CausePair p = resolve_pair(m, u, c, e);
  for (const Trace& tr : witness_traces(m, u, p.ci, p.ei)) {
    const World& w = tr.leaf;
    if (w[static_cast<size_t>(p.ci)] || w[static_cast<size_t>(p.ei)]) continue;
    if (at_least_as_normal(m, w, p.su)) return true;
  }
  return false;
}

std::optional<ModelWitness> best_witness(const StructuralModel& m, const Context& u,
                                         const std::string& c, const std::string& e,
                                         WitnessAdmission admission) {
  CausePair p = resolve_pair(m, u, c, e);
  std::vector<World> candidates;
  if (admission == WitnessAdmission::all) {
    for (const Context& v : all_contexts(m.innate_count())) {
      World w = world_for_context(m, v);
      if (!w[static_cast<size_t>(p.ci)] && !w[static_cast<size_t>(p.ei)])
        candidates.push_back(std::move(w));
    }
  } else {
    for (const Trace& tr : witness_traces(m, u, p.ci, p.ei)) {
      const World& w = tr.leaf;
      if (w[static_cast<size_t>(p.ci)] || w[static_cast<size_t>(p.ei)]) continue;
      if (!at_least_as_normal(m, w, p.su)) continue;
      if (std::find(candidates.begin(), candidates.end(), w) == candidates.end())
        candidates.push_back(w);
    }
  }
  const World* best = nullptr;
  for (const World& w : candidates) {
    bool maximal = true;
    for (const World& other : candidates)
      if (normality_compare(m, other, w) == NormalityVerdict::more) {
        maximal = false;
        break;
      }
    if (!maximal) continue;
    if (!best || world_before(w, *best)) best = &w;
  }
  if (!best) return std::nullopt;
  Rational prob = 1;
  for (int i = 0; i < m.innate_count(); ++i) {
    const Rational& sp = m.innate[static_cast<size_t>(i)].stat_prob;
    prob *= (*best)[static_cast<size_t>(i)] ? sp : Rational(1) - sp;
  }
  return ModelWitness{*best, std::move(prob)};
}

Lemma2Report check_lemma2(const StructuralModel& m, const Context& u) {
  m.validate();
  CPTheory t = translate(m);
  Branch b = story_for_context(m, u);
  World su = world_for_context(m, u);
  CPTheory normal = normal_refine(t, b);
  Lemma2Report rep;
  for (const Context& v : all_contexts(m.innate_count())) {
    World w = world_for_context(m, v);
    bool normal_side = at_least_as_normal(m, w, su);
    bool executable_side = branch_occurs(normal, story_for_context(m, v));
    ++rep.worlds_checked;
    if (normal_side != executable_side)
      rep.mismatches.push_back(Lemma2Report::Mismatch{std::move(w), normal_side,
                                                      executable_side});
  }
  return rep;
}

Theorem1Report check_theorem1(const StructuralModel& m, const Context& u,
                              const std::string& c, const std::string& e) {
  CausePair p = resolve_pair(m, u, c, e);
  Theorem1Report rep;
  rep.model_side = hh_actual_cause(m, u, c, e);
  CPTheory t = translate(m);
  Branch b = story_for_context(m, u);
  rep.theory_side = cause_hh(t, b, p.ci, p.ei).is_cause;
  rep.agree = rep.model_side == rep.theory_side;
  return rep;
}

} // namespace cpcause
