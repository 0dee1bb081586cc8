#include "cpcause/causation.hpp"

#include "cpcause/engine.hpp"
#include "cpcause/transform.hpp"

#include <algorithm>

namespace cpcause {

const char* definition_name(DefinitionKind k) {
  switch (k) {
    case DefinitionKind::working: return "working";
    case DefinitionKind::hh: return "hh";
    case DefinitionKind::intermediate: return "intermediate";
    case DefinitionKind::final: return "final";
  }
  return "?";
}

std::optional<DefinitionKind> definition_from_name(const std::string& s) {
  if (s == "working") return DefinitionKind::working;
  if (s == "hh") return DefinitionKind::hh;
  if (s == "intermediate") return DefinitionKind::intermediate;
  if (s == "final") return DefinitionKind::final;
  return std::nullopt;
}

namespace {

Formula not_atom(const CPTheory& t, AtomId a) {
  return Formula::make_neg(Formula::make_atom(t.atom_name(a)));
}

Formula neither(const CPTheory& t, AtomId c, AtomId e) {
  std::vector<Formula> fs;
  fs.push_back(not_atom(t, e));
  fs.push_back(not_atom(t, c));
  return Formula::make_conj(std::move(fs));
}

void forbid_strict_norms(const CPTheory& t) {
  for (const CPLaw& law : t.laws())
    for (const Disjunct& d : law.head)
      if (d.norm && (*d.norm <= 0 || *d.norm >= 1))
        throw Error(ErrorKind::strict_norm_forbidden,
                    "norm " + pretty_rational(*d.norm) + " on " + t.atom_name(*d.atom) +
                        " in law " + std::to_string(law.id) +
                        " must lie strictly between 0 and 1 for this definition");
}

std::vector<std::string> order_diagnostics(const CPTheory& t, const Branch& b, AtomId c,
                                           AtomId e) {
  std::vector<std::string> out;
  if (intrinsic_laws(t, b, c, e) != intrinsic_laws_reversed(t, b, c, e))
    out.push_back("the intrinsic law set changes when the off-branch application order is reversed");
  return out;
}

CauseVerdict make_verdict(const CPTheory& t, AtomId c, AtomId e, DefinitionKind k,
                          Rational strength) {
  CauseVerdict v;
  v.cause = t.atom_name(c);
  v.effect = t.atom_name(e);
  v.definition = k;
  v.strength = std::move(strength);
  v.is_cause = v.strength > 0;
  return v;
}

// hh strength without the strict-norm gate, shared with the theorem check
Rational hh_strength(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  CPTheory tss = t_star_star(t, b, c, e);
  return prob(pn_refine_lenient(nn_refine(tss), b), neither(t, c, e));
}

// first factor of the intermediate product
Rational intermediate_counterfactual(const CPTheory& t, const Branch& b, AtomId c,
                                     AtomId e) {
  CPTheory star = t_star(t, b, c, e);
  CPTheory refined = pn_refine_lenient(nn_refine(star), b);
  return prob(intervene_neg(refined, c), not_atom(t, e));
}

} // namespace

CauseVerdict cause_working(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  CPTheory star = t_star(t, b, c, e);
  Rational s = prob(intervene_neg(star, c), not_atom(t, e));
  CauseVerdict v = make_verdict(t, c, e, DefinitionKind::working, std::move(s));
  v.diagnostics = order_diagnostics(t, b, c, e);
  return v;
}

CauseVerdict cause_hh(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  forbid_strict_norms(t);
  CauseVerdict v = make_verdict(t, c, e, DefinitionKind::hh, hh_strength(t, b, c, e));
  v.diagnostics = order_diagnostics(t, b, c, e);
  return v;
}

CauseVerdict cause_intermediate(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  Rational f1 = intermediate_counterfactual(t, b, c, e);
  Rational f2 = prob(normal_refine(t, b), not_atom(t, c));
  CauseVerdict v = make_verdict(t, c, e, DefinitionKind::intermediate, f1 * f2);
  v.factors = std::make_pair(std::move(f1), std::move(f2));
  v.diagnostics = order_diagnostics(t, b, c, e);
  if (branch_excluded_by_norms(t, b))
    v.diagnostics.push_back(
        "a choice of the story itself carries no normative mass, so the normal "
        "refinement cannot reproduce the story");
  return v;
}

CauseVerdict cause_final(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  CPTheory star = t_star(t, b, c, e);
  Rational f1 = prob(intervene_neg(nn_refine(star), c), not_atom(t, e));
  Rational f2 = prob(nn_refine(t), not_atom(t, c));
  CauseVerdict v = make_verdict(t, c, e, DefinitionKind::final, f1 * f2);
  v.factors = std::make_pair(std::move(f1), std::move(f2));
  v.diagnostics = order_diagnostics(t, b, c, e);
  return v;
}

CauseVerdict cause(const CPTheory& t, const Branch& b, AtomId c, AtomId e,
                   DefinitionKind k) {
  switch (k) {
    case DefinitionKind::working: return cause_working(t, b, c, e);
    case DefinitionKind::hh: return cause_hh(t, b, c, e);
    case DefinitionKind::intermediate: return cause_intermediate(t, b, c, e);
    case DefinitionKind::final: return cause_final(t, b, c, e);
  }
  throw Error(ErrorKind::syntax, "unknown definition");
}

std::vector<RankEntry> rank_causes(const CPTheory& t, const Branch& b, AtomId e,
                                   DefinitionKind k) {
  if (e < 0 || static_cast<size_t>(e) >= b.leaf.size() || !b.leaf[static_cast<size_t>(e)])
    throw Error(ErrorKind::ce_not_in_leaf, "the effect must hold in the story's leaf");
  std::vector<RankEntry> entries;
  for (AtomId a : true_atoms(b.leaf)) {
    if (a == e) continue;
    RankEntry ent;
    ent.atom = t.atom_name(a);
    ent.atom_id = a;
    try {
      ent.verdict = cause(t, b, a, e, k);
    } catch (const Error& err) {
      ent.diagnostic = std::string(error_kind_name(err.kind)) + ": " + err.what();
    }
    entries.push_back(std::move(ent));
  }
  std::sort(entries.begin(), entries.end(), [](const RankEntry& x, const RankEntry& y) {
    if (x.verdict.has_value() != y.verdict.has_value()) return x.verdict.has_value();
    if (x.verdict && y.verdict && x.verdict->strength != y.verdict->strength)
      return x.verdict->strength > y.verdict->strength;
    return x.atom < y.atom;
  });
  return entries;
}

Theorem2Report check_theorem2(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  Theorem2Report rep;
  int rc = law_for_atom(t, c);
  rep.r_c_nondeterministic = t.law(rc).options().size() >= 2;
  rep.p_not_c = prob(normal_refine(t, b), not_atom(t, c));
  rep.hypothesis = rep.r_c_nondeterministic || rep.p_not_c == 0;
  rep.lhs = hh_strength(t, b, c, e);
  rep.rhs = intermediate_counterfactual(t, b, c, e) * rep.p_not_c;
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

namespace {

// true beats false at the first differing atom
bool leaf_before(const State& a, const State& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i];
  return false;
}

} // namespace

std::optional<WitnessStory> best_witness_story(const CPTheory& t, const Branch& b,
                                               AtomId c, AtomId e, bool admit_all) {
  CPTheory admitting;
  if (!admit_all) admitting = normal_refine(t, b);
  CPTheory base = rebase_origins(t);
  auto trs = traces(base, OrderPolicy::canonical());
  const Trace* best = nullptr;
  for (const Trace& tr : trs) {
    auto holds = [&](AtomId a) {
      return a >= 0 && static_cast<size_t>(a) < tr.leaf.size() &&
             tr.leaf[static_cast<size_t>(a)];
    };
    if (holds(c) || holds(e)) continue;
    if (!admit_all && !branch_occurs(admitting, Branch{tr.steps, tr.leaf})) continue;
    if (!best || tr.prob > best->prob ||
        (tr.prob == best->prob && leaf_before(tr.leaf, best->leaf)))
      best = &tr;
  }
  if (!best) return std::nullopt;
  return WitnessStory{Branch{best->steps, best->leaf}, best->prob};
}

} // namespace cpcause
