#include "cpcause/transform.hpp"

#include "cpcause/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cpcause {

namespace {

void require_branch(const CPTheory& t, const Branch& b) {
  try {
    Branch r = replay(t, b.steps);
    if (r.leaf != b.leaf)
      throw Error(ErrorKind::invalid_branch, "branch leaf does not match its steps");
  } catch (const Error& e) {
    if (e.kind == ErrorKind::invalid_branch) throw;
    throw Error(ErrorKind::invalid_branch,
                std::string("branch does not fit the theory: ") + e.what());
  }
}

CPLaw draft(std::vector<Disjunct> head, Body body, int origin) {
  CPLaw l;
  l.origin = origin;
  l.head = std::move(head);
  l.body = std::move(body);
  return l;
}

CPTheory rebuild(const CPTheory& vocab, const std::vector<CPLaw>& laws) {
  CPTheory out = vocab.clone_vocabulary();
  for (const CPLaw& l : laws) out.append_law(l.head, l.body, l.origin);
  return out;
}

std::map<int, std::optional<AtomId>> choices_by_law(const Branch& b) {
  std::map<int, std::optional<AtomId>> out;
  for (const Choice& ch : b.steps) out[ch.law_id] = ch.outcome;
  return out;
}

// norms become the probabilities; zero-mass disjuncts vanish, annotations go
std::optional<CPLaw> nn_law(const CPLaw& law) {
  if (!law.has_norms()) return law;
  std::vector<Disjunct> head;
  Rational mass = 0;
  for (const Disjunct& d : law.head) {
    Rational p = d.effective_norm();
    if (p == 0) continue;
    head.push_back(Disjunct{d.atom, p, std::nullopt});
    mass += p;
  }
  if (mass > 1)
    throw Error(ErrorKind::probability_sum,
                "normative head mass " + rational_string(mass) + " exceeds 1");
  if (head.empty()) return std::nullopt;
  return draft(std::move(head), law.body, law.origin);
}

// applied law: options strictly below the chosen one's probability vanish,
// survivors renormalize to total mass 1; the implicit empty slot takes part
// like any other option; a chosen option gone from the head keeps everything
std::optional<CPLaw> pn_applied(const CPLaw& law, const std::optional<AtomId>& outcome) {
  auto opts = law.options();
  Rational threshold = 0;
  for (const Disjunct& d : opts)
    if (d.atom == outcome) threshold = d.prob;
  Rational total = 0;
  bool modified = false;
  for (const Disjunct& d : opts) {
    if (d.prob < threshold)
      modified = true;
    else
      total += d.prob;
  }
  if (!modified) return law;
  std::vector<Disjunct> head;
  for (const Disjunct& d : opts)
    if (d.prob >= threshold && d.atom)
      head.push_back(Disjunct{d.atom, d.prob / total, std::nullopt});
  if (head.empty()) return std::nullopt;
  return draft(std::move(head), law.body, law.origin);
}

// unapplied law: sub-coin-flip disjuncts contradicting the leaf vanish and
// the rest renormalizes by the surviving mass; a law left with nothing but
// its empty slot is a no-op and vanishes with it
std::optional<CPLaw> pn_unapplied(const CPLaw& law, const State& leaf) {
  const Rational half(1, 2);
  Rational removed = 0;
  std::vector<Disjunct> kept;
  for (const Disjunct& d : law.head) {
    size_t a = static_cast<size_t>(*d.atom);
    bool false_at_leaf = a >= leaf.size() || !leaf[a];
    if (d.prob < half && false_at_leaf)
      removed += d.prob;
    else
      kept.push_back(d);
  }
  if (removed == 0) return law;
  if (removed == 1 || kept.empty()) return std::nullopt;
  Rational denom = Rational(1) - removed;
  std::vector<Disjunct> head;
  for (const Disjunct& d : kept)
    head.push_back(Disjunct{d.atom, d.prob / denom, std::nullopt});
  return draft(std::move(head), law.body, law.origin);
}

} // namespace

CPTheory determinize(const CPTheory& t, const Branch& b) {
  require_branch(t, b);
  CPTheory base = rebase_origins(t);
  auto chosen = choices_by_law(b);
  std::vector<CPLaw> laws;
  for (const CPLaw& law : base.laws()) {
    auto it = chosen.find(law.id);
    if (it == chosen.end()) {
      laws.push_back(law);
    } else if (it->second) {
      laws.push_back(draft({Disjunct{*it->second, 1, std::nullopt}}, law.body, law.origin));
    }
  }
  return rebuild(base, laws);
}

CPTheory intervene_neg(const CPTheory& t, AtomId c) {
  std::vector<CPLaw> laws;
  for (const CPLaw& law : t.laws()) {
    std::vector<Disjunct> head;
    for (const Disjunct& d : law.head)
      if (*d.atom != c) head.push_back(d);
    if (head.empty()) continue;
    laws.push_back(draft(std::move(head), law.body, law.origin));
  }
  return rebuild(t, laws);
}

CPTheory intervene_pos(const CPTheory& t, AtomId c) {
  CPTheory out = t;
  out.append_law({Disjunct{c, 1, std::nullopt}}, Body{}, -1);
  return out;
}

CPTheory intervene(const CPTheory& t, const std::string& atom, bool value) {
  if (value) {
    CPTheory out = t;
    AtomId c = out.intern(atom);
    return intervene_pos(out, c);
  }
  auto id = t.atom_id(atom);
  if (!id) return t;
  return intervene_neg(t, *id);
}

CPTheory pn_refine_lenient(const CPTheory& t, const Branch& b) {
  auto chosen = choices_by_law(b);
  std::vector<CPLaw> laws;
  for (const CPLaw& law : t.laws()) {
    auto it = chosen.find(law.origin);
    auto nl = it != chosen.end() ? pn_applied(law, it->second) : pn_unapplied(law, b.leaf);
    if (nl) laws.push_back(std::move(*nl));
  }
  return rebuild(t, laws);
}

CPTheory pn_refine(const CPTheory& t, const Branch& b) {
  require_branch(t, b);
  return pn_refine_lenient(rebase_origins(t), b);
}

CPTheory nn_refine(const CPTheory& t) {
  std::vector<CPLaw> laws;
  for (const CPLaw& law : t.laws()) {
    auto nl = nn_law(law);
    if (nl) laws.push_back(std::move(*nl));
  }
  return rebuild(t, laws);
}

CPTheory normal_refine(const CPTheory& t, const Branch& b) {
  require_branch(t, b);
  return pn_refine_lenient(nn_refine(rebase_origins(t)), b);
}

bool branch_excluded_by_norms(const CPTheory& t, const Branch& b) {
  require_branch(t, b);
  for (const Choice& ch : b.steps) {
    auto opt = t.law(ch.law_id).option_for(ch.outcome);
    if (opt && opt->effective_norm() == 0) return true;
  }
  return false;
}

bool branch_occurs(const CPTheory& t2, const Branch& b) {
  std::map<int, int> by_origin;
  for (const CPLaw& law : t2.laws())
    if (law.origin >= 0) by_origin[law.origin] = law.id;
  std::vector<Choice> adapted;
  for (const Choice& ch : b.steps) {
    auto it = by_origin.find(ch.law_id);
    if (it == by_origin.end()) {
      if (ch.outcome) return false;
      continue;
    }
    adapted.push_back(Choice{it->second, ch.outcome});
  }
  try {
    replay(t2, adapted);
  } catch (const Error&) {
    return false;
  }
  return true;
}

namespace {

// true atoms persist downward, so a state outside leaf_b can be cut off
bool subtree_has_witness(const CPTheory& t, const State& state,
                         const std::vector<bool>& applied, AtomId c, AtomId e,
                         const State& leaf_b, bool lowest) {
  if (!state_subset(state, leaf_b)) return false;
  auto applicable = applicable_laws(t, state, applied);
  if (applicable.empty())
    return state[static_cast<size_t>(c)] && state[static_cast<size_t>(e)];
  int law_id = lowest ? applicable.front() : applicable.back();
  for (const Disjunct& opt : t.law(law_id).options()) {
    State s2 = state;
    std::vector<bool> a2 = applied;
    a2[static_cast<size_t>(law_id)] = true;
    if (opt.atom) s2[static_cast<size_t>(*opt.atom)] = true;
    if (subtree_has_witness(t, s2, a2, c, e, leaf_b, lowest)) return true;
  }
  return false;
}

std::vector<int> intrinsic_impl(const CPTheory& t, const Branch& b, AtomId c, AtomId e,
                                bool lowest) {
  require_branch(t, b);
  auto in_leaf = [&](AtomId a) {
    return a >= 0 && a < t.atom_count() && b.leaf[static_cast<size_t>(a)];
  };
  if (!in_leaf(c) || !in_leaf(e))
    throw Error(ErrorKind::ce_not_in_leaf,
                "cause and effect must both hold in the story's leaf");
  State state(static_cast<size_t>(t.atom_count()), false);
  std::vector<bool> applied(static_cast<size_t>(t.law_count()), false);
  std::vector<int> result;
  for (const Choice& ch : b.steps) {
    const CPLaw& law = t.law(ch.law_id);
    if (law.options().size() >= 2) {
      bool witness = false;
      for (const Disjunct& opt : law.options()) {
        if (opt.atom == ch.outcome) continue;
        State s2 = state;
        std::vector<bool> a2 = applied;
        a2[static_cast<size_t>(ch.law_id)] = true;
        if (opt.atom) s2[static_cast<size_t>(*opt.atom)] = true;
        if (subtree_has_witness(t, s2, a2, c, e, b.leaf, lowest)) {
          witness = true;
          break;
        }
      }
      if (!witness) result.push_back(ch.law_id);
    }
    applied[static_cast<size_t>(ch.law_id)] = true;
    if (ch.outcome) state[static_cast<size_t>(*ch.outcome)] = true;
  }
  std::sort(result.begin(), result.end());
  return result;
}

} // namespace

std::vector<int> intrinsic_laws(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  return intrinsic_impl(t, b, c, e, true);
}

std::vector<int> intrinsic_laws_reversed(const CPTheory& t, const Branch& b, AtomId c,
                                         AtomId e) {
  return intrinsic_impl(t, b, c, e, false);
}

CPTheory t_star(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  auto intr = intrinsic_laws(t, b, c, e);
  std::set<int> intrinsic(intr.begin(), intr.end());
  auto chosen = choices_by_law(b);
  CPTheory base = rebase_origins(t);
  std::vector<CPLaw> laws;
  for (const CPLaw& law : base.laws()) {
    if (!intrinsic.count(law.id)) {
      laws.push_back(law);
      continue;
    }
    const std::optional<AtomId>& outcome = chosen.at(law.id);
    if (outcome)
      laws.push_back(draft({Disjunct{*outcome, 1, std::nullopt}}, law.body, law.origin));
  }
  return rebuild(base, laws);
}

CPTheory t_star_star(const CPTheory& t, const Branch& b, AtomId c, AtomId e) {
  int rc = law_for_atom(t, c);
  CPTheory star = t_star(t, b, c, e);
  std::optional<AtomId> outcome = c;
  for (const Choice& ch : b.steps)
    if (ch.law_id == rc) outcome = ch.outcome;
  auto normed = nn_law(t.law(rc));
  std::optional<CPLaw> repl = normed ? pn_applied(*normed, outcome) : std::nullopt;
  std::vector<CPLaw> laws;
  bool replaced = false;
  for (const CPLaw& law : star.laws()) {
    if (law.origin == rc) {
      replaced = true;
      if (repl) laws.push_back(draft(repl->head, repl->body, rc));
    } else {
      laws.push_back(law);
    }
  }
  if (!replaced && repl) laws.push_back(draft(repl->head, repl->body, rc));
  return rebuild(star, laws);
}

int law_for_atom(const CPTheory& t, AtomId c) {
  std::string name = c >= 0 && c < t.atom_count() ? t.atom_name(c) : "?";
  int found = -1;
  for (const CPLaw& law : t.laws())
    for (const Disjunct& d : law.head)
      if (*d.atom == c) {
        if (found >= 0)
          throw Error(ErrorKind::multiple_laws_for_cause,
                      "atom " + name + " occurs in the heads of laws " +
                          std::to_string(found) + " and " + std::to_string(law.id));
        found = law.id;
      }
  if (found < 0)
    throw Error(ErrorKind::no_law_for_cause, "no law has " + name + " in its head");
  return found;
}

} // namespace cpcause
