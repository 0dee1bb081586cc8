#include "cpcause/core.hpp"

#include "cpcause/engine.hpp"

#include <algorithm>
#include <sstream>

namespace cpcause {

std::string SourceSpan::str() const {
  std::ostringstream os;
  os << file << ":" << line << ":" << column;
  return os.str();
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::syntax: return "SyntaxError";
    case ErrorKind::probability_sum: return "ProbabilitySumError";
    case ErrorKind::duplicate_head_atom: return "DuplicateHeadAtom";
    case ErrorKind::unknown_atom: return "UnknownAtom";
    case ErrorKind::cyclic_model: return "CyclicModel";
    case ErrorKind::illegal_step: return "IllegalStep";
    case ErrorKind::incomplete_story: return "IncompleteStory";
    case ErrorKind::no_such_branch: return "NoSuchBranch";
    case ErrorKind::ambiguous_branch: return "AmbiguousBranch";
    case ErrorKind::invalid_branch: return "InvalidBranch";
    case ErrorKind::condition_impossible: return "ConditionImpossible";
    case ErrorKind::ce_not_in_leaf: return "CEnotInLeaf";
    case ErrorKind::ce_not_in_world: return "CEnotInWorld";
    case ErrorKind::strict_norm_forbidden: return "StrictNormForbidden";
    case ErrorKind::no_law_for_cause: return "NoLawForC";
    case ErrorKind::multiple_laws_for_cause: return "MultipleLawsForC";
    case ErrorKind::ambiguous_typicality: return "AmbiguousTypicality";
  }
  return "Error";
}

Error::Error(ErrorKind k, const std::string& msg)
    : std::runtime_error(msg), kind(k) {}

Error::Error(ErrorKind k, const SourceSpan& at, const std::string& msg)
    : std::runtime_error(msg), kind(k), span(at) {}

Rational CPLaw::head_mass() const {
  Rational m = 0;
  for (const Disjunct& d : head) m += d.prob;
  return m;
}

Rational CPLaw::empty_mass() const { return Rational(1) - head_mass(); }

bool CPLaw::has_norms() const {
  return std::any_of(head.begin(), head.end(), [](const Disjunct& d) { return d.norm.has_value(); });
}

std::vector<Disjunct> CPLaw::options() const {
  std::vector<Disjunct> out = head;
  Rational rest = empty_mass();
  if (rest > 0) {
    Disjunct empty;
    empty.atom = std::nullopt;
    empty.prob = rest;
    if (has_norms()) {
      Rational eff = 0;
      for (const Disjunct& d : head) eff += d.effective_norm();
      empty.norm = Rational(1) - eff;
    }
    out.push_back(std::move(empty));
  }
  return out;
}

bool CPLaw::deterministic() const { return head.size() == 1 && empty_mass() == 0; }

std::optional<Disjunct> CPLaw::option_for(const std::optional<AtomId>& outcome) const {
  for (const Disjunct& d : options())
    if (d.atom == outcome) return d;
  return std::nullopt;
}

AtomId CPTheory::intern(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  AtomId id = static_cast<AtomId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<AtomId> CPTheory::atom_id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& CPTheory::atom_name(AtomId id) const {
  return names_.at(static_cast<size_t>(id));
}

CPLaw& CPTheory::append_law(std::vector<Disjunct> head, Body body, int origin) {
  CPLaw law;
  law.id = static_cast<int>(laws_.size());
  law.origin = origin;
  law.head = std::move(head);
  law.body = std::move(body);
  if (law.head.empty())
    throw Error(ErrorKind::syntax, "law " + std::to_string(law.id) + " has an empty head");
  Rational mass = 0, effective = 0;
  bool norms = false;
  for (size_t i = 0; i < law.head.size(); ++i) {
    const Disjunct& d = law.head[i];
    if (!d.atom || *d.atom < 0 || *d.atom >= atom_count())
      throw Error(ErrorKind::syntax, "stored head disjunct without a valid atom");
    if (d.prob <= 0 || d.prob > 1)
      throw Error(ErrorKind::probability_sum,
                  "disjunct probability " + rational_string(d.prob) + " outside (0,1]");
    if (d.norm && (*d.norm < 0 || *d.norm > 1))
      throw Error(ErrorKind::probability_sum,
                  "norm " + rational_string(*d.norm) + " outside [0,1]");
    for (size_t j = 0; j < i; ++j)
      if (law.head[j].atom == d.atom)
        throw Error(ErrorKind::duplicate_head_atom,
                    "atom " + atom_name(*d.atom) + " repeated in one head");
    mass += d.prob;
    effective += d.effective_norm();
    norms = norms || d.norm.has_value();
  }
  if (mass > 1)
    throw Error(ErrorKind::probability_sum,
                "head mass " + rational_string(mass) + " exceeds 1");
  if (norms && effective > 1)
    throw Error(ErrorKind::probability_sum,
                "effective normative head mass " + rational_string(effective) + " exceeds 1");
  for (const auto& clause : law.body.clauses) {
    if (clause.empty()) throw Error(ErrorKind::syntax, "empty clause in body");
    for (const Literal& lit : clause)
      if (lit.atom < 0 || lit.atom >= atom_count())
        throw Error(ErrorKind::syntax, "body literal over an unknown atom");
  }
  laws_.push_back(std::move(law));
  return laws_.back();
}

CPTheory CPTheory::clone_vocabulary() const {
  CPTheory out;
  out.names_ = names_;
  out.ids_ = ids_;
  return out;
}

CPTheory rebase_origins(const CPTheory& t) {
  CPTheory out = t.clone_vocabulary();
  for (const CPLaw& law : t.laws()) out.append_law(law.head, law.body, law.id);
  return out;
}

std::vector<AtomId> true_atoms(const State& s) {
  std::vector<AtomId> out;
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i]) out.push_back(static_cast<AtomId>(i));
  return out;
}

bool state_subset(const State& inner, const State& outer) {
  for (size_t i = 0; i < inner.size(); ++i)
    if (inner[i] && (i >= outer.size() || !outer[i])) return false;
  return true;
}

std::string state_string(const CPTheory& t, const State& s) {
  std::string out = "{";
  bool first = true;
  for (AtomId a : true_atoms(s)) {
    if (!first) out += ", ";
    out += t.atom_name(a);
    first = false;
  }
  return out + "}";
}

Branch replay(const CPTheory& theory, const std::vector<Choice>& steps) {
  State state(static_cast<size_t>(theory.atom_count()), false);
  std::vector<bool> applied(static_cast<size_t>(theory.law_count()), false);
  for (const Choice& ch : steps) {
    if (ch.law_id < 0 || ch.law_id >= theory.law_count())
      throw Error(ErrorKind::illegal_step, "no law " + std::to_string(ch.law_id));
    if (applied[static_cast<size_t>(ch.law_id)])
      throw Error(ErrorKind::illegal_step,
                  "law " + std::to_string(ch.law_id) + " applied twice");
    if (ch.outcome && (*ch.outcome < 0 || *ch.outcome >= theory.atom_count()))
      throw Error(ErrorKind::illegal_step, "outcome atom out of range");
    auto possible = possible_atoms(theory, state, applied);
    if (!law_applicable(theory, ch.law_id, state, applied, possible))
      throw Error(ErrorKind::illegal_step,
                  "law " + std::to_string(ch.law_id) + " is not applicable at this point");
    const CPLaw& law = theory.law(ch.law_id);
    if (!law.option_for(ch.outcome))
      throw Error(ErrorKind::illegal_step,
                  ch.outcome
                      ? "atom " + theory.atom_name(*ch.outcome) + " not in the head of law " +
                            std::to_string(ch.law_id)
                      : "law " + std::to_string(ch.law_id) + " has no empty disjunct");
    applied[static_cast<size_t>(ch.law_id)] = true;
    if (ch.outcome) state[static_cast<size_t>(*ch.outcome)] = true;
  }
  auto possible = possible_atoms(theory, state, applied);
  for (int i = 0; i < theory.law_count(); ++i)
    if (law_applicable(theory, i, state, applied, possible))
      throw Error(ErrorKind::incomplete_story,
                  "law " + std::to_string(i) + " is still applicable after the last step");
  return Branch{steps, std::move(state)};
}

namespace {

bool law_equal(const CPTheory& ta, const CPLaw& a, const CPTheory& tb, const CPLaw& b) {
  if (a.head.size() != b.head.size()) return false;
  for (size_t i = 0; i < a.head.size(); ++i) {
    const Disjunct &da = a.head[i], &db = b.head[i];
    if (ta.atom_name(*da.atom) != tb.atom_name(*db.atom)) return false;
    if (da.prob != db.prob) return false;
    if (da.norm.has_value() != db.norm.has_value()) return false;
    if (da.norm && *da.norm != *db.norm) return false;
  }
  if (a.body.clauses.size() != b.body.clauses.size()) return false;
  for (size_t i = 0; i < a.body.clauses.size(); ++i) {
    const auto &ca = a.body.clauses[i], &cb = b.body.clauses[i];
    if (ca.size() != cb.size()) return false;
    for (size_t j = 0; j < ca.size(); ++j) {
      if (ca[j].positive != cb[j].positive) return false;
      if (ta.atom_name(ca[j].atom) != tb.atom_name(cb[j].atom)) return false;
    }
  }
  return true;
}

} // namespace

bool theory_equal(const CPTheory& a, const CPTheory& b) {
  if (a.law_count() != b.law_count()) return false;
  for (int i = 0; i < a.law_count(); ++i)
    if (!law_equal(a, a.law(i), b, b.law(i))) return false;
  return true;
}

Formula Formula::make_atom(std::string name) {
  Formula f;
  f.kind = Kind::atom;
  f.name = std::move(name);
  return f;
}

Formula Formula::make_neg(Formula f) {
  Formula out;
  out.kind = Kind::neg;
  out.children.push_back(std::move(f));
  return out;
}

Formula Formula::make_conj(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  Formula out;
  out.kind = Kind::conj;
  out.children = std::move(fs);
  return out;
}

Formula Formula::make_disj(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  Formula out;
  out.kind = Kind::disj;
  out.children = std::move(fs);
  return out;
}

bool eval_formula(const Formula& f, const CPTheory& t, const State& s) {
  switch (f.kind) {
    case Formula::Kind::atom: {
      auto id = t.atom_id(f.name);
      if (!id) throw Error(ErrorKind::unknown_atom, "unknown atom " + f.name);
      return s[static_cast<size_t>(*id)];
    }
    case Formula::Kind::neg:
      return !eval_formula(f.children.front(), t, s);
    case Formula::Kind::conj:
      return std::all_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_formula(c, t, s); });
    case Formula::Kind::disj:
      return std::any_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return eval_formula(c, t, s); });
  }
  return false;
}

} // namespace cpcause
