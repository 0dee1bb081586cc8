#pragma once

#include "cpcause/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpcause {

using AtomId = int;

// 1-based position in a source file, attached to parse errors
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  std::string str() const;
};

enum class ErrorKind {
  syntax,
  probability_sum,
  duplicate_head_atom,
  unknown_atom,
  cyclic_model,
  illegal_step,
  incomplete_story,
  no_such_branch,
  ambiguous_branch,
  invalid_branch,
  condition_impossible,
  ce_not_in_leaf,
  ce_not_in_world,
  strict_norm_forbidden,
  no_law_for_cause,
  multiple_laws_for_cause,
  ambiguous_typicality,
};

const char* error_kind_name(ErrorKind k);

struct Error : std::runtime_error {
  ErrorKind kind;
  std::optional<SourceSpan> span;
  Error(ErrorKind k, const std::string& msg);
  Error(ErrorKind k, const SourceSpan& at, const std::string& msg);
};

struct Literal {
  AtomId atom = -1;
  bool positive = true;
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

// conjunction of clauses, each clause a nonempty disjunction of literals
struct Body {
  std::vector<std::vector<Literal>> clauses;
  bool operator==(const Body&) const = default;
};

// one head alternative; atom == nullopt marks the "nothing happens" slot,
// which appears only in the uniform options() view, never in stored heads
struct Disjunct {
  std::optional<AtomId> atom;
  Rational prob;                // statistical mass, > 0 when stored
  std::optional<Rational> norm; // normative mass, in [0,1]

  Rational effective_norm() const { return norm ? *norm : prob; }
};

struct CPLaw {
  int id = 0;     // position in its theory
  int origin = 0; // id of the ancestral law this one descends from, -1 if added
  std::vector<Disjunct> head; // explicit disjuncts, atoms pairwise distinct
  Body body;

  Rational head_mass() const;  // sum of stored masses, <= 1
  Rational empty_mass() const; // 1 - head_mass()
  bool has_norms() const;
  // stored disjuncts plus the derived empty slot when its mass is positive;
  // the empty slot carries a norm iff any stored disjunct does
  std::vector<Disjunct> options() const;
  bool deterministic() const; // exactly one option
  std::optional<Disjunct> option_for(const std::optional<AtomId>& outcome) const;
};

class CPTheory {
public:
  AtomId intern(const std::string& name);
  std::optional<AtomId> atom_id(const std::string& name) const;
  const std::string& atom_name(AtomId id) const;
  int atom_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& atom_names() const { return names_; }

  const std::vector<CPLaw>& laws() const { return laws_; }
  const CPLaw& law(int id) const { return laws_.at(static_cast<size_t>(id)); }
  int law_count() const { return static_cast<int>(laws_.size()); }

  // validates and appends; the law's id is its position
  CPLaw& append_law(std::vector<Disjunct> head, Body body, int origin);
  // same atom table, no laws; transformations start from this
  CPTheory clone_vocabulary() const;

private:
  std::vector<std::string> names_;
  std::map<std::string, AtomId> ids_;
  std::vector<CPLaw> laws_;
};

// copy whose laws carry origin == id, making the theory its own baseline for
// branch step matching
CPTheory rebase_origins(const CPTheory& t);

// truth value per AtomId, total over the theory's vocabulary
using State = std::vector<bool>;

std::vector<AtomId> true_atoms(const State& s);
bool state_subset(const State& inner, const State& outer);
std::string state_string(const CPTheory& t, const State& s);

struct Choice {
  int law_id = -1;
  std::optional<AtomId> outcome; // nullopt: the empty disjunct was chosen
  bool operator==(const Choice&) const = default;
};

struct Branch {
  std::vector<Choice> steps;
  State leaf; // state reached after the last step
};

// replays steps from the all-false root; every step must name an unapplied,
// applicable law and one of its options (choosing an atom that is already
// true has no effect but is still recorded); at the end no law may remain
// applicable
Branch replay(const CPTheory& theory, const std::vector<Choice>& steps);

// law-by-law structural equality with atoms compared by name; the interned
// tables themselves are not compared (transforms keep stale vocabulary)
bool theory_equal(const CPTheory& a, const CPTheory& b);

// propositional formula over atom names; names resolve at evaluation time so
// one formula can serve any theory sharing the vocabulary
struct Formula {
  enum class Kind { atom, neg, conj, disj };
  Kind kind = Kind::atom;
  std::string name; // kind == atom
  std::vector<Formula> children;

  static Formula make_atom(std::string name);
  static Formula make_neg(Formula f);
  static Formula make_conj(std::vector<Formula> fs);
  static Formula make_disj(std::vector<Formula> fs);
};

bool eval_formula(const Formula& f, const CPTheory& t, const State& s);

} // namespace cpcause
