#pragma once

#include "cpcause/core.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cpcause {

enum class DefinitionKind { working, hh, intermediate, final };

const char* definition_name(DefinitionKind k);
std::optional<DefinitionKind> definition_from_name(const std::string& s);

struct CauseVerdict {
  std::string cause;
  std::string effect;
  DefinitionKind definition = DefinitionKind::working;
  Rational strength;
  bool is_cause = false; // strength > 0
  // two-factor definitions record (counterfactual, abnormality)
  std::optional<std::pair<Rational, Rational>> factors;
  std::vector<std::string> diagnostics;
};

// strength of the counterfactual dependence of e on c once the intrinsic
// part of the story is frozen
CauseVerdict cause_working(const CPTheory& t, const Branch& b, AtomId c, AtomId e);
// probability that neither c nor e happens in the normal refinement with c's
// own law normally refined in isolation; requires every norm strictly inside
// (0,1) and a unique law owning c
CauseVerdict cause_hh(const CPTheory& t, const Branch& b, AtomId c, AtomId e);
// counterfactual factor under the normal refinement times the abnormality of
// c itself
CauseVerdict cause_intermediate(const CPTheory& t, const Branch& b, AtomId c, AtomId e);
// same two factors with norms applied but no story-relative pruning; strict
// norms are permitted here
CauseVerdict cause_final(const CPTheory& t, const Branch& b, AtomId c, AtomId e);

CauseVerdict cause(const CPTheory& t, const Branch& b, AtomId c, AtomId e, DefinitionKind k);

struct RankEntry {
  std::string atom;
  AtomId atom_id = -1;
  std::optional<CauseVerdict> verdict;
  std::string diagnostic; // error text when the verdict is missing
};

// every true leaf atom except e, strongest first (ties by name); per-atom
// errors become diagnostics instead of aborting the ranking
std::vector<RankEntry> rank_causes(const CPTheory& t, const Branch& b, AtomId e, DefinitionKind k);

struct Theorem2Report {
  bool r_c_nondeterministic = false;
  Rational p_not_c;  // abnormality of c in the normal refinement
  bool hypothesis = false; // r_c_nondeterministic || p_not_c == 0
  Rational lhs;      // graded hh strength
  Rational rhs;      // intermediate product
  bool equal = false;
};

// evaluates the graded hh strength against the intermediate product; the two
// agree when the law owning c is a vacuous single-atom non-deterministic one
// (choosing against c is then an independent coin) or c is already certain
// under the normal refinement, and can differ otherwise
Theorem2Report check_theorem2(const CPTheory& t, const Branch& b, AtomId c, AtomId e);

struct WitnessStory {
  Branch story;
  Rational probability; // in the base theory
};

// most probable story of t whose leaf satisfies ~c and ~e (ties broken by
// leaf order, true-first); admit_all lifts the admission requirement that
// the story survive into normal_refine(t, b)
std::optional<WitnessStory> best_witness_story(const CPTheory& t, const Branch& b,
                                               AtomId c, AtomId e, bool admit_all);

} // namespace cpcause
