#pragma once

#include "cpcause/core.hpp"

namespace cpcause {

// every law applied in b keeps only its chosen disjunct at probability 1
// (norm annotations on rewritten laws are discarded); a law that chose the
// empty disjunct is dropped; unapplied laws are untouched
CPTheory determinize(const CPTheory& t, const Branch& b);

// removes c from every head; its mass joins the empty slot unrenormalized,
// laws whose head empties out are dropped
CPTheory intervene_neg(const CPTheory& t, AtomId c);
// appends the deterministic law `c <- .`
CPTheory intervene_pos(const CPTheory& t, AtomId c);
// name-based convenience used by the command line; interns when forcing true
CPTheory intervene(const CPTheory& t, const std::string& atom, bool value);

// applied laws lose every option strictly less probable than the chosen one
// and renormalize; unapplied laws lose options below a coin flip whose atom
// is false at the leaf, renormalizing by the surviving mass; a law reduced to
// its empty slot (or stripped of all mass) is dropped; rewritten laws lose
// their norm annotations
CPTheory pn_refine(const CPTheory& t, const Branch& b);
// statistical masses are replaced by the effective normative ones; options
// whose mass becomes zero disappear, annotations are cleared; a head whose
// new mass exceeds 1 is a probability_sum error
CPTheory nn_refine(const CPTheory& t);
// nn then pn; b is validated against t before norms are applied, and a
// strict norm erasing one of b's own choices is tolerated here (see
// branch_excluded_by_norms), only graded causation forbids it
CPTheory normal_refine(const CPTheory& t, const Branch& b);

// true when some choice of b has effective normative mass zero, i.e. b
// itself cannot occur after nn_refine
bool branch_excluded_by_norms(const CPTheory& t, const Branch& b);

// lenient pn worker for composed pipelines: b's steps are matched to laws by
// origin, steps whose law vanished are ignored, and a chosen disjunct gone
// from the head yields threshold zero (keep everything); no validation
CPTheory pn_refine_lenient(const CPTheory& t, const Branch& b);

// can b's choice sequence still be executed in t2 with positive probability?
// laws are matched by origin; a vanished law is fine only for empty choices;
// the adapted sequence must replay legally and completely
bool branch_occurs(const CPTheory& t2, const Branch& b);

// non-deterministic laws applied in b none of whose alternative outcomes can
// lead to a leaf containing both c and e inside leaf(b); evaluated on the
// story-consistent tree (b's order on the branch, canonical off it)
std::vector<int> intrinsic_laws(const CPTheory& t, const Branch& b, AtomId c, AtomId e);
// same with the off-branch order reversed; differing results expose
// application-order sensitivity of the intrinsic set
std::vector<int> intrinsic_laws_reversed(const CPTheory& t, const Branch& b, AtomId c, AtomId e);

// intrinsic laws replaced by their determinized forms, everything else kept
CPTheory t_star(const CPTheory& t, const Branch& b, AtomId c, AtomId e);
// t_star with the law owning c swapped for the normal refinement of that law
// alone (nn then pn on the single law)
CPTheory t_star_star(const CPTheory& t, const Branch& b, AtomId c, AtomId e);

// unique law with c among its head atoms; no_law_for_cause or
// multiple_laws_for_cause otherwise
int law_for_atom(const CPTheory& t, AtomId c);

} // namespace cpcause
