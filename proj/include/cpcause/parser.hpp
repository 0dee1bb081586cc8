#pragma once

#include "cpcause/core.hpp"
#include "cpcause/sm.hpp"

#include <string>

namespace cpcause {

// theory files: `head <- body.` per law, `;` between head disjuncts,
// `,` between body clauses, `|` inside a clause, `~` negation, `%` comments;
// probabilities as decimals or fractions, norms in braces
CPTheory parse_theory(const std::string& text, const std::string& filename = "<string>");

// story files: one `apply <law-id> -> <atom>` line per step, `_` for the
// empty disjunct; the result is validated by replay
Branch parse_story(const std::string& text, const CPTheory& theory,
                   const std::string& filename = "<string>");

// `~`, `&`, `|` and parentheses over atoms, usual precedence
Formula parse_formula(const std::string& text, const std::string& filename = "<string>");

// model files: `innate <name> : <prob> [{<prob>}]`, `derived <name> = <expr>`,
// `context <name>=<0|1>, ...` lines
StructuralModel parse_model(const std::string& text, const std::string& filename = "<string>");

std::string serialize_theory(const CPTheory& t);
std::string serialize_story(const CPTheory& t, const Branch& b);
std::string serialize_formula(const Formula& f);
std::string serialize_model(const StructuralModel& m);

// unique story of the canonical tree ending in exactly these true atoms;
// no_such_branch when none does, ambiguous_branch when several do
Branch branch_from_leaf(const CPTheory& t, const std::vector<std::string>& leaf_atoms);

} // namespace cpcause
