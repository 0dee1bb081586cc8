#pragma once

#include "cpcause/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cpcause {

struct InnateVar {
  std::string name;
  Rational stat_prob;                // in (0,1)
  std::optional<Rational> norm_prob; // in (0,1)
};

struct DerivedVar {
  std::string name;
  Formula equation; // over strictly earlier variables
};

struct StructuralModel {
  std::vector<InnateVar> innate;
  std::vector<DerivedVar> derived;
  // optional contexts bundled with the model file, innate order
  std::vector<std::vector<bool>> contexts;

  int var_count() const { return static_cast<int>(innate.size() + derived.size()); }
  int innate_count() const { return static_cast<int>(innate.size()); }
  int index_of(const std::string& name) const; // -1 when absent
  const std::string& var_name(int i) const;
  bool is_innate(int i) const { return i < innate_count(); }
  // names distinct, probabilities inside (0,1), equations over earlier vars
  void validate() const;
};

// assignment to all variables, innate then derived in model order
using World = std::vector<bool>;
// assignment to the innate variables
using Context = std::vector<bool>;

World world_for_context(const StructuralModel& m, const Context& u);
Context context_of(const StructuralModel& m, const World& w);
bool eval_equation(const StructuralModel& m, const Formula& f, const World& w);

enum class NormalityVerdict { more, equal, less, incomparable };
enum class TypicalityMode {
  normative_first,  // norm_prob decides typicality when present
  statistical_only, // diagnostic mode ignoring norms
};

// an innate variable's typical value is whether its governing probability
// exceeds 1/2 (ambiguous_typicality at exactly 1/2); a derived variable is
// typical when it matches its equation; w1 is more normal than w2 when some
// variable is more typical in w1 and none is less
NormalityVerdict normality_compare(const StructuralModel& m, const World& w1, const World& w2,
                                   TypicalityMode mode = TypicalityMode::normative_first);
bool at_least_as_normal(const StructuralModel& m, const World& w1, const World& w2,
                        TypicalityMode mode = TypicalityMode::normative_first);

// innate variables become vacuous probabilistic laws (norm kept), derived
// ones deterministic laws whose body is the equation in conjunctive normal
// form; atom ids equal variable indices
CPTheory translate(const StructuralModel& m);

// innate laws choose per u in model order, then the derived laws whose
// equations hold fire in dependency order
Branch story_for_context(const StructuralModel& m, const Context& u);

enum class WitnessAdmission {
  normality, // witnesses at least as normal as the actual world
  all,       // every countermodel of c admitted
};

// c actually causes e in (m, u): some leaf of the frozen, c-suppressed
// translated theory satisfies ~c and ~e and is at least as normal as the
// actual world
bool hh_actual_cause(const StructuralModel& m, const Context& u,
                     const std::string& c, const std::string& e);

struct ModelWitness {
  World world;
  // probability of the witness's context in the translated theory (equals
  // the branch probability of its story whenever the world is lawful)
  Rational probability;
};

// a maximally normal admissible witness, ties broken by world order
// (true-first at the first differing variable)
std::optional<ModelWitness> best_witness(const StructuralModel& m, const Context& u,
                                         const std::string& c, const std::string& e,
                                         WitnessAdmission admission = WitnessAdmission::normality);

struct Lemma2Report {
  struct Mismatch {
    World world;
    bool normal_side = false;     // world at least as normal as the actual one
    bool executable_side = false; // its story survives into the normal refinement
  };
  int worlds_checked = 0;
  std::vector<Mismatch> mismatches;
  bool holds() const { return mismatches.empty(); }
};

// over every lawful world: at-least-as-normal iff the corresponding story is
// executable with positive probability in the normal refinement
Lemma2Report check_lemma2(const StructuralModel& m, const Context& u);

struct Theorem1Report {
  bool model_side = false;  // hh_actual_cause
  bool theory_side = false; // graded hh verdict on the translation
  bool agree = false;
};

Theorem1Report check_theorem1(const StructuralModel& m, const Context& u,
                              const std::string& c, const std::string& e);

} // namespace cpcause
