#pragma once

#include "cpcause/core.hpp"
#include "cpcause/sm.hpp"

#include <random>

namespace cpcause {

struct TheoryGenOptions {
  int max_laws = 6;
  int max_atoms = 6;
  bool with_norms = false;
  bool allow_negation = true; // stratified either way
};

// small random theory with stratified negation (negative literals only on
// atoms below every head atom of the law); with norms, every effective head
// mass stays inside (0,1) and strictly below 1 whenever the law keeps
// positive empty mass, so stories survive normal refinement
CPTheory random_theory(std::mt19937_64& rng, const TheoryGenOptions& opt = {});

struct ModelGenOptions {
  int max_innate = 4;
  int max_derived = 3;
  bool with_norms = true;
};

// probabilities and norms inside (0,1) and never exactly 1/2, so typicality
// is always defined
StructuralModel random_model(std::mt19937_64& rng, const ModelGenOptions& opt = {});

// rational in (0,1) with a small denominator
Rational random_probability(std::mt19937_64& rng, int max_denominator = 10, bool avoid_half = false);

} // namespace cpcause
