#include "cpcause/generate.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace cpcause {

namespace {

int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng) { return rand_int(rng, 0, 1) == 1; }

} // namespace

Rational random_probability(std::mt19937_64& rng, int max_denominator, bool avoid_half) {
  int hi = std::max(2, max_denominator);
  for (;;) {
    int den = rand_int(rng, 2, hi);
    int num = rand_int(rng, 1, den - 1);
    Rational r(num, den);
    if (avoid_half && r == Rational(1, 2)) continue;
    return r;
  }
}

namespace {

// try to attach norms to some disjuncts; the effective masses must leave the
// law's chosen options alive, so the sum stays below 1 whenever an empty
// option exists and never exceeds 1
std::vector<Disjunct> with_random_norms(std::mt19937_64& rng, const std::vector<Disjunct>& head) {
  Rational stat_mass = 0;
  for (const Disjunct& d : head) stat_mass += d.prob;
  bool has_empty = stat_mass < 1;
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Disjunct> out = head;
    bool any = false;
    for (Disjunct& d : out)
      if (coin(rng)) {
        d.norm = random_probability(rng, 10, false);
        any = true;
      }
    if (!any) continue;
    Rational effective = 0;
    for (const Disjunct& d : out) effective += d.effective_norm();
    if (effective > 1) continue;
    if (has_empty && effective == 1) continue;
    return out;
  }
  return head;
}

} // namespace

CPTheory random_theory(std::mt19937_64& rng, const TheoryGenOptions& opt) {
  CPTheory t;
  int n_atoms = rand_int(rng, 2, std::max(2, opt.max_atoms));
  for (int i = 0; i < n_atoms; ++i) t.intern(std::string(1, static_cast<char>('a' + i)));
  int n_laws = rand_int(rng, 1, std::max(1, opt.max_laws));
  for (int li = 0; li < n_laws; ++li) {
    int first = rand_int(rng, 0, n_atoms - 1);
    int second = rand_int(rng, 0, n_atoms - 1);
    bool two_headed = second != first && coin(rng);
    std::vector<Disjunct> head;
    if (!two_headed && rand_int(rng, 0, 3) == 0) {
      head.push_back(Disjunct{first, Rational(1), std::nullopt});
    } else {
      int den = rand_int(rng, 4, 10);
      if (two_headed) {
        int n1 = rand_int(rng, 1, den - 1);
        int n2 = rand_int(rng, 1, den - n1);
        head.push_back(Disjunct{first, Rational(n1, den), std::nullopt});
        head.push_back(Disjunct{second, Rational(n2, den), std::nullopt});
      } else {
        head.push_back(Disjunct{first, Rational(rand_int(rng, 1, den), den), std::nullopt});
      }
    }
    // negation stays stratified: negative literals only name atoms strictly
    // below every head atom, so no cycle runs through a negation
    int min_head = first;
    if (two_headed) min_head = std::min(first, second);
    Body body;
    int n_clauses = rand_int(rng, 0, 2);
    for (int ci = 0; ci < n_clauses; ++ci) {
      std::vector<Literal> clause;
      int n_lits = rand_int(rng, 1, 2);
      for (int k = 0; k < n_lits; ++k) {
        bool neg = opt.allow_negation && min_head > 0 && rand_int(rng, 0, 2) == 0;
        AtomId a = neg ? rand_int(rng, 0, min_head - 1) : rand_int(rng, 0, n_atoms - 1);
        clause.push_back(Literal{a, !neg});
      }
      body.clauses.push_back(std::move(clause));
    }
    if (opt.with_norms && coin(rng)) head = with_random_norms(rng, head);
    t.append_law(std::move(head), std::move(body), t.law_count());
  }
  return t;
}

namespace {

Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& pool, int depth) {
  if (depth == 0 || rand_int(rng, 0, 2) == 0) {
    Formula f = Formula::make_atom(
        pool[static_cast<size_t>(rand_int(rng, 0, static_cast<int>(pool.size()) - 1))]);
    return coin(rng) ? Formula::make_neg(std::move(f)) : f;
  }
  std::vector<Formula> parts;
  parts.push_back(random_formula(rng, pool, depth - 1));
  parts.push_back(random_formula(rng, pool, depth - 1));
  return coin(rng) ? Formula::make_conj(std::move(parts)) : Formula::make_disj(std::move(parts));
}

} // namespace

StructuralModel random_model(std::mt19937_64& rng, const ModelGenOptions& opt) {
  StructuralModel m;
  int n_innate = rand_int(rng, 2, std::max(2, opt.max_innate));
  std::vector<std::string> pool;
  for (int i = 0; i < n_innate; ++i) {
    InnateVar v;
    v.name = "u" + std::to_string(i);
    v.stat_prob = random_probability(rng, 10, true);
    if (opt.with_norms && coin(rng)) v.norm_prob = random_probability(rng, 10, true);
    pool.push_back(v.name);
    m.innate.push_back(std::move(v));
  }
  int n_derived = rand_int(rng, 1, std::max(1, opt.max_derived));
  for (int i = 0; i < n_derived; ++i) {
    DerivedVar v;
    v.name = "d" + std::to_string(i);
    v.equation = random_formula(rng, pool, 2);
    pool.push_back(v.name);
    m.derived.push_back(std::move(v));
  }
  m.validate();
  return m;
}

} // namespace cpcause
