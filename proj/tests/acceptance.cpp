// acceptance gate: every release-blocking behavior in one binary, one line
// per criterion, pinned exact values, nonzero exit when anything fails

#include "cpcause/causation.hpp"
#include "cpcause/check.hpp"
#include "cpcause/engine.hpp"
#include "cpcause/generate.hpp"
#include "cpcause/parser.hpp"
#include "cpcause/transform.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace cpcause;

namespace {

int g_failures = 0;

void criterion(int n, const std::string& label, bool ok) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << n << ". " << label << "\n";
  if (!ok) ++g_failures;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    std::cerr << "cannot read " << path << "\n";
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string& name) {
  return std::string(CPCAUSE_CORPUS_DIR) + "/" + name;
}

CPTheory load_theory(const std::string& name) {
  return parse_theory(read_file(corpus(name)), name);
}

Branch load_story(const std::string& name, const CPTheory& t) {
  return parse_story(read_file(corpus(name)), t, name);
}

State state_of(const CPTheory& t, const std::vector<std::string>& atoms) {
  State s(static_cast<size_t>(t.atom_count()), false);
  for (const auto& n : atoms) s[static_cast<size_t>(*t.atom_id(n))] = true;
  return s;
}

} // namespace

int main() {
  const std::uint64_t seed = 20240817;

  CPTheory pens = load_theory("pens.cp");
  Branch pens_story = load_story("pens.story", pens);
  CPTheory ex5 = load_theory("ex5.cp");
  Branch ex5_story = load_story("ex5.story", ex5);
  CPTheory dice = load_theory("dice.cp");
  Branch dice_story = load_story("dice.story", dice);
  CPTheory dice6 = load_theory("dice6.cp");
  Branch dice6_story = load_story("dice6.story", dice6);

  // 1: the office story has probability 14/25 and the other leaves match
  {
    Distribution d = exact_distribution(pens);
    bool ok = branch_probability(pens, pens_story) == Rational(14, 25);
    ok = ok && d.entries.size() == 4 && d.total() == Rational(1);
    ok = ok && d.entries[state_of(pens, {"prof", "assistant", "nopens"})] == Rational(14, 25);
    ok = ok && d.entries[state_of(pens, {"prof"})] == Rational(7, 50);
    ok = ok && d.entries[state_of(pens, {"assistant"})] == Rational(6, 25);
    ok = ok && d.entries[state_of(pens, {})] == Rational(3, 50);
    criterion(1, "office story probability is exactly 14/25", ok);
  }

  // 2: with no norms and every choice maximal, story refinement equals
  // determinization
  criterion(2, "story refinement of the office story equals determinization",
            theory_equal(pn_refine(pens, pens_story), determinize(pens, pens_story)));

  // 3: the normal refinement keeps only the professor's transgression chance
  criterion(3, "normal refinement of the office theory",
            theory_equal(normal_refine(pens, pens_story),
                         parse_theory("prof:0.01 <- .\n"
                                      "assistant <- .\n"
                                      "nopens <- prof, assistant.")));

  // 4: norm sensitive grading separates the two workers
  {
    AtomId prof = *pens.atom_id("prof");
    AtomId assistant = *pens.atom_id("assistant");
    AtomId nopens = *pens.atom_id("nopens");
    bool ok = cause_hh(pens, pens_story, prof, nopens).strength == Rational(99, 100);
    ok = ok && cause_hh(pens, pens_story, assistant, nopens).strength == Rational(0);
    criterion(4, "office workers grade 99/100 and 0 under the joint definition", ok);
  }

  // 5: overdetermination example: the joint definition sees nothing, the
  // two factor definition grades 9/10
  {
    AtomId c = *ex5.atom_id("c");
    AtomId e = *ex5.atom_id("e");
    bool ok = cause_hh(ex5, ex5_story, c, e).strength == Rational(0);
    CauseVerdict mid = cause_intermediate(ex5, ex5_story, c, e);
    ok = ok && mid.strength == Rational(9, 10);
    ok = ok && mid.factors && mid.factors->first == Rational(1) &&
         mid.factors->second == Rational(9, 10);
    criterion(5, "overdetermined effect grades 0 jointly and 9/10 in two factors", ok);
  }

  // 6: the sequential game: pruning kills the counterfactual factor, the
  // final definition recovers it within 1/1000 of 9/10
  {
    AtomId c = *dice.atom_id("throw(1,1)");
    AtomId e = *dice.atom_id("wincar");
    CauseVerdict mid = cause_intermediate(dice, dice_story, c, e);
    bool ok = mid.factors && mid.factors->first == Rational(0);
    CauseVerdict fin = cause_final(dice, dice_story, c, e);
    Rational expected = Rational(9, 10) * (1 - pow_rational(Rational(9, 10), 99));
    ok = ok && fin.strength == expected;
    Rational gap = Rational(9, 10) - fin.strength;
    if (gap < 0) gap = -gap;
    ok = ok && gap <= Rational(1, 1000);
    criterion(6, "first throw grades within 1/1000 of 9/10 in the final definition", ok);
  }

  // 7: the most probable witness story without admission filtering
  {
    AtomId c = *dice.atom_id("throw(1,1)");
    AtomId e = *dice.atom_id("wincar");
    auto w = best_witness_story(dice, dice_story, c, e, true);
    criterion(7, "best unfiltered witness story has probability 9/100",
              w && w->probability == Rational(9, 100));
  }

  // 8: the biased game: a certain cause has zero abnormality, and the final
  // grade sits within 1/1000 of 2/5
  {
    AtomId c = *dice6.atom_id("throw(1,6)");
    AtomId e = *dice6.atom_id("wincar");
    CauseVerdict mid = cause_intermediate(dice6, dice6_story, c, e);
    bool ok = mid.factors && mid.factors->second == Rational(0);
    CauseVerdict fin = cause_final(dice6, dice6_story, c, e);
    Rational expected = Rational(2, 5) * (1 - pow_rational(Rational(9, 10), 99));
    ok = ok && fin.strength == expected;
    Rational gap = Rational(2, 5) - fin.strength;
    if (gap < 0) gap = -gap;
    ok = ok && gap <= Rational(1, 1000);
    criterion(8, "biased first throw grades within 1/1000 of 2/5", ok);
  }

  // 9: ranking the office effect puts the professor strictly first
  {
    auto ranked = rank_causes(pens, pens_story, *pens.atom_id("nopens"), DefinitionKind::final);
    bool ok = ranked.size() == 2;
    ok = ok && ranked[0].atom == "prof" && ranked[0].verdict &&
         ranked[0].verdict->strength == Rational(99, 100);
    ok = ok && ranked[1].atom == "assistant" && ranked[1].verdict &&
         ranked[1].verdict->strength == Rational(1, 5);
    ok = ok && ranked[0].verdict->strength > ranked[1].verdict->strength;
    ok = ok && ranked[1].verdict->strength > Rational(0);
    criterion(9, "office ranking is prof 99/100 over assistant 1/5", ok);
  }

  // 10: leaf distributions are invariant under application order
  {
    SweepResult r = sweep_order_invariance(seed, 500);
    criterion(10, "order invariance sweep over 500 random theories",
              r.ok() && r.instances == 500);
  }

  // 11: the joint and product forms agree on the sampled decomposable class
  // and demonstrably split when nothing promises agreement
  {
    SweepResult r = sweep_theorem2(seed, 200);
    Theorem2Report rep =
        check_theorem2(ex5, ex5_story, *ex5.atom_id("c"), *ex5.atom_id("e"));
    bool ok = r.ok() && r.instances == 200;
    ok = ok && !rep.hypothesis && !rep.equal && rep.lhs == Rational(0) &&
         rep.rhs == Rational(9, 10);
    criterion(11, "joint equals product on 200 sampled instances, splits otherwise", ok);
  }

  // 12: normality matches executability, and model verdicts match theory
  // verdicts, over random models
  {
    SweepResult l2 = sweep_lemma2(seed, 100);
    SweepResult t1 = sweep_theorem1(seed, 100);
    criterion(12, "normality/executability and model/theory agreement sweeps",
              l2.ok() && l2.instances == 100 && t1.ok() && t1.instances == 100);
  }

  // 13: sampling converges: 100000 office stories within total variation
  // distance 1/100 of the exact distribution
  {
    const int n = 100000;
    std::map<State, int> counts;
    for (int i = 0; i < n; ++i) counts[sample_story(pens, 424242 + static_cast<std::uint64_t>(i)).leaf]++;
    Distribution d = exact_distribution(pens);
    Rational tv(0);
    for (const auto& [state, mass] : d.entries) {
      Rational emp(counts.count(state) ? counts[state] : 0, n);
      Rational gap = emp - mass;
      if (gap < 0) gap = -gap;
      tv += gap;
    }
    tv /= 2;
    criterion(13, "100000 samples sit within 1/100 total variation of exact", tv <= Rational(1, 100));
  }

  // 14: serialize then parse is the identity on bundled and generated theories
  {
    bool ok = true;
    for (const char* name : {"pens.cp", "ex5.cp", "dice.cp", "dice6.cp"}) {
      CPTheory t = load_theory(name);
      ok = ok && theory_equal(t, parse_theory(serialize_theory(t)));
    }
    std::mt19937_64 rng(seed);
    TheoryGenOptions opt;
    opt.with_norms = true;
    for (int i = 0; i < 200 && ok; ++i) {
      CPTheory t = random_theory(rng, opt);
      ok = ok && theory_equal(t, parse_theory(serialize_theory(t)));
    }
    criterion(14, "serialize/parse round trip on bundled plus 200 generated theories", ok);
  }

  if (g_failures == 0) {
    std::cout << "all 14 criteria hold\n";
    return 0;
  }
  std::cout << g_failures << " of 14 criteria failed\n";
  return 1;
}
