#include "doctest.h"

#include "cpcause/engine.hpp"
#include "cpcause/generate.hpp"
#include "cpcause/parser.hpp"
#include "cpcause/transform.hpp"
#include "util.hpp"

using namespace cpcause;
using testutil::thrown;

TEST_CASE("determinize freezes applied laws and drops empty choices") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  CPTheory d = determinize(t, b);
  // choices become certain and the norm annotation goes with the rewrite
  CHECK(theory_equal(d, parse_theory("prof <- .\n"
                                     "assistant <- .\n"
                                     "nopens <- prof, assistant.")));

  CPTheory tiny = parse_theory("a:0.5 <- .");
  Branch none = replay(tiny, {{0, std::nullopt}});
  CHECK(determinize(tiny, none).law_count() == 0);
}

TEST_CASE("unapplied laws survive determinization untouched") {
  CPTheory t = parse_theory("a:0.5 <- .\nb:0.3 <- ~a.");
  AtomId a = *t.atom_id("a");
  Branch b = replay(t, {{0, a}});
  CPTheory d = determinize(t, b);
  CHECK(theory_equal(d, parse_theory("a <- .\nb:0.3 <- ~a.")));
}

TEST_CASE("suppressing an atom moves its mass to the empty slot") {
  CPTheory t = parse_theory("a:0.4; b:0.4 <- .");
  CPTheory s = intervene_neg(t, *t.atom_id("a"));
  CHECK(theory_equal(s, parse_theory("b:0.4 <- .")));
  Distribution d = exact_distribution(s);
  State sb(static_cast<size_t>(t.atom_count()), false);
  sb[static_cast<size_t>(*t.atom_id("b"))] = true;
  CHECK(d.entries.at(sb) == Rational(2, 5));
  CHECK(d.entries.at(State(static_cast<size_t>(t.atom_count()), false)) == Rational(3, 5));
}

TEST_CASE("suppressing an atom drops laws whose head empties") {
  CPTheory t = testutil::load_theory("pens.cp");
  CPTheory s = intervene_neg(t, *t.atom_id("prof"));
  CHECK(s.law_count() == 2);
  CHECK(prob(s, parse_formula("nopens")) == Rational(0));
  CHECK(prob(s, parse_formula("assistant")) == Rational(4, 5));
}

TEST_CASE("forcing an atom appends a certain law") {
  CPTheory t = testutil::load_theory("pens.cp");
  CPTheory s = intervene_pos(t, *t.atom_id("prof"));
  CHECK(s.law_count() == 4);
  CHECK(s.law(3).origin == -1);
  CHECK(prob(s, parse_formula("prof")) == Rational(1));
  CHECK(prob(s, parse_formula("nopens")) == Rational(4, 5));
}

TEST_CASE("name based intervention interns only when forcing true") {
  CPTheory t = parse_theory("a:0.5 <- .");
  CPTheory up = intervene(t, "zz", true);
  CHECK(up.atom_id("zz").has_value());
  CHECK(prob(up, parse_formula("zz")) == Rational(1));
  // suppressing an unknown atom changes nothing
  CPTheory down = intervene(t, "zz", false);
  CHECK(theory_equal(down, t));
}

TEST_CASE("story refinement prunes applied laws below the chosen mass") {
  CPTheory t = parse_theory("a:0.2; b:0.3 <- .");
  AtomId a = *t.atom_id("a");
  AtomId b = *t.atom_id("b");

  // choosing the likelier atom removes the rarer one and renormalizes
  CPTheory rb = pn_refine(t, replay(t, {{0, b}}));
  CHECK(theory_equal(rb, parse_theory("b:3/8 <- .")));
  // choosing the rarest disjunct keeps everything
  CPTheory ra = pn_refine(t, replay(t, {{0, a}}));
  CHECK(theory_equal(ra, t));
  // choosing the empty slot at mass 1/2 prunes both atoms and the law
  CPTheory re = pn_refine(t, replay(t, {{0, std::nullopt}}));
  CHECK(re.law_count() == 0);
}

TEST_CASE("story refinement prunes unlikely unapplied laws that did nothing") {
  CPTheory t = parse_theory("a:0.5 <- .\nb:0.4 <- a.\nc:0.6 <- a.");
  Branch none = replay(t, {{0, std::nullopt}});
  CPTheory r = pn_refine(t, none);
  CHECK(theory_equal(r, parse_theory("a:0.5 <- .\nc:0.6 <- a.")));
  // surviving laws remember which original law they descend from
  REQUIRE(r.law_count() == 2);
  CHECK(r.law(0).origin == 0);
  CHECK(r.law(1).origin == 2);
}

TEST_CASE("an unlikely outcome that actually happened is never pruned") {
  CPTheory t = parse_theory("b:0.5 <- .\na:0.4 <- b.\na:0.35 <- ~b.");
  AtomId a = *t.atom_id("a");
  AtomId b = *t.atom_id("b");
  Branch st = replay(t, {{0, b}, {1, a}});
  // law 2 never fired and a:0.35 is below a coin flip, but a holds at the
  // leaf, so the disjunct stays
  CHECK(theory_equal(pn_refine(t, st), t));
}

TEST_CASE("story refinement is idempotent") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    CPTheory t = random_theory(rng);
    Branch b = sample_story(t, rng());
    CPTheory once = pn_refine(t, b);
    CHECK(theory_equal(pn_refine_lenient(once, b), once));
  }
}

TEST_CASE("norm refinement swaps statistical for normative mass") {
  CPTheory t = testutil::load_theory("pens.cp");
  CHECK(theory_equal(nn_refine(t), parse_theory("prof:0.01 <- .\n"
                                                "assistant:0.8 <- .\n"
                                                "nopens <- prof, assistant.")));

  // a zero norm erases the disjunct, possibly the whole law
  CPTheory z = parse_theory("a:0.5 {0}; b:0.3 <- .");
  CHECK(theory_equal(nn_refine(z), parse_theory("b:0.3 <- .")));
  CPTheory gone = parse_theory("a:0.5 {0} <- .");
  CHECK(nn_refine(gone).law_count() == 0);

  // a strict norm makes the law deterministic
  CPTheory one = parse_theory("a:0.5 {1} <- .");
  CHECK(theory_equal(nn_refine(one), parse_theory("a <- .")));

  // theories without annotations pass through
  CPTheory ex5 = testutil::load_theory("ex5.cp");
  CHECK(theory_equal(nn_refine(ex5), ex5));
}

TEST_CASE("the normal refinement of the office theory") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  CHECK(theory_equal(normal_refine(t, b), parse_theory("prof:0.01 <- .\n"
                                                       "assistant <- .\n"
                                                       "nopens <- prof, assistant.")));
  // without norms the story refinement alone decides
  CPTheory ex5 = testutil::load_theory("ex5.cp");
  Branch b5 = testutil::load_story("ex5.story", ex5);
  CHECK(theory_equal(normal_refine(ex5, b5), ex5));
}

TEST_CASE("a story whose own choice has zero normative mass is excluded") {
  CPTheory t = parse_theory("a:0.5 {1} <- .\ne <- a.");
  AtomId a = *t.atom_id("a");
  AtomId e = *t.atom_id("e");
  Branch good = replay(t, {{0, a}, {1, e}});
  CHECK(!branch_excluded_by_norms(t, good));
  Branch bad = replay(t, {{0, std::nullopt}});
  CHECK(branch_excluded_by_norms(t, bad));
  // normal_refine itself stays lenient about it
  CPTheory r = normal_refine(t, bad);
  CHECK(theory_equal(r, parse_theory("a <- .\ne <- a.")));
}

TEST_CASE("branch_occurs adapts stories across law removal") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  Branch nothing = replay(t, {{0, std::nullopt}, {1, std::nullopt}});

  CHECK(branch_occurs(normal_refine(t, b), b));
  // the assistant law lost its empty slot in the refinement
  CHECK(!branch_occurs(normal_refine(t, b), nothing));

  CPTheory cut = intervene_neg(t, *t.atom_id("prof"));
  // a non-empty choice of a vanished law cannot be adapted
  CHECK(!branch_occurs(cut, b));
  // empty choices of vanished laws are skipped
  CHECK(branch_occurs(cut, nothing));
}

TEST_CASE("intrinsic laws cannot reroute the story to the same outcome") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  AtomId prof = *t.atom_id("prof");
  AtomId nopens = *t.atom_id("nopens");
  CHECK(intrinsic_laws(t, b, prof, nopens) == std::vector<int>{0, 1});
  CHECK(intrinsic_laws_reversed(t, b, prof, nopens) == std::vector<int>{0, 1});

  // here the first law is not intrinsic: had it chosen nothing, c and e
  // would still both happen inside the story's leaf
  CPTheory alt = parse_theory("x:0.5 <- .\nc <- .\ne <- c.");
  Branch ab = replay(alt, {{0, *alt.atom_id("x")}, {1, *alt.atom_id("c")}, {2, *alt.atom_id("e")}});
  CHECK(intrinsic_laws(alt, ab, *alt.atom_id("c"), *alt.atom_id("e")).empty());
}

TEST_CASE("the frozen theory keeps non-intrinsic and unapplied laws") {
  CPTheory t = parse_theory("a:0.5 <- .\nc:0.5 <- .\ne <- ~a, c.");
  AtomId c = *t.atom_id("c");
  AtomId e = *t.atom_id("e");
  Branch b = replay(t, {{0, std::nullopt}, {1, c}, {2, e}});
  CHECK(intrinsic_laws(t, b, c, e) == std::vector<int>{0, 1});

  CPTheory star = t_star(t, b, c, e);
  // the first law chose the empty disjunct and disappears; the second is
  // frozen at its choice
  CHECK(theory_equal(star, parse_theory("c <- .\ne <- ~a, c.")));
  REQUIRE(star.law_count() == 2);
  CHECK(star.law(0).origin == 1);
  CHECK(star.law(1).origin == 2);
  CHECK(branch_occurs(star, b));
}

TEST_CASE("the frozen theory with the cause law normally refined") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  AtomId prof = *t.atom_id("prof");
  AtomId nopens = *t.atom_id("nopens");
  CPTheory ss = t_star_star(t, b, prof, nopens);
  CHECK(theory_equal(ss, parse_theory("prof:0.01 <- .\n"
                                      "assistant <- .\n"
                                      "nopens <- prof, assistant.")));
}

TEST_CASE("law_for_atom wants exactly one owner") {
  CPTheory t = testutil::load_theory("pens.cp");
  CHECK(law_for_atom(t, *t.atom_id("prof")) == 0);
  CHECK(law_for_atom(t, *t.atom_id("nopens")) == 2);

  CPTheory multi = parse_theory("c:0.5 <- .\nc:0.5 <- .\ne <- c.");
  CHECK(thrown([&] { law_for_atom(multi, *multi.atom_id("c")); }) ==
        ErrorKind::multiple_laws_for_cause);

  CPTheory none = parse_theory("e <- c.");
  CHECK(thrown([&] { law_for_atom(none, *none.atom_id("c")); }) ==
        ErrorKind::no_law_for_cause);
}
