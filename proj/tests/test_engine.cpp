#include "doctest.h"

#include "cpcause/engine.hpp"
#include "cpcause/generate.hpp"
#include "cpcause/parser.hpp"
#include "util.hpp"

using namespace cpcause;
using testutil::profile_distribution;
using testutil::thrown;

TEST_CASE("exact distribution of the office theory") {
  CPTheory t = testutil::load_theory("pens.cp");
  Distribution d = exact_distribution(t);
  REQUIRE(d.entries.size() == 4);
  CHECK(d.total() == Rational(1));

  auto mass = [&](const std::vector<std::string>& atoms) {
    State s(static_cast<size_t>(t.atom_count()), false);
    for (const auto& n : atoms) s[static_cast<size_t>(*t.atom_id(n))] = true;
    auto it = d.entries.find(s);
    return it == d.entries.end() ? Rational(0) : it->second;
  };
  CHECK(mass({}) == Rational(3, 50));
  CHECK(mass({"assistant"}) == Rational(6, 25));
  CHECK(mass({"prof"}) == Rational(7, 50));
  CHECK(mass({"prof", "assistant", "nopens"}) == Rational(14, 25));
}

TEST_CASE("tree semantics agrees with profile enumeration without negation") {
  std::mt19937_64 rng(11);
  TheoryGenOptions opt;
  opt.allow_negation = false;
  for (int i = 0; i < 30; ++i) {
    CPTheory t = random_theory(rng, opt);
    Distribution tree = exact_distribution(t);
    Distribution flat = profile_distribution(t);
    CHECK(tree.entries == flat.entries);
  }
}

TEST_CASE("leaf mass always sums to one") {
  std::mt19937_64 rng(12);
  TheoryGenOptions opt;
  opt.with_norms = true;
  for (int i = 0; i < 30; ++i) {
    CPTheory t = random_theory(rng, opt);
    CHECK(exact_distribution(t).total() == Rational(1));
  }
}

TEST_CASE("negative literals wait for impossibility") {
  CPTheory t = parse_theory("b:0.5 <- .\na <- ~b.");
  AtomId a = *t.atom_id("a");
  AtomId b = *t.atom_id("b");

  // while b can still happen the second law must not fire
  State root(2, false);
  std::vector<bool> none(2, false);
  CHECK(applicable_laws(t, root, none) == std::vector<int>{0});

  Distribution d = exact_distribution(t);
  State sa(2, false), sb(2, false);
  sa[static_cast<size_t>(a)] = true;
  sb[static_cast<size_t>(b)] = true;
  CHECK(d.entries.at(sa) == Rational(1, 2));
  CHECK(d.entries.at(sb) == Rational(1, 2));
}

TEST_CASE("possible_atoms shrinks as laws resolve") {
  CPTheory t = testutil::load_theory("ex5.cp");
  State root(static_cast<size_t>(t.atom_count()), false);
  std::vector<bool> applied(static_cast<size_t>(t.law_count()), false);
  auto all = possible_atoms(t, root, applied);
  for (bool p : all) CHECK(p);

  // once the first law resolved to nothing, only the default effect remains
  applied[0] = true;
  auto after = possible_atoms(t, root, applied);
  CHECK(!after[static_cast<size_t>(*t.atom_id("a"))]);
  CHECK(!after[static_cast<size_t>(*t.atom_id("c"))]);
  CHECK(after[static_cast<size_t>(*t.atom_id("e"))]);
}

TEST_CASE("a law whose body negates its own head never fires") {
  CPTheory t = parse_theory("a:0.5 <- ~a.");
  Distribution d = exact_distribution(t);
  REQUIRE(d.entries.size() == 1);
  CHECK(true_atoms(d.entries.begin()->first).empty());

  auto flagged = check_stratification(t);
  REQUIRE(flagged.size() == 1);
  CHECK(flagged[0].law_id == 0);
  CHECK(true_atoms(flagged[0].leaf).empty());
}

TEST_CASE("the bundled theories are cleanly stratified") {
  for (const char* name : {"pens.cp", "ex5.cp", "dice.cp", "dice6.cp"}) {
    CAPTURE(name);
    CHECK(check_stratification(testutil::load_theory(name)).empty());
  }
}

TEST_CASE("application order leaves the distribution untouched") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  Distribution base = exact_distribution(t, OrderPolicy::canonical());
  CHECK(base.entries == exact_distribution(t, OrderPolicy::highest()).entries);
  CHECK(base.entries == exact_distribution(t, OrderPolicy::seeded(5)).entries);
  CHECK(base.entries == exact_distribution(t, OrderPolicy::story_first(b)).entries);
}

TEST_CASE("story_first visits the story's own law order") {
  CPTheory t = parse_theory("a:0.5 <- .\nb:0.5 <- .");
  AtomId a = *t.atom_id("a");
  AtomId b = *t.atom_id("b");
  Branch st = replay(t, {{1, b}, {0, a}});
  auto trs = traces(t, OrderPolicy::story_first(st));
  bool found = false;
  for (const Trace& tr : trs) found = found || tr.steps == st.steps;
  CHECK(found);
  // canonical order never applies law 1 first
  for (const Trace& tr : traces(t, OrderPolicy::canonical()))
    CHECK(tr.steps.front().law_id == 0);
}

TEST_CASE("formula probabilities") {
  CPTheory t = testutil::load_theory("pens.cp");
  CHECK(prob(t, parse_formula("nopens")) == Rational(14, 25));
  CHECK(prob(t, parse_formula("prof | assistant")) == Rational(47, 50));
  CHECK(prob(t, parse_formula("~nopens")) == Rational(11, 25));
  CHECK(cond_prob(t, parse_formula("nopens"), parse_formula("prof")) == Rational(4, 5));
  CHECK(cond_prob(t, parse_formula("prof"), parse_formula("~nopens")) == Rational(7, 22));
  CHECK(thrown([&] {
          cond_prob(t, parse_formula("prof"), parse_formula("nopens & ~prof"));
        }) == ErrorKind::condition_impossible);
  CHECK(thrown([&] { prob(t, parse_formula("ghost")); }) == ErrorKind::unknown_atom);
}

TEST_CASE("sampling is deterministic per seed and lands in the support") {
  CPTheory t = testutil::load_theory("pens.cp");
  Distribution d = exact_distribution(t);
  Branch s1 = sample_story(t, 99);
  Branch s2 = sample_story(t, 99);
  CHECK(s1.steps == s2.steps);
  CHECK(d.entries.count(s1.leaf) == 1);
  CHECK(branch_probability(t, s1) > 0);

  bool diverged = false;
  for (std::uint64_t seed = 0; seed < 16 && !diverged; ++seed)
    diverged = sample_story(t, seed).leaf != s1.leaf;
  CHECK(diverged);
}

TEST_CASE("branch probability multiplies the chosen masses") {
  CPTheory t = testutil::load_theory("pens.cp");
  Branch b = testutil::load_story("pens.story", t);
  CHECK(branch_probability(t, b) == Rational(14, 25));

  Branch nothing = replay(t, {{0, std::nullopt}, {1, std::nullopt}});
  CHECK(branch_probability(t, nothing) == Rational(3, 50));

  // an outcome the law does not offer
  Branch bogus;
  bogus.steps = {{0, *t.atom_id("assistant")}};
  CHECK(thrown([&] { branch_probability(t, bogus); }) == ErrorKind::invalid_branch);
}

TEST_CASE("the tree exposes states and applied flags") {
  CPTheory t = testutil::load_theory("pens.cp");
  Tree tree = build_tree(t, OrderPolicy::canonical());
  REQUIRE(tree != nullptr);
  CHECK(!tree->leaf());
  CHECK(tree->chosen_law == 0);
  REQUIRE(tree->edges.size() == 2);
  Rational edge_mass = tree->edges[0].prob + tree->edges[1].prob;
  CHECK(edge_mass == Rational(1));
  auto trs = traces(t, OrderPolicy::canonical());
  CHECK(trs.size() == 4);
  Rational total(0);
  for (const Trace& tr : trs) total += tr.prob;
  CHECK(total == Rational(1));
}
