#pragma once

#include "cpcause/core.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>

namespace cpcause {

// picks which applicable law fires at a node; deterministic in its inputs
class OrderPolicy {
public:
  static OrderPolicy canonical();                // lowest law id
  static OrderPolicy highest();                  // highest law id
  static OrderPolicy seeded(std::uint64_t seed); // pseudo-random, keyed by node path
  // follows b while the path matches it, canonical off-branch
  static OrderPolicy story_first(Branch b);

  int pick(const std::vector<int>& applicable, const std::vector<Choice>& path) const;

private:
  using PickFn = std::function<int(const std::vector<int>&, const std::vector<Choice>&)>;
  explicit OrderPolicy(PickFn fn) : fn_(std::move(fn)) {}
  PickFn fn_;
};

// least fixpoint of atoms that may still become true: seeded with the state's
// true atoms, closed under heads of unapplied laws whose body is still
// possibly satisfiable; an atom outside the result is impossible
std::vector<bool> possible_atoms(const CPTheory& t, const State& state,
                                 const std::vector<bool>& applied);

// definite satisfaction: every clause has a true positive literal or a
// negative literal over an impossible atom
bool body_satisfied(const Body& b, const State& state, const std::vector<bool>& possible);
// optimistic reading used by the fixpoint: every clause has a positive
// literal over a possible atom or a negative literal currently false
bool body_possible(const Body& b, const State& state, const std::vector<bool>& possible);

bool law_applicable(const CPTheory& t, int law_id, const State& state,
                    const std::vector<bool>& applied, const std::vector<bool>& possible);

// ids of all applicable laws, ascending
std::vector<int> applicable_laws(const CPTheory& t, const State& state,
                                 const std::vector<bool>& applied);

struct TreeNode {
  State state;
  std::vector<bool> applied; // by law id
  std::optional<int> chosen_law;
  struct Edge {
    Choice choice;
    Rational prob;
    std::unique_ptr<TreeNode> child;
  };
  std::vector<Edge> edges;
  bool leaf() const { return edges.empty(); }
};

using Tree = std::unique_ptr<TreeNode>;

Tree build_tree(const CPTheory& t, const OrderPolicy& policy);

// one root-to-leaf path with its probability
struct Trace {
  std::vector<Choice> steps;
  State leaf;
  Rational prob;
};

std::vector<Trace> traces(const CPTheory& t, const OrderPolicy& policy);

struct Distribution {
  std::map<State, Rational> entries; // leaf state -> probability
  Rational total() const;
};

Distribution exact_distribution(const CPTheory& t, const OrderPolicy& policy = OrderPolicy::canonical());

Rational prob(const CPTheory& t, const Formula& f);
// throws condition_impossible when the condition has probability zero
Rational cond_prob(const CPTheory& t, const Formula& f, const Formula& given);

// walks one branch, resolving choices against an exact cumulative cut of a
// 64-bit uniform draw; same seed, same story
Branch sample_story(const CPTheory& t, std::uint64_t seed);

// product of the chosen options' masses in t; invalid_branch when a step
// names an option the law does not offer
Rational branch_probability(const CPTheory& t, const Branch& b);

// a leaf where some unapplied law's body is still possibly satisfiable is a
// sign of non-stratified negation: the law never fired yet never became
// impossible; reported per law, first leaf wins
struct NonStratified {
  int law_id = -1;
  State leaf;
};
std::vector<NonStratified> check_stratification(const CPTheory& t);

} // namespace cpcause
