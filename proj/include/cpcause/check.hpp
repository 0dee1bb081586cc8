#pragma once

#include <cstdint>
#include <string>

namespace cpcause {

struct SweepResult {
  int instances = 0;
  int failures = 0;
  std::string reproducer; // first counterexample, minimized, as file text
  bool ok() const { return failures == 0; }
};

// exact leaf distributions agree across canonical, highest-id and three
// seeded-random application orders
SweepResult sweep_order_invariance(std::uint64_t seed, int count);
// the graded hh strength equals the intermediate product, exactly; sampled
// instances keep the product decomposable: the law owning the cause fires
// unconditionally with a single-atom head and stays non-deterministic, or
// the cause is already certain under the normal refinement
SweepResult sweep_theorem2(std::uint64_t seed, int count);
// normality of a lawful world coincides with executability of its story in
// the normal refinement, over exhaustively enumerated worlds
SweepResult sweep_lemma2(std::uint64_t seed, int count);
// the model-side actual-cause verdict matches the graded hh verdict on the
// translated theory, over all cause/effect pairs true in the actual world
SweepResult sweep_theorem1(std::uint64_t seed, int count);

} // namespace cpcause
