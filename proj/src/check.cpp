#include "cpcause/check.hpp"

#include "cpcause/causation.hpp"
#include "cpcause/engine.hpp"
#include "cpcause/generate.hpp"
#include "cpcause/parser.hpp"
#include "cpcause/sm.hpp"
#include "cpcause/transform.hpp"

#include <exception>
#include <random>
#include <sstream>
#include <vector>

namespace cpcause {

namespace {

CPTheory without_law(const CPTheory& t, int drop) {
  CPTheory out = t.clone_vocabulary();
  for (const CPLaw& law : t.laws())
    if (law.id != drop) out.append_law(law.head, law.body, out.law_count());
  return out;
}

// greedy shrink: keep removing laws while the property still fails
template <class Fails>
CPTheory minimize_theory(CPTheory t, Fails fails) {
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (int i = 0; i < t.law_count(); ++i) {
      CPTheory candidate = without_law(t, i);
      bool still = false;
      try {
        still = fails(candidate);
      } catch (const std::exception&) {
        still = false;
      }
      if (still) {
        t = std::move(candidate);
        shrunk = true;
        break;
      }
    }
  }
  return t;
}

bool distributions_agree(const CPTheory& t, const std::vector<OrderPolicy>& policies) {
  Distribution base = exact_distribution(t, policies.front());
  for (size_t i = 1; i < policies.size(); ++i)
    if (exact_distribution(t, policies[i]).entries != base.entries) return false;
  return true;
}

std::string story_reproducer(const CPTheory& t, const Branch& b,
                             const std::string& c, const std::string& e) {
  std::ostringstream os;
  os << serialize_theory(t);
  os << "% story\n";
  os << serialize_story(t, b);
  os << "% cause " << c << ", effect " << e << "\n";
  return os.str();
}

std::string model_reproducer(const StructuralModel& m, const Context& u,
                             const std::string& extra = "") {
  StructuralModel copy = m;
  copy.contexts.assign(1, u);
  std::string out = serialize_model(copy);
  if (!extra.empty()) out += "% " + extra + "\n";
  return out;
}

Context random_context(std::mt19937_64& rng, const StructuralModel& m) {
  Context u;
  for (int i = 0; i < m.innate_count(); ++i) u.push_back((rng() & 1) != 0);
  return u;
}

} // namespace

SweepResult sweep_order_invariance(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  SweepResult res;
  for (int i = 0; i < count; ++i) {
    CPTheory t = random_theory(rng);
    std::vector<OrderPolicy> policies;
    policies.push_back(OrderPolicy::canonical());
    policies.push_back(OrderPolicy::highest());
    for (int k = 0; k < 3; ++k) policies.push_back(OrderPolicy::seeded(rng()));
    ++res.instances;
    if (!distributions_agree(t, policies)) {
      ++res.failures;
      if (res.reproducer.empty()) {
        CPTheory small = minimize_theory(
            t, [&](const CPTheory& cand) { return !distributions_agree(cand, policies); });
        res.reproducer = serialize_theory(small);
      }
    }
  }
  return res;
}

SweepResult sweep_theorem2(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  SweepResult res;
  TheoryGenOptions opt;
  opt.with_norms = true;
  long guard = static_cast<long>(count) * 500 + 1000;
  while (res.instances < count && guard-- > 0) {
    CPTheory t = random_theory(rng, opt);
    Branch b = sample_story(t, rng());
    std::vector<AtomId> atoms = true_atoms(b.leaf);
    if (atoms.size() < 2) continue;
    for (AtomId c : atoms) {
      for (AtomId e : atoms) {
        if (c == e) continue;
        Theorem2Report rep;
        bool simple_rc = false;
        try {
          // the product form only decomposes when choosing against c is an
          // independent coin: the law owning c must fire unconditionally
          // (empty body) and offer no second atom, since a sibling disjunct
          // or a body tie correlates ~c with ~e through channels do(~c)
          // cannot reproduce; c being certain anyway is fine regardless
          const CPLaw& rc = t.law(law_for_atom(t, c));
          simple_rc = rc.head.size() == 1 && rc.body.clauses.empty();
          rep = check_theorem2(t, b, c, e);
        } catch (const Error&) {
          continue; // pair outside the check's reach, e.g. no unique law for c
        }
        if (!rep.hypothesis) continue;
        if (!(simple_rc && rep.r_c_nondeterministic) && rep.p_not_c != 0) continue;
        ++res.instances;
        if (!rep.equal) {
          ++res.failures;
          if (res.reproducer.empty())
            res.reproducer = story_reproducer(t, b, t.atom_name(c), t.atom_name(e));
        }
        if (res.instances >= count) return res;
      }
    }
  }
  return res;
}

SweepResult sweep_lemma2(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  SweepResult res;
  for (int i = 0; i < count; ++i) {
    StructuralModel m = random_model(rng);
    Context u = random_context(rng, m);
    ++res.instances;
    try {
      Lemma2Report rep = check_lemma2(m, u);
      if (!rep.holds()) {
        ++res.failures;
        if (res.reproducer.empty()) res.reproducer = model_reproducer(m, u);
      }
    } catch (const std::exception& ex) {
      ++res.failures;
      if (res.reproducer.empty()) res.reproducer = model_reproducer(m, u, ex.what());
    }
  }
  return res;
}

SweepResult sweep_theorem1(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  SweepResult res;
  long guard = static_cast<long>(count) * 200 + 1000;
  while (res.instances < count && guard-- > 0) {
    StructuralModel m = random_model(rng);
    Context u = random_context(rng, m);
    World actual = world_for_context(m, u);
    std::vector<int> true_vars;
    for (int i = 0; i < m.var_count(); ++i)
      if (actual[static_cast<size_t>(i)]) true_vars.push_back(i);
    if (true_vars.size() < 2) continue;
    for (int ci : true_vars) {
      for (int ei : true_vars) {
        if (ci == ei) continue;
        const std::string& c = m.var_name(ci);
        const std::string& e = m.var_name(ei);
        ++res.instances;
        try {
          Theorem1Report rep = check_theorem1(m, u, c, e);
          if (!rep.agree) {
            ++res.failures;
            if (res.reproducer.empty())
              res.reproducer = model_reproducer(m, u, "cause " + c + ", effect " + e);
          }
        } catch (const std::exception& ex) {
          ++res.failures;
          if (res.reproducer.empty())
            res.reproducer = model_reproducer(m, u, std::string(ex.what()));
        }
        if (res.instances >= count) return res;
      }
    }
  }
  return res;
}

} // namespace cpcause
