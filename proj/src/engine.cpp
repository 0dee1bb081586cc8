#include "cpcause/engine.hpp"

#include <algorithm>
#include <random>

namespace cpcause {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

OrderPolicy OrderPolicy::canonical() {
  return OrderPolicy([](const std::vector<int>& applicable, const std::vector<Choice>&) {
    return applicable.front();
  });
}

OrderPolicy OrderPolicy::highest() {
  return OrderPolicy([](const std::vector<int>& applicable, const std::vector<Choice>&) {
    return applicable.back();
  });
}

OrderPolicy OrderPolicy::seeded(std::uint64_t seed) {
  return OrderPolicy([seed](const std::vector<int>& applicable, const std::vector<Choice>& path) {
    std::uint64_t h = mix64(seed);
    for (const Choice& c : path) {
      h = mix64(h ^ static_cast<std::uint64_t>(c.law_id + 1));
      h = mix64(h ^ (c.outcome ? static_cast<std::uint64_t>(*c.outcome) + 2 : 1));
    }
    return applicable[static_cast<size_t>(h % applicable.size())];
  });
}

OrderPolicy OrderPolicy::story_first(Branch b) {
  return OrderPolicy([b = std::move(b)](const std::vector<int>& applicable,
                                        const std::vector<Choice>& path) {
    if (path.size() < b.steps.size() &&
        std::equal(path.begin(), path.end(), b.steps.begin())) {
      int want = b.steps[path.size()].law_id;
      if (std::find(applicable.begin(), applicable.end(), want) != applicable.end())
        return want;
    }
    return applicable.front();
  });
}

int OrderPolicy::pick(const std::vector<int>& applicable, const std::vector<Choice>& path) const {
  return fn_(applicable, path);
}

std::vector<bool> possible_atoms(const CPTheory& t, const State& state,
                                 const std::vector<bool>& applied) {
  std::vector<bool> possible(state.begin(), state.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < t.law_count(); ++i) {
      if (applied[static_cast<size_t>(i)]) continue;
      const CPLaw& law = t.law(i);
      if (!body_possible(law.body, state, possible)) continue;
      for (const Disjunct& d : law.head) {
        size_t a = static_cast<size_t>(*d.atom);
        if (!possible[a]) {
          possible[a] = true;
          changed = true;
        }
      }
    }
  }
  return possible;
}

bool body_satisfied(const Body& b, const State& state, const std::vector<bool>& possible) {
  for (const auto& clause : b.clauses) {
    bool ok = false;
    for (const Literal& lit : clause) {
      size_t a = static_cast<size_t>(lit.atom);
      if (lit.positive ? state[a] : !possible[a]) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool body_possible(const Body& b, const State& state, const std::vector<bool>& possible) {
  for (const auto& clause : b.clauses) {
    bool ok = false;
    for (const Literal& lit : clause) {
      size_t a = static_cast<size_t>(lit.atom);
      if (lit.positive ? possible[a] : !state[a]) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool law_applicable(const CPTheory& t, int law_id, const State& state,
                    const std::vector<bool>& applied, const std::vector<bool>& possible) {
  if (applied[static_cast<size_t>(law_id)]) return false;
  return body_satisfied(t.law(law_id).body, state, possible);
}

std::vector<int> applicable_laws(const CPTheory& t, const State& state,
                                 const std::vector<bool>& applied) {
  auto possible = possible_atoms(t, state, applied);
  std::vector<int> out;
  for (int i = 0; i < t.law_count(); ++i)
    if (law_applicable(t, i, state, applied, possible)) out.push_back(i);
  return out;
}

namespace {

void expand(const CPTheory& t, const OrderPolicy& policy, TreeNode* node,
            std::vector<Choice>& path) {
  auto applicable = applicable_laws(t, node->state, node->applied);
  if (applicable.empty()) return;
  int law_id = policy.pick(applicable, path);
  node->chosen_law = law_id;
  for (const Disjunct& opt : t.law(law_id).options()) {
    auto child = std::make_unique<TreeNode>();
    child->state = node->state;
    child->applied = node->applied;
    child->applied[static_cast<size_t>(law_id)] = true;
    if (opt.atom) child->state[static_cast<size_t>(*opt.atom)] = true;
    Choice choice{law_id, opt.atom};
    path.push_back(choice);
    expand(t, policy, child.get(), path);
    path.pop_back();
    node->edges.push_back(TreeNode::Edge{choice, opt.prob, std::move(child)});
  }
}

void collect(const TreeNode* node, std::vector<Choice>& steps, const Rational& p,
             std::vector<Trace>& out) {
  if (node->leaf()) {
    out.push_back(Trace{steps, node->state, p});
    return;
  }
  for (const auto& edge : node->edges) {
    steps.push_back(edge.choice);
    collect(edge.child.get(), steps, p * edge.prob, out);
    steps.pop_back();
  }
}

} // namespace

Tree build_tree(const CPTheory& t, const OrderPolicy& policy) {
  auto root = std::make_unique<TreeNode>();
  root->state.assign(static_cast<size_t>(t.atom_count()), false);
  root->applied.assign(static_cast<size_t>(t.law_count()), false);
  std::vector<Choice> path;
  expand(t, policy, root.get(), path);
  return root;
}

std::vector<Trace> traces(const CPTheory& t, const OrderPolicy& policy) {
  Tree tree = build_tree(t, policy);
  std::vector<Trace> out;
  std::vector<Choice> steps;
  collect(tree.get(), steps, Rational(1), out);
  return out;
}

Rational Distribution::total() const {
  Rational sum = 0;
  for (const auto& [state, p] : entries) sum += p;
  return sum;
}

Distribution exact_distribution(const CPTheory& t, const OrderPolicy& policy) {
  Distribution dist;
  for (const Trace& tr : traces(t, policy)) dist.entries[tr.leaf] += tr.prob;
  return dist;
}

Rational prob(const CPTheory& t, const Formula& f) {
  Rational sum = 0;
  for (const auto& [state, p] : exact_distribution(t).entries)
    if (eval_formula(f, t, state)) sum += p;
  return sum;
}

Rational cond_prob(const CPTheory& t, const Formula& f, const Formula& given) {
  Rational num = 0, den = 0;
  for (const auto& [state, p] : exact_distribution(t).entries) {
    if (!eval_formula(given, t, state)) continue;
    den += p;
    if (eval_formula(f, t, state)) num += p;
  }
  if (den == 0)
    throw Error(ErrorKind::condition_impossible, "condition has probability zero");
  return num / den;
}

Branch sample_story(const CPTheory& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  State state(static_cast<size_t>(t.atom_count()), false);
  std::vector<bool> applied(static_cast<size_t>(t.law_count()), false);
  std::vector<Choice> steps;
  for (;;) {
    auto applicable = applicable_laws(t, state, applied);
    if (applicable.empty()) break;
    int law_id = applicable.front();
    Rational u(BigInt(rng()), BigInt(1) << 64);
    Rational cum = 0;
    for (const Disjunct& opt : t.law(law_id).options()) {
      cum += opt.prob;
      if (u < cum) {
        steps.push_back(Choice{law_id, opt.atom});
        applied[static_cast<size_t>(law_id)] = true;
        if (opt.atom) state[static_cast<size_t>(*opt.atom)] = true;
        break;
      }
    }
  }
  return Branch{std::move(steps), std::move(state)};
}

Rational branch_probability(const CPTheory& t, const Branch& b) {
  Rational p = 1;
  for (const Choice& ch : b.steps) {
    if (ch.law_id < 0 || ch.law_id >= t.law_count())
      throw Error(ErrorKind::invalid_branch, "no law " + std::to_string(ch.law_id));
    auto opt = t.law(ch.law_id).option_for(ch.outcome);
    if (!opt)
      throw Error(ErrorKind::invalid_branch,
                  "law " + std::to_string(ch.law_id) + " offers no such option");
    p *= opt->prob;
  }
  return p;
}

namespace {

void scan_leaves(const CPTheory& t, const TreeNode* node, std::vector<bool>& reported,
                 std::vector<NonStratified>& out) {
  if (!node->leaf()) {
    for (const auto& edge : node->edges) scan_leaves(t, edge.child.get(), reported, out);
    return;
  }
  auto possible = possible_atoms(t, node->state, node->applied);
  for (int i = 0; i < t.law_count(); ++i) {
    if (node->applied[static_cast<size_t>(i)] || reported[static_cast<size_t>(i)]) continue;
    const Body& body = t.law(i).body;
    if (body_possible(body, node->state, possible) &&
        !body_satisfied(body, node->state, possible)) {
      reported[static_cast<size_t>(i)] = true;
      out.push_back(NonStratified{i, node->state});
    }
  }
}

} // namespace

std::vector<NonStratified> check_stratification(const CPTheory& t) {
  Tree tree = build_tree(t, OrderPolicy::canonical());
  std::vector<bool> reported(static_cast<size_t>(t.law_count()), false);
  std::vector<NonStratified> out;
  scan_leaves(t, tree.get(), reported, out);
  return out;
}

} // namespace cpcause
