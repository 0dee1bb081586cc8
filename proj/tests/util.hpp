#pragma once

#include "cpcause/core.hpp"
#include "cpcause/engine.hpp"
#include "cpcause/parser.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string& name) {
  return std::string(CPCAUSE_CORPUS_DIR) + "/" + name;
}

inline cpcause::CPTheory load_theory(const std::string& name) {
  return cpcause::parse_theory(read_file(corpus(name)), name);
}

inline cpcause::Branch load_story(const std::string& name, const cpcause::CPTheory& t) {
  return cpcause::parse_story(read_file(corpus(name)), t, name);
}

// runs fn and reports which error kind it threw, if any
template <class Fn>
std::optional<cpcause::ErrorKind> thrown(Fn fn) {
  try {
    fn();
  } catch (const cpcause::Error& e) {
    return e.kind;
  }
  return std::nullopt;
}

// independent oracle for theories without negation: pick one outcome per law
// up front, fire applicable laws to a fixpoint, weight by the product over
// all laws; unfired laws' picks marginalize out, so the result must match
// the tree semantics
inline cpcause::Distribution profile_distribution(const cpcause::CPTheory& t) {
  using namespace cpcause;
  std::vector<std::vector<Disjunct>> opts;
  for (const CPLaw& l : t.laws()) opts.push_back(l.options());
  Distribution dist;
  std::vector<size_t> pick(opts.size(), 0);
  for (;;) {
    Rational w(1);
    for (size_t i = 0; i < pick.size(); ++i) w *= opts[i][pick[i]].prob;
    State s(static_cast<size_t>(t.atom_count()), false);
    std::vector<bool> applied(opts.size(), false);
    bool moved = true;
    while (moved) {
      moved = false;
      for (size_t i = 0; i < opts.size(); ++i) {
        if (applied[i]) continue;
        bool ok = true;
        for (const auto& clause : t.law(static_cast<int>(i)).body.clauses) {
          bool cl = false;
          for (const Literal& lit : clause) cl = cl || s[static_cast<size_t>(lit.atom)];
          ok = ok && cl;
        }
        if (!ok) continue;
        applied[i] = true;
        moved = true;
        if (opts[i][pick[i]].atom) s[static_cast<size_t>(*opts[i][pick[i]].atom)] = true;
      }
    }
    dist.entries[s] += w;
    size_t j = 0;
    while (j < pick.size() && ++pick[j] == opts[j].size()) pick[j++] = 0;
    if (j == pick.size()) break;
  }
  return dist;
}

} // namespace testutil
