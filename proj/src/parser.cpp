#include "cpcause/parser.hpp"

#include "cpcause/engine.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace cpcause {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

struct Cursor {
  const std::string& text;
  std::string file;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  void advance() {
    if (eof()) return;
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    for (;;) {
      while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '%') {
        while (!eof() && peek() != '\n') advance();
        continue;
      }
      break;
    }
  }

  SourceSpan span() const { return SourceSpan{file, line, col}; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::syntax, span(), msg);
  }

  bool try_consume(const std::string& s) {
    skip_ws();
    if (text.compare(pos, s.size(), s) != 0) return false;
    for (size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }

  void expect(const std::string& s, const std::string& what) {
    skip_ws();
    if (!try_consume(s)) fail("expected " + what);
  }
};

// an identifier immediately followed by '(' extends through the matching ')'
std::string parse_ident(Cursor& c, const std::string& what) {
  c.skip_ws();
  if (!ident_start(c.peek())) c.fail("expected " + what);
  std::string s;
  while (ident_char(c.peek())) {
    s += c.peek();
    c.advance();
  }
  if (c.peek() == '(') {
    int depth = 0;
    do {
      if (c.eof() || c.peek() == '\n') c.fail("unterminated parameter list");
      char ch = c.peek();
      s += ch;
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      c.advance();
    } while (depth > 0);
  }
  return s;
}

Rational parse_number(Cursor& c, const std::string& what) {
  c.skip_ws();
  SourceSpan at = c.span();
  std::string s;
  while (digit(c.peek()) || c.peek() == '.' || c.peek() == '/') {
    s += c.peek();
    c.advance();
  }
  auto r = parse_rational(s);
  if (!r) throw Error(ErrorKind::syntax, at, "invalid " + what);
  return *r;
}

int parse_int(Cursor& c, const std::string& what) {
  c.skip_ws();
  SourceSpan at = c.span();
  std::string s;
  while (digit(c.peek())) {
    s += c.peek();
    c.advance();
  }
  if (s.empty() || s.size() > 9) throw Error(ErrorKind::syntax, at, "expected " + what);
  return std::stoi(s);
}

Literal parse_literal(Cursor& c, CPTheory& t) {
  bool positive = !c.try_consume("~");
  std::string name = parse_ident(c, "an atom");
  return Literal{t.intern(name), positive};
}

std::vector<Literal> parse_clause(Cursor& c, CPTheory& t) {
  c.skip_ws();
  bool grouped = c.try_consume("(");
  std::vector<Literal> clause;
  clause.push_back(parse_literal(c, t));
  while (c.try_consume("|")) clause.push_back(parse_literal(c, t));
  if (grouped) c.expect(")", "')'");
  return clause;
}

Formula parse_disjunction(Cursor& c);

Formula parse_formula_unary(Cursor& c) {
  c.skip_ws();
  if (c.try_consume("~")) return Formula::make_neg(parse_formula_unary(c));
  if (c.peek() == '(') {
    c.advance();
    Formula f = parse_disjunction(c);
    c.expect(")", "')'");
    return f;
  }
  return Formula::make_atom(parse_ident(c, "an atom"));
}

Formula parse_conjunction(Cursor& c) {
  std::vector<Formula> fs;
  fs.push_back(parse_formula_unary(c));
  while (c.try_consume("&")) fs.push_back(parse_formula_unary(c));
  return Formula::make_conj(std::move(fs));
}

Formula parse_disjunction(Cursor& c) {
  std::vector<Formula> fs;
  fs.push_back(parse_conjunction(c));
  while (c.try_consume("|")) fs.push_back(parse_conjunction(c));
  return Formula::make_disj(std::move(fs));
}

} // namespace

CPTheory parse_theory(const std::string& text, const std::string& filename) {
  Cursor c{text, filename};
  CPTheory t;
  c.skip_ws();
  while (!c.eof()) {
    SourceSpan law_at = c.span();
    std::vector<Disjunct> head;
    bool bare = false;
    for (;;) {
      c.skip_ws();
      std::string name = parse_ident(c, "an atom");
      Disjunct d;
      d.atom = t.intern(name);
      if (c.try_consume(":")) {
        d.prob = parse_number(c, "probability");
      } else {
        d.prob = 1;
        bare = true;
      }
      if (c.try_consume("{")) {
        d.norm = parse_number(c, "norm");
        c.expect("}", "'}'");
      }
      head.push_back(std::move(d));
      if (!c.try_consume(";")) break;
    }
    if (bare && head.size() > 1)
      throw Error(ErrorKind::syntax, law_at,
                  "a disjunct without a probability must be the only one");
    c.expect("<-", "'<-'");
    Body body;
    if (!c.try_consume(".")) {
      for (;;) {
        body.clauses.push_back(parse_clause(c, t));
        if (c.try_consume(",")) continue;
        c.expect(".", "'.'");
        break;
      }
    }
    try {
      t.append_law(std::move(head), std::move(body), t.law_count());
    } catch (const Error& e) {
      if (e.span) throw;
      throw Error(e.kind, law_at, e.what());
    }
    c.skip_ws();
  }
  return t;
}

Branch parse_story(const std::string& text, const CPTheory& theory,
                   const std::string& filename) {
  Cursor c{text, filename};
  std::vector<Choice> steps;
  c.skip_ws();
  while (!c.eof()) {
    SourceSpan at = c.span();
    if (parse_ident(c, "'apply'") != "apply")
      throw Error(ErrorKind::syntax, at, "expected 'apply'");
    c.skip_ws();
    SourceSpan id_at = c.span();
    int law_id = parse_int(c, "a law id");
    c.expect("->", "'->'");
    c.skip_ws();
    SourceSpan out_at = c.span();
    std::string name = parse_ident(c, "an atom or '_'");
    if (law_id >= theory.law_count())
      throw Error(ErrorKind::illegal_step, id_at, "no law " + std::to_string(law_id));
    std::optional<AtomId> outcome;
    if (name != "_") {
      for (const Disjunct& d : theory.law(law_id).head)
        if (theory.atom_name(*d.atom) == name) outcome = d.atom;
      if (!outcome)
        throw Error(ErrorKind::illegal_step, out_at,
                    "atom " + name + " not in the head of law " + std::to_string(law_id));
    }
    steps.push_back(Choice{law_id, outcome});
    c.skip_ws();
  }
  return replay(theory, steps);
}

Formula parse_formula(const std::string& text, const std::string& filename) {
  Cursor c{text, filename};
  Formula f = parse_disjunction(c);
  c.skip_ws();
  if (!c.eof()) c.fail("unexpected trailing input");
  return f;
}

StructuralModel parse_model(const std::string& text, const std::string& filename) {
  Cursor c{text, filename};
  StructuralModel m;
  std::set<std::string> declared;
  // equation references checked once the whole file is known, so a forward
  // reference and a misspelling get different error kinds
  struct PendingRef {
    std::string name;
    SourceSpan at;
    std::string owner;
  };
  std::vector<PendingRef> pending;
  struct RawContext {
    std::vector<std::pair<std::string, bool>> pairs;
    SourceSpan at;
  };
  std::vector<RawContext> raw_contexts;

  c.skip_ws();
  while (!c.eof()) {
    SourceSpan at = c.span();
    std::string kw = parse_ident(c, "'innate', 'derived' or 'context'");
    if (kw == "innate") {
      std::string name = parse_ident(c, "a variable name");
      if (declared.count(name))
        throw Error(ErrorKind::syntax, at, "variable " + name + " declared twice");
      if (!m.derived.empty())
        throw Error(ErrorKind::syntax, at, "innate variables must precede derived ones");
      c.expect(":", "':'");
      InnateVar v;
      v.name = name;
      SourceSpan p_at = c.span();
      v.stat_prob = parse_number(c, "probability");
      if (v.stat_prob <= 0 || v.stat_prob >= 1)
        throw Error(ErrorKind::probability_sum, p_at,
                    "probability of " + name + " must lie strictly between 0 and 1");
      if (c.try_consume("{")) {
        SourceSpan n_at = c.span();
        v.norm_prob = parse_number(c, "norm");
        c.expect("}", "'}'");
        if (*v.norm_prob <= 0 || *v.norm_prob >= 1)
          throw Error(ErrorKind::probability_sum, n_at,
                      "norm of " + name + " must lie strictly between 0 and 1");
      }
      declared.insert(name);
      m.innate.push_back(std::move(v));
    } else if (kw == "derived") {
      std::string name = parse_ident(c, "a variable name");
      if (declared.count(name))
        throw Error(ErrorKind::syntax, at, "variable " + name + " declared twice");
      c.expect("=", "'='");
      SourceSpan eq_at = c.span();
      Formula eq = parse_disjunction(c);
      std::vector<const Formula*> stack{&eq};
      while (!stack.empty()) {
        const Formula* f = stack.back();
        stack.pop_back();
        if (f->kind == Formula::Kind::atom && !declared.count(f->name))
          pending.push_back(PendingRef{f->name, eq_at, name});
        for (const Formula& child : f->children) stack.push_back(&child);
      }
      declared.insert(name);
      m.derived.push_back(DerivedVar{name, std::move(eq)});
    } else if (kw == "context") {
      RawContext rc;
      rc.at = at;
      for (;;) {
        std::string name = parse_ident(c, "a variable name");
        c.expect("=", "'='");
        c.skip_ws();
        char bit = c.peek();
        if (bit != '0' && bit != '1') c.fail("expected 0 or 1");
        c.advance();
        rc.pairs.emplace_back(name, bit == '1');
        if (!c.try_consume(",")) break;
      }
      raw_contexts.push_back(std::move(rc));
    } else {
      throw Error(ErrorKind::syntax, at, "expected 'innate', 'derived' or 'context'");
    }
    c.skip_ws();
  }

  for (const auto& ref : pending) {
    ErrorKind kind =
        declared.count(ref.name) ? ErrorKind::cyclic_model : ErrorKind::unknown_atom;
    throw Error(kind, ref.at,
                "equation of " + ref.owner + " refers to " + ref.name +
                    (kind == ErrorKind::cyclic_model ? " which is declared later"
                                                     : " which is not declared"));
  }
  for (const auto& rc : raw_contexts) {
    std::vector<bool> u(m.innate.size(), false);
    std::vector<bool> seen(m.innate.size(), false);
    for (const auto& [name, val] : rc.pairs) {
      int idx = m.index_of(name);
      if (idx < 0)
        throw Error(ErrorKind::unknown_atom, rc.at, "unknown variable " + name);
      if (!m.is_innate(idx))
        throw Error(ErrorKind::syntax, rc.at, name + " is derived, not innate");
      if (seen[static_cast<size_t>(idx)])
        throw Error(ErrorKind::syntax, rc.at, name + " assigned twice");
      seen[static_cast<size_t>(idx)] = true;
      u[static_cast<size_t>(idx)] = val;
    }
    for (size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw Error(ErrorKind::syntax, rc.at,
                    "context does not assign " + m.innate[i].name);
    m.contexts.push_back(std::move(u));
  }
  m.validate();
  return m;
}

namespace {

std::string render_clause(const CPTheory& t, const std::vector<Literal>& clause) {
  std::ostringstream os;
  if (clause.size() > 1) os << "(";
  for (size_t i = 0; i < clause.size(); ++i) {
    if (i) os << " | ";
    if (!clause[i].positive) os << "~";
    os << t.atom_name(clause[i].atom);
  }
  if (clause.size() > 1) os << ")";
  return os.str();
}

} // namespace

std::string serialize_theory(const CPTheory& t) {
  std::ostringstream os;
  for (const CPLaw& law : t.laws()) {
    for (size_t i = 0; i < law.head.size(); ++i) {
      const Disjunct& d = law.head[i];
      if (i) os << "; ";
      os << t.atom_name(*d.atom);
      if (d.prob != 1) os << ":" << pretty_rational(d.prob);
      if (d.norm) os << " {" << pretty_rational(*d.norm) << "}";
    }
    os << " <- ";
    for (size_t i = 0; i < law.body.clauses.size(); ++i) {
      if (i) os << ", ";
      os << render_clause(t, law.body.clauses[i]);
    }
    os << ".\n";
  }
  return os.str();
}

std::string serialize_story(const CPTheory& t, const Branch& b) {
  std::ostringstream os;
  for (const Choice& ch : b.steps) {
    os << "apply " << ch.law_id << " -> ";
    os << (ch.outcome ? t.atom_name(*ch.outcome) : "_");
    os << "\n";
  }
  return os.str();
}

namespace {

void render_formula(const Formula& f, std::ostringstream& os, int parent_binds) {
  // binding strength: disj 0, conj 1, neg and atom 2
  int binds = f.kind == Formula::Kind::disj   ? 0
              : f.kind == Formula::Kind::conj ? 1
                                              : 2;
  bool parens = binds < parent_binds;
  if (parens) os << "(";
  switch (f.kind) {
    case Formula::Kind::atom:
      os << f.name;
      break;
    case Formula::Kind::neg:
      os << "~";
      render_formula(f.children.front(), os, 2);
      break;
    case Formula::Kind::conj:
      for (size_t i = 0; i < f.children.size(); ++i) {
        if (i) os << " & ";
        render_formula(f.children[i], os, 1);
      }
      break;
    case Formula::Kind::disj:
      for (size_t i = 0; i < f.children.size(); ++i) {
        if (i) os << " | ";
        render_formula(f.children[i], os, 0);
      }
      break;
  }
  if (parens) os << ")";
}

} // namespace

std::string serialize_formula(const Formula& f) {
  std::ostringstream os;
  render_formula(f, os, 0);
  return os.str();
}

std::string serialize_model(const StructuralModel& m) {
  std::ostringstream os;
  for (const InnateVar& v : m.innate) {
    os << "innate " << v.name << " : " << pretty_rational(v.stat_prob);
    if (v.norm_prob) os << " {" << pretty_rational(*v.norm_prob) << "}";
    os << "\n";
  }
  for (const DerivedVar& v : m.derived)
    os << "derived " << v.name << " = " << serialize_formula(v.equation) << "\n";
  for (const auto& u : m.contexts) {
    os << "context ";
    for (size_t i = 0; i < m.innate.size(); ++i) {
      if (i) os << ", ";
      os << m.innate[i].name << "=" << (u[i] ? "1" : "0");
    }
    os << "\n";
  }
  return os.str();
}

Branch branch_from_leaf(const CPTheory& t, const std::vector<std::string>& leaf_atoms) {
  State target(static_cast<size_t>(t.atom_count()), false);
  for (const std::string& name : leaf_atoms) {
    auto id = t.atom_id(name);
    if (!id) throw Error(ErrorKind::unknown_atom, "unknown atom " + name);
    target[static_cast<size_t>(*id)] = true;
  }
  std::vector<Trace> hits;
  for (Trace& tr : traces(t, OrderPolicy::canonical()))
    if (tr.leaf == target) hits.push_back(std::move(tr));
  if (hits.empty())
    throw Error(ErrorKind::no_such_branch, "no branch ends in " + state_string(t, target));
  if (hits.size() > 1)
    throw Error(ErrorKind::ambiguous_branch,
                std::to_string(hits.size()) + " branches end in " + state_string(t, target));
  return Branch{std::move(hits.front().steps), std::move(hits.front().leaf)};
}

} // namespace cpcause
