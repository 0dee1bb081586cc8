#include "cpcause/causation.hpp"
#include "cpcause/check.hpp"
#include "cpcause/engine.hpp"
#include "cpcause/parser.hpp"
#include "cpcause/sm.hpp"
#include "cpcause/transform.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace cpcause;

int g_exit = 0;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::syntax, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::syntax, "cannot write " + path);
  out << text;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::syntax:
    case ErrorKind::probability_sum:
    case ErrorKind::duplicate_head_atom:
    case ErrorKind::unknown_atom:
    case ErrorKind::cyclic_model:
      return 2;
    case ErrorKind::illegal_step:
    case ErrorKind::incomplete_story:
    case ErrorKind::no_such_branch:
    case ErrorKind::ambiguous_branch:
    case ErrorKind::invalid_branch:
      return 3;
    case ErrorKind::condition_impossible:
      return 4;
    default:
      return 5;
  }
}

std::string amount(const Rational& r) {
  return rational_string(r) + " (" + decimal_string(r) + ")";
}

AtomId resolve_atom(const CPTheory& t, const std::string& name) {
  auto id = t.atom_id(name);
  if (!id) throw Error(ErrorKind::unknown_atom, "unknown atom '" + name + "'");
  return *id;
}

void cmd_validate(const std::string& theory_path, const std::string& story_path) {
  CPTheory t = parse_theory(read_file(theory_path), theory_path);
  std::cout << "theory ok: " << t.law_count() << " laws, " << t.atom_count() << " atoms\n";
  for (const NonStratified& w : check_stratification(t))
    std::cout << "NonStratifiedWarning: law " << w.law_id
              << " never fires yet stays possible at leaf " << state_string(t, w.leaf) << "\n";
  if (!story_path.empty()) {
    Branch b = parse_story(read_file(story_path), t, story_path);
    std::cout << "story ok: " << b.steps.size() << " steps, leaf " << state_string(t, b.leaf)
              << "\n";
  }
}

void cmd_query(const std::string& theory_path, const std::vector<std::string>& dos,
               const std::string& prob_text, const std::vector<std::string>& cond_texts,
               bool dist) {
  int modes = (prob_text.empty() ? 0 : 1) + (cond_texts.empty() ? 0 : 1) + (dist ? 1 : 0);
  if (modes != 1)
    throw CLI::ValidationError("query", "pick exactly one of --prob, --cond, --dist");
  CPTheory t = parse_theory(read_file(theory_path), theory_path);
  for (const std::string& d : dos) {
    if (d.empty()) throw CLI::ValidationError("query", "--do needs [~]atom");
    bool value = d[0] != '~';
    t = intervene(t, value ? d : d.substr(1), value);
  }
  if (dist) {
    Distribution dd = exact_distribution(t);
    for (const auto& [state, mass] : dd.entries)
      std::cout << amount(mass) << "  " << state_string(t, state) << "\n";
    std::cout << dd.entries.size() << " leaves, total " << rational_string(dd.total()) << "\n";
    return;
  }
  Rational p;
  if (!prob_text.empty()) {
    p = prob(t, parse_formula(prob_text));
  } else {
    p = cond_prob(t, parse_formula(cond_texts[0]), parse_formula(cond_texts[1]));
  }
  std::cout << "P = " << amount(p) << "\n";
}

nlohmann::json verdict_json(const CauseVerdict& v) {
  nlohmann::json j;
  j["cause"] = v.cause;
  j["effect"] = v.effect;
  j["definition"] = definition_name(v.definition);
  j["strength_rational"] = rational_string(v.strength);
  j["strength_decimal"] = decimal_string(v.strength);
  j["is_cause"] = v.is_cause;
  if (v.factors) {
    j["factors"] = {{"counterfactual",
                     {{"rational", rational_string(v.factors->first)},
                      {"decimal", decimal_string(v.factors->first)}}},
                    {"abnormality",
                     {{"rational", rational_string(v.factors->second)},
                      {"decimal", decimal_string(v.factors->second)}}}};
  } else {
    j["factors"] = nullptr;
  }
  j["diagnostics"] = v.diagnostics;
  return j;
}

void print_verdict(const CauseVerdict& v) {
  std::cout << "definition  " << definition_name(v.definition) << "\n";
  std::cout << "cause       " << v.cause << "\n";
  std::cout << "effect      " << v.effect << "\n";
  std::cout << "strength    " << amount(v.strength) << "\n";
  std::cout << "is_cause    " << (v.is_cause ? "yes" : "no") << "\n";
  if (v.factors) {
    std::cout << "counterfactual " << amount(v.factors->first) << "\n";
    std::cout << "abnormality    " << amount(v.factors->second) << "\n";
  }
  for (const std::string& d : v.diagnostics) std::cout << "note        " << d << "\n";
}

void cmd_cause(const std::string& theory_path, const std::string& story_path,
               const std::string& cause_name, const std::string& effect_name,
               const std::string& definition, const std::string& format) {
  CPTheory t = parse_theory(read_file(theory_path), theory_path);
  Branch b = parse_story(read_file(story_path), t, story_path);
  DefinitionKind k = *definition_from_name(definition);
  CauseVerdict v = cause(t, b, resolve_atom(t, cause_name), resolve_atom(t, effect_name), k);
  if (format == "json")
    std::cout << verdict_json(v).dump(2) << "\n";
  else
    print_verdict(v);
}

void cmd_rank(const std::string& theory_path, const std::string& story_path,
              const std::string& effect_name, const std::string& definition,
              const std::string& format) {
  CPTheory t = parse_theory(read_file(theory_path), theory_path);
  Branch b = parse_story(read_file(story_path), t, story_path);
  DefinitionKind k = *definition_from_name(definition);
  std::vector<RankEntry> table = rank_causes(t, b, resolve_atom(t, effect_name), k);
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const RankEntry& r : table) {
      nlohmann::json row;
      row["atom"] = r.atom;
      row["verdict"] = r.verdict ? verdict_json(*r.verdict) : nlohmann::json(nullptr);
      row["diagnostic"] = r.diagnostic;
      rows.push_back(std::move(row));
    }
    std::cout << rows.dump(2) << "\n";
    return;
  }
  int place = 0;
  for (const RankEntry& r : table) {
    ++place;
    std::cout << place << ". " << r.atom;
    for (size_t pad = r.atom.size(); pad < 16; ++pad) std::cout << ' ';
    if (r.verdict)
      std::cout << " " << amount(r.verdict->strength)
                << (r.verdict->is_cause ? "  cause" : "  not a cause") << "\n";
    else
      std::cout << " -  " << r.diagnostic << "\n";
  }
  if (table.empty()) std::cout << "no candidates: the story makes nothing else true\n";
}

void cmd_translate(const std::string& model_path, const std::string& theory_out,
                   const std::string& stories_out) {
  StructuralModel m = parse_model(read_file(model_path), model_path);
  CPTheory t = translate(m);
  std::string theory_text = serialize_theory(t);
  if (theory_out.empty())
    std::cout << theory_text;
  else
    write_file(theory_out, theory_text);
  for (size_t k = 0; k < m.contexts.size(); ++k) {
    Branch b = story_for_context(m, m.contexts[k]);
    std::string story_text = serialize_story(t, b);
    if (stories_out.empty()) {
      std::cout << "% story for context " << k << "\n" << story_text;
    } else if (m.contexts.size() == 1) {
      write_file(stories_out, story_text);
    } else {
      write_file(stories_out + "." + std::to_string(k), story_text);
    }
  }
}

void cmd_check(const std::string& theorem, std::uint64_t seed, int count) {
  if (const char* env = std::getenv("CPCAUSE_SEED")) seed = std::strtoull(env, nullptr, 10);
  SweepResult r;
  if (theorem == "order-invariance")
    r = sweep_order_invariance(seed, count);
  else if (theorem == "2")
    r = sweep_theorem2(seed, count);
  else if (theorem == "lemma2")
    r = sweep_lemma2(seed, count);
  else
    r = sweep_theorem1(seed, count);
  std::cout << "check " << theorem << ": " << r.instances << " instances, " << r.failures
            << " counterexamples (seed " << seed << ")\n";
  if (!r.ok()) {
    std::cout << "% reproducer\n" << r.reproducer;
    g_exit = 6;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact probabilistic queries and graded actual causation over rule theories"};
  app.require_subcommand(1);

  std::string theory_path, story_path, model_path;
  std::string prob_text, cause_name, effect_name, definition, format = "text";
  std::vector<std::string> cond_texts, dos;
  bool dist = false;
  std::string theory_out, stories_out, theorem;
  std::uint64_t seed = 2024;
  int count = 100;

  CLI::App* validate = app.add_subcommand("validate", "parse a theory and optional story");
  validate->add_option("theory", theory_path, "theory file")->required();
  validate->add_option("story", story_path, "story file");
  validate->callback([&] { cmd_validate(theory_path, story_path); });

  CLI::App* query = app.add_subcommand("query", "exact probability queries");
  query->add_option("theory", theory_path, "theory file")->required();
  query->add_option("--do", dos, "intervention [~]atom, repeatable");
  query->add_option("--prob", prob_text, "formula");
  query->add_option("--cond", cond_texts, "formula, condition")->expected(2);
  query->add_flag("--dist", dist, "print the whole leaf distribution");
  query->callback([&] { cmd_query(theory_path, dos, prob_text, cond_texts, dist); });

  auto definition_opt = [&](CLI::App* cmd) {
    cmd->add_option("--definition", definition, "working|hh|intermediate|final")
        ->required()
        ->check(CLI::IsMember({"working", "hh", "intermediate", "final"}));
  };

  CLI::App* cause = app.add_subcommand("cause", "grade one cause against one effect");
  cause->add_option("theory", theory_path, "theory file")->required();
  cause->add_option("story", story_path, "story file")->required();
  cause->add_option("--cause", cause_name, "cause atom")->required();
  cause->add_option("--effect", effect_name, "effect atom")->required();
  definition_opt(cause);
  cause->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
  cause->callback(
      [&] { cmd_cause(theory_path, story_path, cause_name, effect_name, definition, format); });

  CLI::App* rank = app.add_subcommand("rank", "grade every candidate cause of one effect");
  rank->add_option("theory", theory_path, "theory file")->required();
  rank->add_option("story", story_path, "story file")->required();
  rank->add_option("--effect", effect_name, "effect atom")->required();
  definition_opt(rank);
  rank->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
  rank->callback([&] { cmd_rank(theory_path, story_path, effect_name, definition, format); });

  CLI::App* translate = app.add_subcommand("translate", "structural model to theory and stories");
  translate->add_option("model", model_path, "model file")->required();
  translate->add_option("--theory-out", theory_out, "write the theory here instead of stdout");
  translate->add_option("--stories-out", stories_out,
                        "write context stories here instead of stdout");
  translate->callback([&] { cmd_translate(model_path, theory_out, stories_out); });

  CLI::App* check = app.add_subcommand("check", "randomized differential test sweeps");
  check->add_option("--theorem", theorem, "1|2|lemma2|order-invariance")
      ->required()
      ->check(CLI::IsMember({"1", "2", "lemma2", "order-invariance"}));
  check->add_option("--seed", seed, "sweep seed (CPCAUSE_SEED overrides)");
  check->add_option("--count", count, "instances to draw");
  check->callback([&] { cmd_check(theorem, seed, count); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const cpcause::Error& e) {
    std::cerr << error_kind_name(e.kind);
    if (e.span) std::cerr << " at " << e.span->str();
    std::cerr << ": " << e.what() << "\n";
    return exit_code_for(e.kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit;
}
