#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crq/json_io.hpp"

namespace crq {

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

namespace cli_detail {

struct Settings {
  std::string command;
  std::string file;
  bool json = false;
  std::optional<std::string> tolerance;
  std::optional<uint64_t> seed;
  int trials = 100;
  std::optional<int> max_atoms;
};

struct LoadedProblem {
  ProblemFile file;
  std::shared_ptr<const EventSpace> space;
  std::vector<std::pair<CompoundExpr, Rational>> family;  // lowered assessments
  AssessmentContext ctx;                                  // the assessed values by key
};

inline LoadedProblem load(const Settings& s) {
  std::ifstream in(s.file);
  if (!in) throw ProblemError("cannot open problem file: " + s.file);
  std::stringstream buf;
  buf << in.rdbuf();
  LoadedProblem lp;
  lp.file = parse_problem(buf.str());
  if (s.tolerance) lp.file.tolerance = parse_rational(*s.tolerance);
  if (s.seed) lp.file.seed = *s.seed;
  if (s.max_atoms) lp.file.max_atoms = *s.max_atoms;
  try {
    lp.space = EventSpace::make(lp.file.atoms, lp.file.impossible, lp.file.max_atoms);
  } catch (const EmptySpace& e) {
    throw ProblemError(e.what());
  } catch (const CapExceeded& e) {
    throw ProblemError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ProblemError(e.what());
  }
  for (const auto& [text, value] : lp.file.assessments) {
    CompoundExpr expr = lower(*parse(text));
    if (auto key = expr_key(*lp.space, expr)) lp.ctx.set(*key, value);
    lp.family.emplace_back(std::move(expr), value);
  }
  return lp;
}

inline std::string render_interval_text(const Interval& iv) {
  std::ostringstream os;
  os << "interval: [" << to_string(iv.lower) << ", " << to_string(iv.upper) << "]\n";
  os << "lower: " << (iv.lower_exact ? "exact" : "bracketed") << ", upper: "
     << (iv.upper_exact ? "exact" : "bracketed") << ", tolerance " << to_string(iv.tolerance)
     << "\n";
  for (const auto& n : iv.notes) os << "note: " << n << "\n";
  return os.str();
}

inline std::string render_check_text(const CheckReport& rep, const Assessment& a) {
  std::ostringstream os;
  os << "verdict: " << (rep.coherent ? "coherent" : "incoherent") << "\n";
  for (size_t l = 0; l < rep.levels.size(); ++l) {
    const auto& lvl = rep.levels[l];
    os << "level " << l << ": {";
    for (size_t i = 0; i < lvl.items.size(); ++i)
      os << (i ? ", " : "") << a.items[lvl.items[i]].label;
    os << "} " << (lvl.feasible ? "solvable" : "unsolvable");
    if (!lvl.zero_layer.empty()) {
      os << ", zero layer {";
      for (size_t i = 0; i < lvl.zero_layer.size(); ++i)
        os << (i ? ", " : "") << a.items[lvl.zero_layer[i]].label;
      os << "}";
    }
    os << "\n";
  }
  if (rep.witness) {
    os << "stakes:";
    for (size_t i = 0; i < rep.witness->items.size(); ++i)
      os << " " << a.items[rep.witness->items[i]].label << "="
         << to_string(rep.witness->stakes[i]);
    os << "\n";
  }
  return os.str();
}

inline std::string render_table_text(const ValueTable& t) {
  std::ostringstream os;
  for (int id = 0; id < t.size(); ++id) {
    os << t.space().label(id) << " : " << to_string(t.value(id))
       << (t.conditioning().test(id) ? "" : "  (conditioning false)") << "\n";
  }
  return os.str();
}

inline std::string render_suite_text(const std::vector<CheckResult>& rs) {
  std::ostringstream os;
  bool all = true;
  for (const auto& r : rs) {
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "\n";
    if (!r.pass) os << "      " << r.details << "\n";
    all = all && r.pass;
  }
  os << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return os.str();
}

inline int run_check(const Settings& s, CliResult& res) {
  LoadedProblem lp = load(s);
  if (lp.family.empty()) throw ProblemError("check needs at least one assessment");
  Assessment a = make_assessment(lp.space, lp.family, lp.ctx);
  CheckReport rep = check_coherence(a);
  res.out = s.json ? check_report_to_json(rep, a).dump(2) + "\n" : render_check_text(rep, a);
  return rep.coherent ? 0 : 1;
}

inline int run_extend(const Settings& s, CliResult& res) {
  LoadedProblem lp = load(s);
  if (!lp.file.query) throw ProblemError("extend needs a \"query\" expression");
  if (lp.family.empty()) throw ProblemError("extend needs at least one assessment");
  CompoundExpr target = lower(*parse(*lp.file.query));
  Assessment base = make_assessment(lp.space, lp.family, lp.ctx);
  ExtensionOptions opts;
  opts.tolerance = lp.file.tolerance;
  try {
    Interval iv = extension_interval(base, target, lp.ctx, opts);
    res.out = s.json ? interval_to_json(iv).dump(2) + "\n" : render_interval_text(iv);
    return 0;
  } catch (const IncoherentBase&) {
    res.err = "base assessment is incoherent; run 'check' for a witness\n";
    return 1;
  }
}

inline int run_table(const Settings& s, CliResult& res) {
  LoadedProblem lp = load(s);
  if (!lp.file.query) throw ProblemError("table needs a \"query\" expression");
  ValueTable t = elaborate(*parse(*lp.file.query), lp.space, lp.ctx, BuildMode::Checked);
  res.out = s.json ? table_to_json(t).dump(2) + "\n" : render_table_text(t);
  return 0;
}

inline int run_entails(const Settings& s, CliResult& res) {
  LoadedProblem lp = load(s);
  if (!lp.file.query) throw ProblemError("entails needs a \"query\" conclusion");
  std::vector<ConditionalEvent> premises;
  for (const auto& [expr, value] : lp.family) {
    if (expr.kind() != CompoundExpr::Kind::Conditional)
      throw ProblemError("entails premises must be plain or conditional events");
    premises.push_back(expr.event());
  }
  if (premises.empty()) throw ProblemError("entails needs at least one premise");
  CompoundExpr conclusion = lower(*parse(*lp.file.query));
  if (conclusion.kind() != CompoundExpr::Kind::Conditional)
    throw ProblemError("entails conclusion must be a plain or conditional event");
  ExtensionOptions opts;
  opts.tolerance = lp.file.tolerance;
  bool yes;
  try {
    yes = p_entails(lp.space, premises, conclusion.event(), opts);
  } catch (const NotPConsistent& e) {
    throw ProblemError(e.what());
  }
  if (s.json) {
    Json j;
    j["entailed"] = yes;
    res.out = j.dump(2) + "\n";
  } else {
    res.out = std::string("entailed: ") + (yes ? "yes" : "no") + "\n";
  }
  return yes ? 0 : 1;
}

inline int run_verify(const Settings& s, CliResult& res, bool have_file) {
  uint64_t seed = s.seed.value_or(0);
  if (have_file) {
    LoadedProblem lp = load(s);
    if (!s.seed) seed = lp.file.seed;
  }
  auto results = run_suite(seed, s.trials);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  res.out = s.json ? suite_to_json(results, seed, s.trials).dump(2) + "\n"
                   : render_suite_text(results);
  return all ? 0 : 1;
}

}  // namespace cli_detail

inline CliResult run_cli(const std::vector<std::string>& args) {
  CliResult res;
  cli_detail::Settings s;

  CLI::App app{"coherence engine for conditional events and iterated conditionals", "crq"};
  app.require_subcommand(1);
  bool as_json = false, as_text = false;
  std::string tolerance;
  uint64_t seed_val = 0;
  bool seed_set = false;
  int max_atoms_val = 0;

  auto add_common = [&](CLI::App* cmd, bool file_required) {
    auto* f = cmd->add_option("file", s.file, "JSON problem file");
    if (file_required) f->required();
    cmd->add_flag("--json", as_json, "emit a JSON report");
    cmd->add_flag("--text", as_text, "emit a plain-text report (default)");
    cmd->add_option("--tolerance", tolerance, "bracketing tolerance, e.g. 1/1099511627776");
    cmd->add_option("--seed", seed_val, "random seed")->each([&](const std::string&) {
      seed_set = true;
    });
    cmd->add_option("--max-atoms", max_atoms_val, "atom-count cap for the event space");
  };
  add_common(app.add_subcommand("check", "check coherence of the assessments"), true);
  add_common(app.add_subcommand("extend", "propagate to the query's coherent interval"), true);
  add_common(app.add_subcommand("table", "render the query's value table"), true);
  add_common(app.add_subcommand("entails", "test p-entailment of the query"), true);
  auto* verify = app.add_subcommand("verify", "run the built-in verification suite");
  add_common(verify, false);
  verify->add_option("--trials", s.trials, "sample count per randomized check");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    if (e.get_exit_code() == 0) {
      // --help and friends
      os << app.help();
      res.out = os.str();
      res.status = 0;
      return res;
    }
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
    return res;
  }

  s.command = app.get_subcommands().front()->get_name();
  s.json = as_json;  // text is the default rendering
  if (!tolerance.empty()) s.tolerance = tolerance;
  if (seed_set) s.seed = seed_val;
  if (max_atoms_val > 0) s.max_atoms = max_atoms_val;

  try {
    if (s.command == "check") res.status = cli_detail::run_check(s, res);
    else if (s.command == "extend") res.status = cli_detail::run_extend(s, res);
    else if (s.command == "table") res.status = cli_detail::run_table(s, res);
    else if (s.command == "entails") res.status = cli_detail::run_entails(s, res);
    else if (s.command == "verify") res.status = cli_detail::run_verify(s, res, !s.file.empty());
  } catch (const ProblemError& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const SyntaxError& e) {
    res.err = std::string("expression error at ") + e.what() + "\n";
    res.status = 2;
  } catch (const UnsupportedCompound& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const MissingAssessment& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const DegenerateAntecedent& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const DegenerateTarget& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const EmptyAntecedent& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const UnknownAtom& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const OutOfRangeAssessment& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const ParseError& e) {
    res.err = std::string(e.what()) + "\n";
    res.status = 2;
  } catch (const Json::exception& e) {
    res.err = std::string("malformed problem file: ") + e.what() + "\n";
    res.status = 2;
  } catch (const std::exception& e) {
    res.err = std::string("internal error: ") + e.what() + "\n";
    res.status = 2;
  }
  return res;
}

inline int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliResult res = run_cli(args);
  if (!res.out.empty()) std::cout << res.out;
  if (!res.err.empty()) std::cerr << res.err;
  return res.status;
}

}  // namespace crq
