#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "crq/coherence.hpp"
#include "crq/dsl.hpp"
#include "crq/propagation.hpp"
#include "crq/replication.hpp"

namespace crq {

using Json = nlohmann::ordered_json;

struct ProblemError : std::runtime_error {
  explicit ProblemError(const std::string& what) : std::runtime_error(what) {}
};

// One JSON problem document: the event space, the assessed family, and an
// optional query expression, plus tunables.
struct ProblemFile {
  std::vector<std::string> atoms;
  std::vector<Formula> impossible;
  std::vector<std::pair<std::string, Rational>> assessments;  // source text -> value
  std::optional<std::string> query;
  Rational tolerance = rational_pow2(-40);
  std::optional<Rational> grid_step;
  uint64_t seed = 0;
  int max_atoms = EventSpace::kDefaultAtomCap;
};

inline ProblemFile parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ProblemError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProblemError("problem file must be a JSON object");
  ProblemFile p;
  if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty())
    throw ProblemError("problem file needs a non-empty \"atoms\" array");
  for (const auto& a : j["atoms"]) {
    if (!a.is_string()) throw ProblemError("atom names must be strings");
    std::string name = a.get<std::string>();
    bool ok = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) != 0);
    for (char c : name)
      ok = ok && (std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_');
    if (name == "and" || name == "or" || name == "not" || name == "true" || name == "false")
      ok = false;
    if (!ok) throw ProblemError("bad atom name '" + name + "'");
    p.atoms.push_back(std::move(name));
  }
  if (j.contains("impossible")) {
    if (!j["impossible"].is_array()) throw ProblemError("\"impossible\" must be an array");
    for (const auto& f : j["impossible"]) {
      if (!f.is_string()) throw ProblemError("impossible entries must be formula strings");
      SrcPtr node;
      try {
        node = parse(f.get<std::string>());
      } catch (const SyntaxError& e) {
        throw ProblemError("bad formula in \"impossible\": " + std::string(e.what()));
      }
      if (node->kind != SrcNode::Kind::Bool)
        throw ProblemError("impossible entries must be plain event formulas, got '" +
                           f.get<std::string>() + "'");
      p.impossible.push_back(node->fml);
    }
  }
  if (j.contains("assessments")) {
    if (!j["assessments"].is_array()) throw ProblemError("\"assessments\" must be an array");
    for (const auto& it : j["assessments"]) {
      if (!it.is_object() || !it.contains("expr") || !it.contains("value"))
        throw ProblemError("each assessment needs \"expr\" and \"value\"");
      if (!it["expr"].is_string()) throw ProblemError("assessment \"expr\" must be a string");
      std::string expr = it["expr"].get<std::string>();
      Rational value;
      if (it["value"].is_string()) {
        try {
          value = parse_rational(it["value"].get<std::string>());
        } catch (const ParseError& e) {
          throw ProblemError("bad value for '" + expr + "': " + e.what());
        }
      } else if (it["value"].is_number_integer()) {
        value = Rational(it["value"].get<long long>());
      } else {
        throw ProblemError("value for '" + expr +
                           "' must be an exact string like \"9/10\" or \"0.9\", or an integer");
      }
      if (!is_probability(value))
        throw ProblemError("assessment on '" + expr + "' must lie in [0,1], got " +
                           to_string(value));
      p.assessments.emplace_back(std::move(expr), std::move(value));
    }
  }
  if (j.contains("query")) {
    if (!j["query"].is_string()) throw ProblemError("\"query\" must be a string");
    p.query = j["query"].get<std::string>();
  }
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (!o.is_object()) throw ProblemError("\"options\" must be an object");
    try {
      if (o.contains("tolerance")) p.tolerance = parse_rational(o["tolerance"].get<std::string>());
      if (o.contains("grid_step")) p.grid_step = parse_rational(o["grid_step"].get<std::string>());
      if (o.contains("seed")) p.seed = o["seed"].get<uint64_t>();
      if (o.contains("max_atoms")) p.max_atoms = o["max_atoms"].get<int>();
    } catch (const ParseError& e) {
      throw ProblemError(std::string("bad option: ") + e.what());
    } catch (const Json::exception& e) {
      throw ProblemError(std::string("bad option: ") + e.what());
    }
    if (p.max_atoms < 1) throw ProblemError("max_atoms must be positive");
    if (p.tolerance <= 0) throw ProblemError("tolerance must be positive");
  }
  return p;
}

inline Json interval_to_json(const Interval& iv) {
  Json j;
  j["lower"] = to_string(iv.lower);
  j["upper"] = to_string(iv.upper);
  j["lower_exact"] = iv.lower_exact;
  j["upper_exact"] = iv.upper_exact;
  j["tolerance"] = to_string(iv.tolerance);
  if (!iv.notes.empty()) j["notes"] = iv.notes;
  return j;
}

inline Json check_report_to_json(const CheckReport& rep, const Assessment& a) {
  Json j;
  j["verdict"] = rep.coherent ? "coherent" : "incoherent";
  Json levels = Json::array();
  for (const auto& lvl : rep.levels) {
    Json l;
    Json items = Json::array();
    for (int i : lvl.items) items.push_back(a.items[i].label);
    l["items"] = std::move(items);
    l["solvable"] = lvl.feasible;
    if (lvl.feasible) {
      Json sol = Json::object();
      for (size_t h = 0; h < lvl.constituents.size(); ++h)
        sol[a.space->label(lvl.constituents[h])] = to_string(lvl.solution[h]);
      l["solution"] = std::move(sol);
    }
    Json zl = Json::array();
    for (int i : lvl.zero_layer) zl.push_back(a.items[i].label);
    l["zero_layer"] = std::move(zl);
    levels.push_back(std::move(l));
  }
  j["trace"] = std::move(levels);
  if (rep.witness) {
    Json w;
    Json items = Json::array(), stakes = Json::array(), worlds = Json::array();
    for (int i : rep.witness->items) items.push_back(a.items[i].label);
    for (const auto& s : rep.witness->stakes) stakes.push_back(to_string(s));
    for (int id = 0; id < a.space->size(); ++id)
      if (rep.witness->hn.test(id)) worlds.push_back(a.space->label(id));
    w["items"] = std::move(items);
    w["stakes"] = std::move(stakes);
    w["constituents"] = std::move(worlds);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline Json table_to_json(const ValueTable& t) {
  Json rows = Json::array();
  for (int id = 0; id < t.size(); ++id) {
    Json r;
    r["constituent"] = t.space().label(id);
    r["value"] = to_string(t.value(id));
    r["conditioning"] = t.conditioning().test(id);
    rows.push_back(std::move(r));
  }
  Json j;
  j["rows"] = std::move(rows);
  return j;
}

inline Json suite_to_json(const std::vector<CheckResult>& results, uint64_t seed, int trials) {
  Json j;
  j["seed"] = seed;
  j["trials"] = trials;
  Json checks = Json::array();
  bool all = true;
  for (const auto& r : results) {
    Json c;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["details"] = r.details;
    checks.push_back(std::move(c));
    all = all && r.pass;
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = all;
  return j;
}

}  // namespace crq
