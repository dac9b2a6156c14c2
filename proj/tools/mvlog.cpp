// Copyright 2026 The mvlog Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mvlog: command-line front end.
//
//   mvlog solve  FILE...            minimal (or preferred) model
//   mvlog query  ATOM FILE...       K-Truth for ATOM --at-least c
//   mvlog check  FILE...            weak acyclicity, satisfiability, sizes
//   mvlog ground FILE...            chase limit, ground rules, nulls, LP
//
// Exit codes: 0 ok / entailed, 1 not entailed, 2 unsatisfiable,
// 3 parse or input error, 4 chase limit required or reached,
// 5 no model with an oblivious base.

#include "mvlog/engine.hpp"
#include "mvlog/parser.hpp"
#include "mvlog/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mvlog;

enum Exit : int {
  kOk = 0,
  kNotEntailed = 1,
  kUnsatisfiable = 2,
  kInputError = 3,
  kChaseLimit = 4,
  kNoObliviousBase = 5,
};

struct RunConfig {
  std::vector<std::string> files;
  std::string K = "1";
  std::string mode = "strict";
  std::optional<std::size_t> max_chase_steps;
  bool no_fast_path = false;
  bool strict_safety = false;
  std::string format = "json";
};

struct Loaded {
  Instance user;             // as written
  Instance effective;        // after the optional relaxation rewriting
  std::map<std::string, std::string> original_of;
};

Loaded load(const RunConfig& cfg) {
  SourceUnit unit;
  ParseOptions popts;
  popts.strict = cfg.strict_safety;
  for (const auto& path : cfg.files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      parse_into(unit, buf.str(), popts);
    } catch (const Error& e) {
      throw Error(path + ":" + e.what());
    }
  }
  auto k = parse_rational(cfg.K);
  if (!k || sgn(*k) <= 0 || *k > 1) throw DomainError("--K must be a rational in (0,1], got " + cfg.K);
  Loaded out;
  out.user = Instance(std::move(unit.program), std::move(unit.database), TruthDegree(*k));
  if (cfg.mode == "relaxed") {
    auto relaxed = relax_rewrite(out.user);
    out.effective = std::move(relaxed.instance);
    out.original_of = std::move(relaxed.original_of);
  } else {
    out.effective = out.user;
  }
  return out;
}

EngineOptions engine_options(const RunConfig& cfg) {
  EngineOptions o;
  o.fast_path = !cfg.no_fast_path;
  o.max_chase_steps = cfg.max_chase_steps;
  return o;
}

int outcome_code(Outcome o) {
  switch (o) {
    case Outcome::Model: return kOk;
    case Outcome::Unsatisfiable: return kUnsatisfiable;
    case Outcome::NoObliviousBaseModel: return kNoObliviousBase;
  }
  return kUnsatisfiable;
}

void emit(const RunConfig& cfg, const report::Json& j, const std::string& text) {
  if (cfg.format == "text")
    std::cout << text;
  else
    std::cout << j.dump(2) << "\n";
}

int cmd_solve(const RunConfig& cfg) {
  auto loaded = load(cfg);
  auto result = compute_model(loaded.effective, engine_options(cfg));
  std::vector<report::ModelEntry> entries;
  if (result.has_model()) entries = report::present(*result.model, loaded.user, loaded.original_of);
  emit(cfg, report::model_json(result, entries, loaded.user.K, cfg.mode), report::model_text(result, entries));
  return outcome_code(result.outcome);
}

int cmd_query(const RunConfig& cfg, const std::string& atom_text, const std::string& threshold_text) {
  auto atom = parse_ground_atom(atom_text);
  auto c = parse_rational(threshold_text);
  if (!c || sgn(*c) < 0 || *c > 1) throw DomainError("--at-least must be a rational in [0,1], got " + threshold_text);
  auto loaded = load(cfg);
  auto result = compute_model(loaded.effective, engine_options(cfg));
  if (!result.has_model()) {
    report::Json j{{"atom", atom.str()}, {"threshold", to_string(*c)}, {"status", to_string(result.outcome)}};
    emit(cfg, j, std::string(to_string(result.outcome)) + "\n");
    return outcome_code(result.outcome);
  }
  TruthDegree degree;
  for (const auto& e : report::present(*result.model, loaded.user, loaded.original_of))
    if (e.atom == atom) degree = e.degree;
  TruthDegree threshold(*c);
  bool entailed = degree >= threshold;
  bool relative = loaded.effective.program.has_existential_rules();
  std::ostringstream text;
  text << atom.str() << (entailed ? " >= " : " < ") << to_string(threshold) << "  (degree " << to_string(degree)
       << (relative ? ", model-relative" : "") << ")\n";
  emit(cfg, report::query_json(atom, threshold, entailed, degree, relative), text.str());
  return entailed ? kOk : kNotEntailed;
}

int cmd_check(const RunConfig& cfg) {
  auto loaded = load(cfg);
  const auto& instance = loaded.effective;
  auto acyclic = is_weakly_acyclic_ve(instance.program);
  report::Json j;
  j["weakly_acyclic"] = acyclic.weakly_acyclic;
  j["witness"] = report::witness_json(acyclic);
  j["existential_rules"] = instance.program.has_existential_rules();
  std::ostringstream text;
  text << (acyclic.weakly_acyclic ? "weakly acyclic" : "not weakly acyclic");
  if (!acyclic.weakly_acyclic) {
    text << ", witness:";
    for (const auto& v : acyclic.witness) text << " " << v.str();
  }
  text << "\n";

  int code = kOk;
  try {
    auto result = compute_model(instance, engine_options(cfg));
    j["status"] = to_string(result.outcome);
    j["satisfiable"] = result.outcome == Outcome::Model;
    j["stats"] = report::stats_json(result.stats);
    text << "status: " << to_string(result.outcome) << "\n"
         << "olim: " << result.stats.olim_size << ", gamma: " << result.stats.gamma_size
         << ", lp: " << result.stats.lp_variables << " variables / " << result.stats.lp_constraints << " constraints\n";
    code = outcome_code(result.outcome);
  } catch (const ChaseLimitRequired& e) {
    j["status"] = "chase_limit_required";
    j["satisfiable"] = nullptr;
    text << "status: chase_limit_required (" << e.what() << ")\n";
    code = kChaseLimit;
  } catch (const TruncatedChase& e) {
    j["status"] = "chase_truncated";
    j["satisfiable"] = nullptr;
    text << "status: chase_truncated (" << e.what() << ")\n";
    code = kChaseLimit;
  }
  emit(cfg, j, text.str());
  return code;
}

int cmd_ground(const RunConfig& cfg) {
  auto loaded = load(cfg);
  const auto& instance = loaded.effective;
  auto chase = guarded_chase(instance, engine_options(cfg));
  bool existential = instance.program.has_existential_rules();
  auto glp = existential ? build_eoptk(instance, chase) : build_optk(instance, chase);
  std::ostringstream text;
  text << "% olim\n";
  for (const auto& a : chase.olim_set()) text << a.str() << "\n";
  text << "% ground rules\n";
  for (const auto& g : chase.gamma) text << "r" << g.origin_rule_id << ": " << g.str() << "\n";
  text << "% " << (existential ? "eOpt_K" : "Opt_K") << "\n" << glp.program.str();
  emit(cfg, report::ground_json(chase, glp, existential), text.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reasoning with MV-Datalog and MV-Datalog+- under Lukasiewicz semantics"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string atom_text, threshold_text = "1";
  std::size_t steps = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--K", cfg.K, "satisfaction threshold K in (0,1]");
    sub->add_option("--mode", cfg.mode, "strict: models agree with the database; relaxed: may exceed it")
        ->check(CLI::IsMember({"strict", "relaxed"}));
    sub->add_option("--max-chase-steps", steps, "bound on oblivious rule applications");
    sub->add_flag("--no-fast-path", cfg.no_fast_path, "disable the certain-knowledge shortcut");
    sub->add_flag("--strict-safety", cfg.strict_safety, "reject head-only variables instead of reading them as existential");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* solve = app.add_subcommand("solve", "compute the minimal or preferred model");
  common(solve);
  solve->add_option("files", cfg.files, "input .mvdl files")->required();
  auto* query = app.add_subcommand("query", "decide whether ATOM holds to at least the threshold");
  common(query);
  query->add_option("atom", atom_text, "ground atom, e.g. orca(i1)")->required();
  query->add_option("files", cfg.files, "input .mvdl files")->required();
  query->add_option("--at-least", threshold_text, "threshold c in [0,1]");
  auto* check = app.add_subcommand("check", "report weak acyclicity, satisfiability and sizes");
  common(check);
  check->add_option("files", cfg.files, "input .mvdl files")->required();
  auto* ground = app.add_subcommand("ground", "dump the chase, ground rules and LP");
  common(ground);
  ground->add_option("files", cfg.files, "input .mvdl files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  for (auto* sub : {solve, query, check, ground})
    if (sub->parsed() && sub->count("--max-chase-steps")) cfg.max_chase_steps = steps;

  try {
    if (solve->parsed()) return cmd_solve(cfg);
    if (query->parsed()) return cmd_query(cfg, atom_text, threshold_text);
    if (check->parsed()) return cmd_check(cfg);
    if (ground->parsed()) return cmd_ground(cfg);
  } catch (const ChaseLimitRequired& e) {
    std::cerr << "mvlog: " << e.what() << "\n";
    return kChaseLimit;
  } catch (const TruncatedChase& e) {
    std::cerr << "mvlog: " << e.what() << "\n";
    return kChaseLimit;
  } catch (const Error& e) {
    std::cerr << "mvlog: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "mvlog: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
