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

/// \file report.hpp
/// JSON and text renderings of engine results. Degrees are always reduced
/// fraction strings; key order is fixed, so output is byte-stable.

#pragma once

#include "mvlog/engine.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <string>

namespace mvlog::report {

using Json = nlohmann::ordered_json;

/// One line of a presented model.
struct ModelEntry {
  GroundAtom atom;
  TruthDegree degree;
  AtomSource source;
};

/// The model as shown to the user. Under the relaxation rewriting, relaxed
/// predicates are renamed back to their originals and replace them.
inline std::vector<ModelEntry> present(const GroundModel& model, const Instance& user_instance,
                                       const std::map<std::string, std::string>& original_of = {}) {
  std::map<GroundAtom, ModelEntry> out;
  for (const auto& [atom, degree] : model.assignment.support()) {
    if (auto it = original_of.find(atom.predicate()); it != original_of.end()) {
      GroundAtom renamed(it->second, atom.args());
      auto given = user_instance.database.get(renamed);
      AtomSource src = given && *given == degree ? AtomSource::Given : AtomSource::Derived;
      out.insert_or_assign(renamed, ModelEntry{renamed, degree, src});
      continue;
    }
    bool shadowed = false;
    for (const auto& [relaxed, original] : original_of)
      if (original == atom.predicate()) shadowed = true;
    if (shadowed) continue;
    AtomSource src = user_instance.database.contains(atom) ? AtomSource::Given
                     : model.certain_atoms.contains(atom)  ? AtomSource::Certain
                                                           : AtomSource::Derived;
    out.emplace(atom, ModelEntry{atom, degree, src});
  }
  std::vector<ModelEntry> entries;
  for (auto& [atom, e] : out) entries.push_back(std::move(e));
  return entries;
}

inline Json model_json(const ModelResult& result, const std::vector<ModelEntry>& entries, const TruthDegree& K,
                       const std::string& mode) {
  Json j;
  j["status"] = to_string(result.outcome);
  j["K"] = to_string(K);
  j["mode"] = mode;
  if (result.has_model()) {
    j["kind"] = to_string(result.model->kind);
    Json model = Json::array();
    for (const auto& e : entries)
      model.push_back(Json{{"atom", e.atom.str()}, {"degree", to_string(e.degree)}, {"source", to_string(e.source)}});
    j["model"] = std::move(model);
  }
  return j;
}

inline std::string model_text(const ModelResult& result, const std::vector<ModelEntry>& entries) {
  std::ostringstream out;
  if (!result.has_model()) {
    out << to_string(result.outcome) << "\n";
    return out.str();
  }
  out << "% " << to_string(result.model->kind) << " model\n";
  for (const auto& e : entries) out << e.atom.str() << " = " << to_string(e.degree) << "  (" << to_string(e.source) << ")\n";
  return out.str();
}

inline Json query_json(const GroundAtom& atom, const TruthDegree& threshold, bool entailed, const TruthDegree& degree,
                       bool model_relative) {
  return Json{{"atom", atom.str()},
              {"threshold", to_string(threshold)},
              {"entailed", entailed},
              {"degree", to_string(degree)},
              {"model_relative", model_relative}};
}

inline Json stats_json(const RunStats& s) {
  return Json{{"olim", s.olim_size},         {"gamma", s.gamma_size},       {"chase_steps", s.chase_steps},
              {"nulls", s.nulls},            {"lp_variables", s.lp_variables}, {"lp_constraints", s.lp_constraints},
              {"pivots", s.pivots}};
}

inline Json witness_json(const AcyclicityReport& report) {
  Json w = Json::array();
  for (const auto& v : report.witness) w.push_back(v.str());
  return w;
}

inline Json form_json(const lp::LinearForm& form, const std::vector<GroundAtom>& atoms) {
  Json terms = Json::array();
  for (const auto& [v, c] : form.terms()) terms.push_back(Json{{"atom", atoms[v].str()}, {"coef", to_string(c)}});
  return terms;
}

/// Chase limit, ground rules, null registry and the LP built over them.
inline Json ground_json(const ChaseResult& chase, const GroundLp& glp, bool existential) {
  Json j;
  Json olim = Json::array();
  for (const auto& a : chase.olim_set()) olim.push_back(a.str());
  j["olim"] = std::move(olim);

  Json gamma = Json::array();
  for (const auto& g : chase.gamma) {
    Json body = Json::array();
    for (const auto& b : g.body) body.push_back(b.str());
    Json nulls = Json::array();
    for (auto id : g.existential_nulls) nulls.push_back(Term::null(id).str());
    gamma.push_back(Json{{"rule", g.origin_rule_id}, {"body", std::move(body)}, {"head", g.head.str()},
                         {"existential_nulls", std::move(nulls)}});
  }
  j["gamma"] = std::move(gamma);

  Json registry = Json::array();
  for (const auto& e : chase.registry.entries()) {
    Json hom = Json::object();
    for (const auto& [var, t] : e.homomorphism) hom[var] = t.str();
    Json nulls = Json::object();
    for (const auto& [var, id] : e.nulls) nulls[var] = Term::null(id).str();
    registry.push_back(Json{{"rule", e.rule_id}, {"homomorphism", std::move(hom)}, {"nulls", std::move(nulls)}});
  }
  j["nulls"] = std::move(registry);

  const auto& model = glp.program;
  Json lpj;
  lpj["kind"] = existential ? "eOpt_K" : "Opt_K";
  Json vars = Json::array();
  for (std::size_t v = 0; v < model.variable_count(); ++v) {
    const auto& var = model.variables()[v];
    auto it = model.objective().terms().find(v);
    Json entry{{"atom", glp.atoms[v].str()},
               {"lower", to_string(var.lower)},
               {"upper", to_string(var.upper)},
               {"fixed", var.fixed ? Json(to_string(*var.fixed)) : Json(nullptr)},
               {"weight", it == model.objective().terms().end() ? std::string("0") : to_string(it->second)}};
    vars.push_back(std::move(entry));
  }
  lpj["variables"] = std::move(vars);
  Json cons = Json::array();
  for (const auto& c : model.constraints())
    cons.push_back(Json{{"label", c.label}, {"terms", form_json(c.form, glp.atoms)}, {"rhs", to_string(c.rhs)}});
  lpj["constraints"] = std::move(cons);
  lpj["secondary"] = form_json(glp.secondary, glp.atoms);
  j["lp"] = std::move(lpj);
  return j;
}

}  // namespace mvlog::report
