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

/// \file engine.hpp
/// Model computation. The oblivious chase of the crisp instance yields the
/// ground rules; one LP variable per chase atom, one constraint per ground
/// rule. An optimum of the plain LP is the unique minimal K-fuzzy model; for
/// programs with existential rules, optima of the weighted LP (null atoms
/// weigh 0, matching head atoms are summed) are preferred models.

#pragma once

#include "mvlog/chase.hpp"
#include "mvlog/core.hpp"
#include "mvlog/lp.hpp"
#include "mvlog/semantics.hpp"
#include "mvlog/termination.hpp"

#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mvlog {

/// The chase stopped at its step limit; any model built on it is unsound.
struct TruncatedChase : Error {
  using Error::Error;
};

/// The program has existential rules, fails the weak-acyclicity test, and
/// no chase step limit was supplied.
struct ChaseLimitRequired : Error {
  using Error::Error;
};

/// The consequence-operator iteration did not converge within its bound.
struct IterationLimit : Error {
  using Error::Error;
};

struct EngineOptions {
  /// Fix atoms classically entailed by the certain facts to 1 (K = 1 only).
  bool fast_path = true;
  std::optional<std::size_t> max_chase_steps;
};

enum class ModelKind { Minimal, Preferred };
enum class Outcome { Model, Unsatisfiable, NoObliviousBaseModel };
enum class AtomSource { Given, Derived, Certain };

inline const char* to_string(ModelKind k) { return k == ModelKind::Minimal ? "minimal" : "preferred"; }
inline const char* to_string(AtomSource s) {
  switch (s) {
    case AtomSource::Given: return "given";
    case AtomSource::Derived: return "derived";
    case AtomSource::Certain: return "certain";
  }
  return "?";
}
inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Model: return "ok";
    case Outcome::Unsatisfiable: return "unsatisfiable";
    case Outcome::NoObliviousBaseModel: return "no_oblivious_base_model";
  }
  return "?";
}

struct GroundModel {
  TruthAssignment assignment;
  ModelKind kind = ModelKind::Minimal;
  TruthDegree K = TruthDegree::one();
  /// Atoms fixed to 1 by the certain-knowledge fast path.
  std::set<GroundAtom> certain_atoms;
  std::size_t gamma_size = 0;
  std::size_t variable_count = 0;
};

struct RunStats {
  std::size_t olim_size = 0;
  std::size_t gamma_size = 0;
  std::size_t chase_steps = 0;
  std::size_t nulls = 0;
  std::size_t lp_variables = 0;
  std::size_t lp_constraints = 0;
  std::size_t pivots = 0;
};

struct ModelResult {
  Outcome outcome = Outcome::Unsatisfiable;
  std::optional<GroundModel> model;
  RunStats stats;

  bool has_model() const { return outcome == Outcome::Model; }
};

struct QueryResult {
  GroundAtom atom;
  TruthDegree threshold;
  bool entailed = false;
  TruthDegree degree_in_model;
  /// Answered against one preferred model rather than all models.
  bool model_relative = false;
};

/// An LP over the chase atoms together with the atom of every variable.
struct GroundLp {
  lp::LinearProgram program;
  std::vector<GroundAtom> atoms;
  /// Tie-break objective (sum of null-atom variables); empty for plain Opt_K.
  lp::LinearForm secondary;
};

namespace detail {

inline std::string rule_label(const GroundRule& g) { return "r" + std::to_string(g.origin_rule_id) + ": " + g.str(); }

inline GroundLp lp_skeleton(const Instance& instance, const ChaseResult& chase, const std::set<GroundAtom>& certain) {
  if (chase.truncated) throw TruncatedChase("chase stopped after " + std::to_string(chase.steps) + " applications");
  GroundLp out;
  for (const auto& atom : chase.olim.atoms()) {
    auto var = out.program.add_variable(atom.str());
    out.atoms.push_back(atom);
    if (auto d = instance.database.get(atom))
      out.program.fix(var, d->value());
    else if (certain.contains(atom))
      out.program.fix(var, Rational(1));
  }
  return out;
}

/// sum(1 - x_body) + head_part >= K, moved to  head_part - sum x_body >= K - |body|
inline lp::LinearForm body_part(const ChaseResult& chase, const GroundRule& g) {
  lp::LinearForm form;
  for (const auto& b : g.body) form.add(chase.olim_index(b), Rational(-1));
  return form;
}

}  // namespace detail

/// Opt_K: minimise the sum of all atom variables subject to one
/// satisfaction constraint per ground rule, database atoms fixed to tau and
/// all variables in [0,1]. Atoms in `certain` are fixed to 1 and rules with
/// a certain head are dropped.
inline GroundLp build_optk(const Instance& instance, const ChaseResult& chase,
                           const std::set<GroundAtom>& certain = {}) {
  if (instance.program.has_existential_rules())
    throw std::invalid_argument("Opt_K requires a program without existential rules");
  GroundLp out = detail::lp_skeleton(instance, chase, certain);
  const Rational& K = instance.K.value();
  for (const auto& g : chase.gamma) {
    if (certain.contains(g.head)) continue;
    auto form = detail::body_part(chase, g);
    form.add(chase.olim_index(g.head), Rational(1));
    out.program.add_constraint(std::move(form), K - Rational(static_cast<long>(g.body.size())),
                               detail::rule_label(g));
  }
  lp::LinearForm objective;
  for (std::size_t v = 0; v < out.atoms.size(); ++v) objective.add(v, Rational(1));
  out.program.set_objective(std::move(objective));
  return out;
}

/// eOpt_K: as Opt_K, but the head part of a grounded existential rule is the
/// sum over all chase atoms matching its head pattern, and only null-free
/// atoms over the active domain carry objective weight.
inline GroundLp build_eoptk(const Instance& instance, const ChaseResult& chase) {
  GroundLp out = detail::lp_skeleton(instance, chase, {});
  const Rational& K = instance.K.value();
  for (const auto& g : chase.gamma) {
    auto form = detail::body_part(chase, g);
    if (g.is_existential()) {
      for (auto idx : matching_atoms(chase.olim, g)) form.add(idx, Rational(1));
    } else {
      form.add(chase.olim_index(g.head), Rational(1));
    }
    out.program.add_constraint(std::move(form), K - Rational(static_cast<long>(g.body.size())),
                               detail::rule_label(g));
  }
  auto adom = active_domain(instance);
  lp::LinearForm objective;
  for (std::size_t v = 0; v < out.atoms.size(); ++v) {
    if (is_active_atom(out.atoms[v], adom))
      objective.add(v, Rational(1));
    else
      out.secondary.add(v, Rational(1));
  }
  out.program.set_objective(std::move(objective));
  return out;
}

/// Classical closure of the certain facts (tau = 1) under the crisp program.
inline std::set<GroundAtom> certain_closure(const Instance& instance) {
  if (instance.program.has_existential_rules())
    throw std::invalid_argument("the certain-knowledge closure is defined for programs without existential rules");
  return oblivious_chase(crispify(instance.program), certain_database(instance.database)).olim_set();
}

namespace detail {

inline TruthAssignment assignment_from(const GroundLp& glp, const lp::Solution& s) {
  TruthAssignment nu;
  for (std::size_t v = 0; v < glp.atoms.size(); ++v) nu.set(glp.atoms[v], TruthDegree(s.values[v]));
  return nu;
}

inline void fill_stats(RunStats& stats, const ChaseResult& chase, const GroundLp& glp) {
  stats.olim_size = chase.olim.size();
  stats.gamma_size = chase.gamma.size();
  stats.chase_steps = chase.steps;
  stats.nulls = chase.registry.null_count();
  stats.lp_variables = glp.program.variable_count();
  stats.lp_constraints = glp.program.constraints().size();
}

}  // namespace detail

/// The unique minimal K-fuzzy model of an instance without existential
/// rules, or Unsatisfiable.
inline ModelResult minimal_model(const Instance& instance, const EngineOptions& options = {}) {
  if (instance.program.has_existential_rules())
    throw std::invalid_argument("minimal models are defined for programs without existential rules");
  ModelResult result;
  std::set<GroundAtom> certain;
  if (options.fast_path && instance.K.is_one()) {
    certain = certain_closure(instance);
    for (const auto& atom : certain)
      if (auto d = instance.database.get(atom); d && !d->is_one()) return result;  // must be 1 in every model
  }
  auto chase = oblivious_chase(crispify(instance.program), crisp_database(instance.database));
  if (chase.truncated) throw std::logic_error("Datalog chase truncated");
  auto glp = build_optk(instance, chase, certain);
  detail::fill_stats(result.stats, chase, glp);
  auto solution = lp::solve(glp.program);
  result.stats.pivots = solution.pivots;
  if (solution.status == lp::SolveStatus::Unbounded) throw std::logic_error("Opt_K reported unbounded");
  if (!solution.optimal()) return result;

  GroundModel model;
  model.assignment = detail::assignment_from(glp, solution);
  model.kind = ModelKind::Minimal;
  model.K = instance.K;
  model.certain_atoms = std::move(certain);
  model.gamma_size = chase.gamma.size();
  model.variable_count = glp.program.variable_count();
  result.outcome = Outcome::Model;
  result.model = std::move(model);
  return result;
}

/// Runs the chase for an instance that may contain existential rules,
/// enforcing the termination policy: a step limit is mandatory unless the
/// variable expansion is weakly acyclic.
inline ChaseResult guarded_chase(const Instance& instance, const EngineOptions& options) {
  if (instance.program.has_existential_rules() && !options.max_chase_steps) {
    auto report = is_weakly_acyclic_ve(instance.program);
    if (!report.weakly_acyclic)
      throw ChaseLimitRequired("the variable expansion of the program is not weakly acyclic; "
                               "supply a chase step limit");
  }
  auto chase = oblivious_chase(crispify(instance.program), crisp_database(instance.database), options.max_chase_steps);
  if (chase.truncated)
    throw TruncatedChase("chase step limit of " + std::to_string(*options.max_chase_steps) + " reached");
  return chase;
}

/// A preferred K-fuzzy model (the lexicographic optimum of eOpt_K with null
/// atoms minimised second), or NoObliviousBaseModel when eOpt_K is
/// infeasible. Instances without existential rules get their minimal model.
inline ModelResult preferred_model(const Instance& instance, const EngineOptions& options = {}) {
  if (!instance.program.has_existential_rules()) return minimal_model(instance, options);
  ModelResult result;
  auto chase = guarded_chase(instance, options);
  auto glp = build_eoptk(instance, chase);
  detail::fill_stats(result.stats, chase, glp);
  auto solution = lp::lexicographic_solve(glp.program, glp.secondary);
  result.stats.pivots = solution.pivots;
  if (solution.status == lp::SolveStatus::Unbounded) throw std::logic_error("eOpt_K reported unbounded");
  if (!solution.optimal()) {
    result.outcome = Outcome::NoObliviousBaseModel;
    return result;
  }
  GroundModel model;
  model.assignment = detail::assignment_from(glp, solution);
  model.kind = ModelKind::Preferred;
  model.K = instance.K;
  model.gamma_size = chase.gamma.size();
  model.variable_count = glp.program.variable_count();
  result.outcome = Outcome::Model;
  result.model = std::move(model);
  return result;
}

/// Minimal model for Datalog programs, preferred model otherwise.
inline ModelResult compute_model(const Instance& instance, const EngineOptions& options = {}) {
  return instance.program.has_existential_rules() ? preferred_model(instance, options)
                                                  : minimal_model(instance, options);
}

inline AtomSource source_of(const GroundModel& model, const Instance& instance, const GroundAtom& atom) {
  if (instance.database.contains(atom)) return AtomSource::Given;
  if (model.certain_atoms.contains(atom)) return AtomSource::Certain;
  return AtomSource::Derived;
}

inline QueryResult answer_query(const Instance& instance, const ModelResult& result, const GroundAtom& atom,
                                const TruthDegree& c) {
  if (!result.has_model()) throw std::invalid_argument("query against an instance without a model");
  QueryResult q;
  q.atom = atom;
  q.threshold = c;
  q.degree_in_model = result.model->assignment.degree(atom);
  q.entailed = q.degree_in_model >= c;
  q.model_relative = instance.program.has_existential_rules();
  return q;
}

/// K-Truth: is atom true to at least c in every K-fuzzy model? Decided on the
/// minimal model. Returns nullopt when the instance has no model.
inline std::optional<QueryResult> k_truth(const Instance& instance, const GroundAtom& atom, const TruthDegree& c,
                                          const EngineOptions& options = {}) {
  auto result = compute_model(instance, options);
  if (!result.has_model()) return std::nullopt;
  return answer_query(instance, result, atom, c);
}

/// Computes the model of one instance once and answers queries against it.
class Reasoner {
 public:
  Reasoner(Instance instance, EngineOptions options = {})
      : instance_(std::move(instance)), options_(options), result_(compute_model(instance_, options_)) {}

  const Instance& instance() const { return instance_; }
  const ModelResult& result() const { return result_; }
  std::optional<QueryResult> query(const GroundAtom& atom, const TruthDegree& c) const {
    if (!result_.has_model()) return std::nullopt;
    return answer_query(instance_, result_, atom, c);
  }

 private:
  Instance instance_;
  EngineOptions options_;
  ModelResult result_;
};

/// Least fixed point of  T(nu)(G) = max(tau(G), max over rules with head G of
/// body(nu) - 1 + K), iterated from tau over the chase's ground rules.
/// Independent of the LP; used to cross-check minimal models. Returns nullopt
/// when the fixed point exceeds tau on a database atom (unsatisfiable).
inline std::optional<TruthAssignment> fixpoint_minimal_model(const Instance& instance,
                                                             std::optional<std::size_t> max_rounds = std::nullopt) {
  if (instance.program.has_existential_rules())
    throw std::invalid_argument("the fixpoint oracle handles programs without existential rules");
  auto chase = oblivious_chase(crispify(instance.program), crisp_database(instance.database));
  const std::size_t bound = max_rounds.value_or(chase.olim.size() * chase.gamma.size() + 1);

  TruthAssignment nu;
  for (const auto& [atom, d] : instance.database.entries()) nu.set(atom, d);
  const Rational offset = instance.K.value() - 1;
  bool changed = true;
  std::size_t rounds = 0;
  while (changed) {
    if (rounds++ > bound) throw IterationLimit("no fixed point after " + std::to_string(bound) + " rounds");
    changed = false;
    for (const auto& g : chase.gamma) {
      Rational derived = body_truth(nu, g.body).value() + offset;
      if (derived > nu.degree(g.head).value()) {
        nu.set(g.head, TruthDegree(derived));
        changed = true;
      }
    }
  }
  for (const auto& [atom, d] : instance.database.entries())
    if (nu.degree(atom) != d) return std::nullopt;
  return nu;
}

struct Violation {
  enum class Kind { Rule, Database, ObliviousBase } kind;
  std::string message;
  int rule_id = 0;
};

struct VerificationReport {
  bool rules_ok = true;
  bool database_ok = true;
  bool base_ok = true;
  std::vector<Violation> violations;

  bool ok() const { return rules_ok && database_ok && base_ok; }
};

/// Checks that `nu` K-satisfies every grounding of every rule (groundings
/// with a false body atom hold trivially, so it suffices to ground over the
/// support of nu; this covers every rule in the chase's ground set), agrees
/// with tau, and is zero outside the chase limit.
inline VerificationReport verify_model(const Instance& instance, const ChaseResult& chase, const TruthAssignment& nu) {
  VerificationReport report;
  AtomStore support;
  for (const auto& [atom, d] : nu.support()) support.insert(atom);

  // Placeholder nulls for existential positions; ids never produced by a chase.
  const std::uint32_t wildcard_base = std::numeric_limits<std::uint32_t>::max() - 1024;
  for (const auto& rule : instance.program.rules()) {
    for (const auto& h : enumerate_homomorphisms(rule, support)) {
      GroundRule g;
      g.origin_rule_id = rule.id;
      for (const auto& b : rule.body) g.body.push_back(ground(h, b));
      Substitution extended = h;
      std::uint32_t next = wildcard_base;
      for (const auto& y : rule.existential_vars) {
        extended.emplace(y, Term::null(next));
        g.existential_nulls.push_back(next++);
      }
      g.head = ground(extended, rule.head);
      if (!k_satisfies(nu, g, instance.K)) {
        report.rules_ok = false;
        report.violations.push_back({Violation::Kind::Rule,
                                     "rule " + std::to_string(rule.id) + " violated by " + g.str() + " (gap " +
                                         to_string(rule_gap(nu, g, instance.K)) + ")",
                                     rule.id});
      }
    }
  }
  for (const auto& [atom, d] : instance.database.entries()) {
    if (nu.degree(atom) != d) {
      report.database_ok = false;
      report.violations.push_back({Violation::Kind::Database,
                                   atom.str() + " has degree " + to_string(nu.degree(atom)) + " but the database says " +
                                       to_string(d),
                                   0});
    }
  }
  for (const auto& [atom, d] : nu.support()) {
    if (!chase.olim.contains(atom)) {
      report.base_ok = false;
      report.violations.push_back({Violation::Kind::ObliviousBase, atom.str() + " is true but not in the chase limit", 0});
    }
  }
  return report;
}

}  // namespace mvlog
