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

/// \file semantics.hpp
/// Lukasiewicz connectives over exact degrees, K-satisfaction of ground
/// rules, and the syntactic transformations between fuzzy and crisp views
/// of an instance.

#pragma once

#include "mvlog/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mvlog {

// {{{ connectives

/// a (x) b = max(0, a + b - 1)
inline Rational luk_and(const Rational& a, const Rational& b) {
  Rational r = a + b - 1;
  return sgn(r) < 0 ? Rational(0) : r;
}

/// a (+) b = min(1, a + b)
inline Rational luk_or(const Rational& a, const Rational& b) {
  Rational r = a + b;
  return r > 1 ? Rational(1) : r;
}

inline Rational luk_not(const Rational& a) { return 1 - a; }

/// a -> b = min(1, 1 - a + b)
inline Rational luk_implies(const Rational& a, const Rational& b) {
  Rational r = 1 - a + b;
  return r > 1 ? Rational(1) : r;
}

// }}}

/// True iff `candidate` is obtained from `pattern` by replacing each null in
/// `nulls` with one term (consistently across repeated occurrences); every
/// other position must agree exactly.
inline bool matches(const GroundAtom& candidate, const GroundAtom& pattern,
                    const std::vector<std::uint32_t>& nulls) {
  if (candidate.predicate() != pattern.predicate() || candidate.arity() != pattern.arity()) return false;
  std::unordered_map<std::uint32_t, const Term*> binding;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    const Term& p = pattern.args()[i];
    const Term& c = candidate.args()[i];
    if (p.is_null() && std::find(nulls.begin(), nulls.end(), p.null_id()) != nulls.end()) {
      auto [it, inserted] = binding.emplace(p.null_id(), &c);
      if (!inserted && *it->second != c) return false;
    } else if (p != c) {
      return false;
    }
  }
  return true;
}

/// Truth of the Lukasiewicz conjunction of `body`:
/// max(0, sum of degrees - (|body| - 1)).
inline TruthDegree body_truth(const TruthAssignment& nu, const std::vector<GroundAtom>& body) {
  Rational sum = 0;
  for (const auto& atom : body) sum += nu.degree(atom).value();
  Rational r = sum - Rational(static_cast<long>(body.size()) - 1);
  return sgn(r) < 0 ? TruthDegree::zero() : TruthDegree(r);
}

/// Truth of the head of a ground rule. For groundings of existential rules
/// this is the strong existential: min(1, sum over support atoms matching
/// the head pattern).
inline TruthDegree head_truth(const TruthAssignment& nu, const GroundRule& gamma) {
  if (!gamma.is_existential()) return nu.degree(gamma.head);
  Rational sum = 0;
  const auto& support = nu.support();
  for (auto it = support.lower_bound(GroundAtom(gamma.head.predicate(), {}));
       it != support.end() && it->first.predicate() == gamma.head.predicate(); ++it)
    if (matches(it->first, gamma.head, gamma.existential_nulls)) sum += it->second.value();
  return TruthDegree(sum > 1 ? Rational(1) : sum);
}

/// nu(head) - (nu(body) - 1 + K). Non-negative iff the rule is K-satisfied;
/// zero iff it is tight.
inline Rational rule_gap(const TruthAssignment& nu, const GroundRule& gamma, const TruthDegree& K) {
  return head_truth(nu, gamma).value() - (body_truth(nu, gamma.body).value() - 1 + K.value());
}

inline bool k_satisfies(const TruthAssignment& nu, const GroundRule& gamma, const TruthDegree& K) {
  return luk_implies(body_truth(nu, gamma.body).value(), head_truth(nu, gamma).value()) >= K.value();
}

/// The classical reading of an MV program. Connectives are structural, so
/// the rule set is unchanged; downstream consumers evaluate it two-valued.
inline Program crispify(const Program& program) { return program; }

/// D_tau: the atoms on which tau is defined (all with positive degree).
inline std::set<GroundAtom> crisp_database(const FuzzyDatabase& tau) {
  std::set<GroundAtom> out;
  for (const auto& [atom, degree] : tau.entries())
    if (!degree.is_zero()) out.insert(atom);
  return out;
}

/// D^1: the atoms tau marks as certain.
inline std::set<GroundAtom> certain_database(const FuzzyDatabase& tau) {
  std::set<GroundAtom> out;
  for (const auto& [atom, degree] : tau.entries())
    if (degree.is_one()) out.insert(atom);
  return out;
}

/// Constants mentioned in the program or in atoms defined by tau.
inline std::set<std::string> active_domain(const Instance& instance) {
  std::set<std::string> adom;
  auto collect = [&](const std::vector<Term>& args) {
    for (const auto& t : args)
      if (t.is_constant()) adom.insert(t.name());
  };
  for (const auto& rule : instance.program.rules()) {
    collect(rule.head.args);
    for (const auto& a : rule.body) collect(a.args);
  }
  for (const auto& [atom, d] : instance.database.entries()) collect(atom.args());
  return adom;
}

inline bool is_active_atom(const GroundAtom& atom, const std::set<std::string>& adom) {
  return std::all_of(atom.args().begin(), atom.args().end(),
                     [&](const Term& t) { return t.is_constant() && adom.contains(t.name()); });
}

/// The atoms of `universe` that are groundings over the active domain.
inline std::set<GroundAtom> active_atoms(const Instance& instance, const std::set<GroundAtom>& universe) {
  auto adom = active_domain(instance);
  std::set<GroundAtom> out;
  for (const auto& atom : universe)
    if (is_active_atom(atom, adom)) out.insert(atom);
  return out;
}

/// Picks `base + suffix`, `base + suffix + "2"`, ... avoiding `taken`.
inline std::string fresh_name(const std::string& base, const std::string& suffix,
                              const std::set<std::string>& taken) {
  std::string candidate = base + suffix;
  for (int i = 2; taken.contains(candidate); ++i) {
    if (i > 1000000) throw Error("cannot generate a fresh name for " + base);
    candidate = base + suffix + std::to_string(i);
  }
  return candidate;
}

/// Result of the relaxation rewriting together with the renaming applied.
struct RelaxedInstance {
  Instance instance;
  /// relaxed predicate -> original predicate
  std::map<std::string, std::string> original_of;
};

/// Rewrites an instance so that its K-fuzzy models correspond to models that
/// may exceed tau on defined atoms: for every predicate R of tau a fresh R'
/// is introduced, the rule R(x) -> R'(x) added, and R replaced by R'
/// everywhere in the program.
inline RelaxedInstance relax_rewrite(const Instance& instance) {
  std::set<std::string> taken;
  for (const auto& [pred, arity] : instance.program.signature()) taken.insert(pred);
  std::map<std::string, std::size_t> db_preds;
  for (const auto& [atom, d] : instance.database.entries()) {
    db_preds.emplace(atom.predicate(), atom.arity());
    taken.insert(atom.predicate());
  }

  std::map<std::string, std::string> relaxed_of;
  RelaxedInstance out;
  for (const auto& [pred, arity] : db_preds) {
    std::string name = fresh_name(pred, "_relaxed", taken);
    taken.insert(name);
    relaxed_of.emplace(pred, name);
    out.original_of.emplace(name, pred);
  }

  auto rename = [&](Atom atom) {
    if (auto it = relaxed_of.find(atom.predicate); it != relaxed_of.end()) atom.predicate = it->second;
    return atom;
  };

  Program program;
  for (const auto& rule : instance.program.rules()) {
    Rule r;
    r.id = rule.id;
    r.head = rename(rule.head);
    for (const auto& a : rule.body) r.body.push_back(rename(a));
    program.add_rule(std::move(r));
  }
  for (const auto& [pred, arity] : db_preds) {
    Atom from{pred, {}};
    for (std::size_t i = 0; i < arity; ++i) from.args.push_back(Term::variable("X" + std::to_string(i + 1)));
    Rule r;
    r.body.push_back(from);
    r.head = Atom{relaxed_of.at(pred), from.args};
    program.add_rule(std::move(r));
  }
  out.instance = Instance(std::move(program), instance.database, instance.K);
  return out;
}

}  // namespace mvlog
