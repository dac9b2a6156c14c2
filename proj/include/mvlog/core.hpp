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

/// \file core.hpp
/// Syntax and interpretation types shared by every other component: terms,
/// atoms, rules, programs, fuzzy databases and truth assignments.

#pragma once

#include "mvlog/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvlog {

// {{{ errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A degree outside its admissible range, or a conflicting database entry.
struct DomainError : Error {
  using Error::Error;
};

/// A predicate used with two different arities.
struct ArityError : Error {
  using Error::Error;
};

/// A head variable that does not occur in the body (strict mode only).
struct SafetyError : Error {
  using Error::Error;
};

// }}}

// {{{ terms and atoms

enum class TermKind : std::uint8_t { Variable, Constant, Null };

/// A variable, a constant or a labelled null. Nulls are identified by a
/// positive id that is unique within one chase run.
class Term {
 public:
  static Term variable(std::string name) { return Term(TermKind::Variable, std::move(name), 0); }
  static Term constant(std::string name) { return Term(TermKind::Constant, std::move(name), 0); }
  static Term null(std::uint32_t id) { return Term(TermKind::Null, {}, id); }

  TermKind kind() const { return kind_; }
  bool is_variable() const { return kind_ == TermKind::Variable; }
  bool is_constant() const { return kind_ == TermKind::Constant; }
  bool is_null() const { return kind_ == TermKind::Null; }
  const std::string& name() const { return name_; }
  std::uint32_t null_id() const { return null_id_; }

  std::string str() const { return is_null() ? "_n" + std::to_string(null_id_) : name_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.name_.compare(b.name_); c != 0) return c <=> 0;
    return a.null_id_ <=> b.null_id_;
  }

 private:
  Term(TermKind kind, std::string name, std::uint32_t id)
      : kind_(kind), name_(std::move(name)), null_id_(id) {}

  TermKind kind_ = TermKind::Constant;
  std::string name_;
  std::uint32_t null_id_ = 0;
};

inline std::string join_args(const std::vector<Term>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].str();
  }
  return out;
}

/// A relational atom whose arguments may contain variables.
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
  }
  std::string str() const {
    return args.empty() ? predicate : predicate + "(" + join_args(args) + ")";
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// An atom without variables (constants and labelled nulls only).
class GroundAtom {
 public:
  GroundAtom() = default;
  GroundAtom(std::string predicate, std::vector<Term> args)
      : predicate_(std::move(predicate)), args_(std::move(args)) {
    for (const auto& t : args_)
      if (t.is_variable())
        throw std::invalid_argument("ground atom " + predicate_ + " contains variable " + t.name());
  }
  explicit GroundAtom(const Atom& atom) : GroundAtom(atom.predicate, atom.args) {}

  const std::string& predicate() const { return predicate_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }
  bool has_nulls() const {
    return std::any_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_null(); });
  }
  Atom as_atom() const { return Atom{predicate_, args_}; }
  std::string str() const {
    return args_.empty() ? predicate_ : predicate_ + "(" + join_args(args_) + ")";
  }

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;

 private:
  std::string predicate_;
  std::vector<Term> args_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const {
    std::size_t h = std::hash<std::string>{}(t.name());
    return h ^ (std::hash<std::uint64_t>{}((std::uint64_t(t.null_id()) << 2) | std::uint64_t(t.kind())) +
                0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

struct GroundAtomHash {
  std::size_t operator()(const GroundAtom& a) const {
    std::size_t h = std::hash<std::string>{}(a.predicate());
    for (const auto& t : a.args()) h ^= TermHash{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// }}}

// {{{ rules and programs

/// B1 (x) ... (x) Bn -> H. Head variables absent from the body are
/// existentially quantified.
struct Rule {
  int id = 0;
  std::vector<Atom> body;
  Atom head;
  std::set<std::string> existential_vars;

  bool is_existential() const { return !existential_vars.empty(); }

  /// Variables of the body, in order of first occurrence.
  std::vector<std::string> body_variables() const {
    std::vector<std::string> vars;
    for (const auto& atom : body)
      for (const auto& t : atom.args)
        if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name()) == vars.end())
          vars.push_back(t.name());
    return vars;
  }

  std::string str() const {
    std::string out = head.str() + " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) out += ", ";
      out += body[i].str();
    }
    return out + ".";
  }

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Computes the existential variables of a rule from its shape.
inline std::set<std::string> head_only_variables(const std::vector<Atom>& body, const Atom& head) {
  std::set<std::string> in_body;
  for (const auto& atom : body)
    for (const auto& t : atom.args)
      if (t.is_variable()) in_body.insert(t.name());
  std::set<std::string> out;
  for (const auto& t : head.args)
    if (t.is_variable() && !in_body.contains(t.name())) out.insert(t.name());
  return out;
}

/// A set of rules over a fixed signature (one arity per predicate).
class Program {
 public:
  /// Adds a rule; assigns the next free id when `rule.id` is already taken.
  /// Throws ArityError on signature conflicts and std::invalid_argument for
  /// empty bodies or labelled nulls.
  const Rule& add_rule(Rule rule) {
    if (rule.body.empty()) throw std::invalid_argument("rule with empty body: " + rule.head.str());
    auto check_atom = [&](const Atom& atom) {
      for (const auto& t : atom.args)
        if (t.is_null()) throw std::invalid_argument("labelled null in rule atom " + atom.str());
      declare(atom.predicate, atom.arity());
    };
    for (const auto& a : rule.body) check_atom(a);
    check_atom(rule.head);
    rule.existential_vars = head_only_variables(rule.body, rule.head);
    if (rule.id <= max_id_) rule.id = max_id_ + 1;
    max_id_ = rule.id;
    rules_.push_back(std::move(rule));
    return rules_.back();
  }

  /// Registers a predicate arity; throws ArityError on conflict.
  void declare(const std::string& predicate, std::size_t arity) {
    auto [it, inserted] = signature_.emplace(predicate, arity);
    if (!inserted && it->second != arity)
      throw ArityError("predicate " + predicate + " used with arity " + std::to_string(arity) +
                       " and " + std::to_string(it->second));
  }

  const std::vector<Rule>& rules() const { return rules_; }
  const std::map<std::string, std::size_t>& signature() const { return signature_; }
  bool empty() const { return rules_.empty(); }
  bool has_existential_rules() const {
    return std::any_of(rules_.begin(), rules_.end(), [](const Rule& r) { return r.is_existential(); });
  }
  const Rule* find_rule(int id) const {
    for (const auto& r : rules_)
      if (r.id == id) return &r;
    return nullptr;
  }

  friend bool operator==(const Program& a, const Program& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t> signature_;
  int max_id_ = 0;
};

// }}}

// {{{ interpretations

/// The partial truth assignment tau: finitely many ground atoms with
/// degrees in (0,1]. Entries never contain labelled nulls.
class FuzzyDatabase {
 public:
  using Map = std::map<GroundAtom, TruthDegree>;

  /// Throws DomainError on a zero degree, a null-containing atom, or a
  /// conflicting re-definition. Identical re-definitions are accepted.
  void set(const GroundAtom& atom, const TruthDegree& degree) {
    if (degree.is_zero()) throw DomainError("fact " + atom.str() + " has degree 0; degrees must lie in (0,1]");
    if (atom.has_nulls()) throw DomainError("fact " + atom.str() + " contains a labelled null");
    auto [it, inserted] = entries_.emplace(atom, degree);
    if (!inserted && it->second != degree)
      throw DomainError("conflicting degrees for " + atom.str() + ": " + to_string(it->second) + " and " +
                        to_string(degree));
  }

  std::optional<TruthDegree> get(const GroundAtom& atom) const {
    auto it = entries_.find(atom);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const GroundAtom& atom) const { return entries_.contains(atom); }
  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const FuzzyDatabase&, const FuzzyDatabase&) = default;

 private:
  Map entries_;
};

/// A total truth assignment with finite support; off-support atoms are 0.
class TruthAssignment {
 public:
  using Map = std::map<GroundAtom, TruthDegree>;

  TruthDegree degree(const GroundAtom& atom) const {
    auto it = support_.find(atom);
    return it == support_.end() ? TruthDegree::zero() : it->second;
  }
  void set(const GroundAtom& atom, const TruthDegree& degree) {
    if (degree.is_zero())
      support_.erase(atom);
    else
      support_.insert_or_assign(atom, degree);
  }
  const Map& support() const { return support_; }

  /// Pointwise comparison over all ground atoms.
  bool leq(const TruthAssignment& other) const {
    for (const auto& [atom, d] : support_)
      if (d > other.degree(atom)) return false;
    return true;
  }

  static TruthAssignment pointwise_min(const TruthAssignment& a, const TruthAssignment& b) {
    TruthAssignment out;
    for (const auto& [atom, d] : a.support_) out.set(atom, std::min(d, b.degree(atom)));
    return out;
  }

  friend bool operator==(const TruthAssignment&, const TruthAssignment&) = default;

 private:
  Map support_;
};

/// A rule with every variable, existential ones included, substituted.
struct GroundRule {
  int origin_rule_id = 0;
  std::vector<GroundAtom> body;
  GroundAtom head;
  /// Nulls introduced for the existential variables of the origin rule.
  std::vector<std::uint32_t> existential_nulls;

  bool is_existential() const { return !existential_nulls.empty(); }
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) out += ", ";
      out += body[i].str();
    }
    return out + " -> " + head.str();
  }

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

/// A program, a fuzzy database and the satisfaction threshold K in (0,1].
struct Instance {
  Program program;
  FuzzyDatabase database;
  TruthDegree K = TruthDegree::one();

  Instance() = default;
  Instance(Program p, FuzzyDatabase db, TruthDegree k)
      : program(std::move(p)), database(std::move(db)), K(std::move(k)) {
    if (K.is_zero()) throw DomainError("K must lie in (0,1]");
  }
};

// }}}

}  // namespace mvlog
