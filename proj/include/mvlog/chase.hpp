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

/// \file chase.hpp
/// Oblivious chase over the crisp program. Every (rule, body homomorphism)
/// pair is applied exactly once; existential head variables receive fresh
/// labelled nulls. The run yields the limit atom set, one ground rule per
/// applied pair, and the registry of introduced nulls.

#pragma once

#include "mvlog/core.hpp"
#include "mvlog/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mvlog {

/// Variable name -> term. Ordered, so homomorphisms compare lexicographically
/// by variable and then by term.
using Substitution = std::map<std::string, Term>;

inline Atom apply(const Substitution& s, const Atom& atom) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& t : atom.args) {
    if (t.is_variable()) {
      auto it = s.find(t.name());
      out.args.push_back(it == s.end() ? t : it->second);
    } else {
      out.args.push_back(t);
    }
  }
  return out;
}

inline GroundAtom ground(const Substitution& s, const Atom& atom) { return GroundAtom(apply(s, atom)); }

/// Append-only set of ground atoms with per-predicate and per-argument
/// indexes. Atoms keep their insertion position, which the chase uses to
/// split old and new atoms.
class AtomStore {
 public:
  using Index = std::uint32_t;

  bool insert(const GroundAtom& atom) {
    auto [it, inserted] = position_.emplace(atom, static_cast<Index>(atoms_.size()));
    if (!inserted) return false;
    Index idx = it->second;
    atoms_.push_back(atom);
    by_predicate_[atom.predicate()].push_back(idx);
    for (std::size_t i = 0; i < atom.arity(); ++i) by_argument_[ArgKey{atom.predicate(), i, atom.args()[i]}].push_back(idx);
    return true;
  }

  bool contains(const GroundAtom& atom) const { return position_.contains(atom); }
  Index index_of(const GroundAtom& atom) const {
    auto it = position_.find(atom);
    if (it == position_.end()) throw std::out_of_range("atom not in store: " + atom.str());
    return it->second;
  }
  std::size_t size() const { return atoms_.size(); }
  const GroundAtom& operator[](Index i) const { return atoms_[i]; }
  const std::vector<GroundAtom>& atoms() const { return atoms_; }

  const std::vector<Index>& with_predicate(const std::string& predicate) const {
    auto it = by_predicate_.find(predicate);
    return it == by_predicate_.end() ? empty_ : it->second;
  }
  const std::vector<Index>& with_argument(const std::string& predicate, std::size_t pos, const Term& t) const {
    auto it = by_argument_.find(ArgKey{predicate, pos, t});
    return it == by_argument_.end() ? empty_ : it->second;
  }

 private:
  struct ArgKey {
    std::string predicate;
    std::size_t position;
    Term term;
    friend bool operator==(const ArgKey&, const ArgKey&) = default;
  };
  struct ArgKeyHash {
    std::size_t operator()(const ArgKey& k) const {
      std::size_t h = std::hash<std::string>{}(k.predicate) ^ (k.position * 0x9e3779b97f4a7c15ULL);
      return h ^ (TermHash{}(k.term) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
  };

  std::vector<GroundAtom> atoms_;
  std::unordered_map<GroundAtom, Index, GroundAtomHash> position_;
  std::unordered_map<std::string, std::vector<Index>> by_predicate_;
  std::unordered_map<ArgKey, std::vector<Index>, ArgKeyHash> by_argument_;
  std::vector<Index> empty_;
};

namespace detail {

/// Extends `s` so that `pattern` maps onto `fact`; false on a clash.
inline bool unify(const Atom& pattern, const GroundAtom& fact, Substitution& s,
                  std::vector<std::string>& newly_bound) {
  if (pattern.arity() != fact.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    const Term& p = pattern.args[i];
    const Term& f = fact.args()[i];
    if (p.is_variable()) {
      auto [it, inserted] = s.emplace(p.name(), f);
      if (inserted)
        newly_bound.push_back(p.name());
      else if (it->second != f)
        return false;
    } else if (p != f) {
      return false;
    }
  }
  return true;
}

/// Atom-index window for one body position during semi-naive evaluation.
struct Window {
  AtomStore::Index begin;
  AtomStore::Index end;
};

/// Enumerates homomorphisms of `body` into `store`, where body atom j may
/// only use atoms with index inside windows[j].
template <class Visit>
void join(const std::vector<Atom>& body, const AtomStore& store, const std::vector<Window>& windows,
          std::size_t j, Substitution& s, Visit&& visit) {
  if (j == body.size()) {
    visit(s);
    return;
  }
  const Atom& pattern = body[j];
  // Use the most selective bound argument, if any.
  const std::vector<AtomStore::Index>* candidates = &store.with_predicate(pattern.predicate);
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    const Term& t = pattern.args[i];
    const Term* bound = nullptr;
    if (!t.is_variable()) {
      bound = &t;
    } else if (auto it = s.find(t.name()); it != s.end()) {
      bound = &it->second;
    }
    if (bound) {
      const auto& list = store.with_argument(pattern.predicate, i, *bound);
      if (list.size() < candidates->size()) candidates = &list;
    }
  }
  const Window w = windows[j];
  // Index lists are sorted by insertion position.
  auto first = std::lower_bound(candidates->begin(), candidates->end(), w.begin);
  std::vector<std::string> bound_here;
  for (auto it = first; it != candidates->end() && *it < w.end; ++it) {
    bound_here.clear();
    if (unify(pattern, store[*it], s, bound_here)) join(body, store, windows, j + 1, s, visit);
    for (const auto& v : bound_here) s.erase(v);
  }
}

}  // namespace detail

/// All substitutions of the body variables of `rule` mapping every body atom
/// into `store`, sorted lexicographically.
inline std::vector<Substitution> enumerate_homomorphisms(const Rule& rule, const AtomStore& store) {
  std::vector<Substitution> out;
  std::vector<detail::Window> windows(rule.body.size(),
                                      detail::Window{0, static_cast<AtomStore::Index>(store.size())});
  Substitution s;
  detail::join(rule.body, store, windows, 0, s, [&](const Substitution& h) { out.push_back(h); });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Substitution> enumerate_homomorphisms(const Rule& rule, const std::set<GroundAtom>& atoms) {
  AtomStore store;
  for (const auto& a : atoms) store.insert(a);
  return enumerate_homomorphisms(rule, store);
}

/// One null tuple per (rule, body homomorphism) pair.
class NullRegistry {
 public:
  struct Entry {
    int rule_id;
    Substitution homomorphism;
    /// existential variable -> null id
    std::map<std::string, std::uint32_t> nulls;
  };

  /// Returns the nulls of (rule, h), allocating fresh ones on first use.
  const Entry& nulls_for(const Rule& rule, const Substitution& h) {
    auto key = std::make_pair(rule.id, h);
    if (auto it = lookup_.find(key); it != lookup_.end()) return entries_[it->second];
    Entry e{rule.id, h, {}};
    for (const auto& v : rule.existential_vars) e.nulls.emplace(v, ++last_id_);
    lookup_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(e));
    return entries_.back();
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t null_count() const { return last_id_; }

 private:
  std::map<std::pair<int, Substitution>, std::size_t> lookup_;
  std::vector<Entry> entries_;
  std::uint32_t last_id_ = 0;
};

struct ChaseResult {
  /// The chase limit (or the partial result when truncated).
  AtomStore olim;
  /// One ground rule per applied (rule, homomorphism) pair.
  std::vector<GroundRule> gamma;
  NullRegistry registry;
  bool truncated = false;
  std::size_t steps = 0;

  std::set<GroundAtom> olim_set() const { return {olim.atoms().begin(), olim.atoms().end()}; }
  std::size_t olim_index(const GroundAtom& atom) const { return olim.index_of(atom); }
};

/// Runs the oblivious chase of `program` on `facts` by round-based
/// semi-naive saturation: in each round every (rule, homomorphism) pair that
/// uses at least one atom derived in the previous round is applied, in rule
/// order and lexicographic homomorphism order. `step_limit` bounds the number
/// of applications; exceeding it sets `truncated`.
inline ChaseResult oblivious_chase(const Program& program, const std::set<GroundAtom>& facts,
                                   std::optional<std::size_t> step_limit = std::nullopt) {
  ChaseResult result;
  for (const auto& f : facts) result.olim.insert(f);

  using detail::Window;
  auto delta_begin = AtomStore::Index{0};
  auto delta_end = static_cast<AtomStore::Index>(result.olim.size());
  const auto& rules = program.rules();

  while (delta_begin < delta_end && !result.truncated) {
    std::vector<std::pair<std::size_t, Substitution>> pending;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const auto& body = rules[r].body;
      std::vector<Substitution> found;
      for (std::size_t pivot = 0; pivot < body.size(); ++pivot) {
        std::vector<Window> windows(body.size());
        for (std::size_t j = 0; j < body.size(); ++j) {
          if (j < pivot)
            windows[j] = Window{0, delta_begin};
          else if (j == pivot)
            windows[j] = Window{delta_begin, delta_end};
          else
            windows[j] = Window{0, delta_end};
        }
        Substitution s;
        detail::join(body, result.olim, windows, 0, s, [&](const Substitution& h) { found.push_back(h); });
      }
      std::sort(found.begin(), found.end());
      for (auto& h : found) pending.emplace_back(r, std::move(h));
    }

    for (const auto& [r, h] : pending) {
      if (step_limit && result.steps >= *step_limit) {
        result.truncated = true;
        break;
      }
      const Rule& rule = rules[r];
      GroundRule gr;
      gr.origin_rule_id = rule.id;
      for (const auto& b : rule.body) gr.body.push_back(ground(h, b));
      if (rule.is_existential()) {
        const auto& entry = result.registry.nulls_for(rule, h);
        Substitution extended = h;
        for (const auto& [var, id] : entry.nulls) {
          extended.emplace(var, Term::null(id));
          gr.existential_nulls.push_back(id);
        }
        gr.head = ground(extended, rule.head);
      } else {
        gr.head = ground(h, rule.head);
      }
      result.olim.insert(gr.head);
      result.gamma.push_back(std::move(gr));
      ++result.steps;
    }
    delta_begin = delta_end;
    delta_end = static_cast<AtomStore::Index>(result.olim.size());
  }
  return result;
}

/// Atoms of `store` that match the head pattern of an existential ground
/// rule (see `matches`), in store order.
inline std::vector<AtomStore::Index> matching_atoms(const AtomStore& store, const GroundRule& gamma) {
  const auto& head = gamma.head;
  const std::vector<AtomStore::Index>* candidates = &store.with_predicate(head.predicate());
  for (std::size_t i = 0; i < head.arity(); ++i) {
    const Term& t = head.args()[i];
    bool existential = t.is_null() && std::find(gamma.existential_nulls.begin(), gamma.existential_nulls.end(),
                                                t.null_id()) != gamma.existential_nulls.end();
    if (!existential) {
      const auto& list = store.with_argument(head.predicate(), i, t);
      if (list.size() < candidates->size()) candidates = &list;
    }
  }
  std::vector<AtomStore::Index> out;
  for (auto idx : *candidates)
    if (matches(store[idx], head, gamma.existential_nulls)) out.push_back(idx);
  return out;
}

}  // namespace mvlog
