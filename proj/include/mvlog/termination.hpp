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

/// \file termination.hpp
/// Sufficient test for finiteness of the oblivious chase: weak acyclicity of
/// the variable expansion of a program.
///
/// Plain weak acyclicity is tailored to the restricted chase and accepts
/// P(X) -> P(Y) (Y existential), whose oblivious chase is infinite. The
/// variable expansion threads every body-only variable through a fresh
/// predicate so that such cycles become visible in the dependency graph.

#pragma once

#include "mvlog/core.hpp"
#include "mvlog/semantics.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace mvlog {

/// Argument position (R, i) with 1-based i.
struct PositionVertex {
  std::string predicate;
  std::size_t index = 1;

  std::string str() const { return "(" + predicate + "," + std::to_string(index) + ")"; }
  friend bool operator==(const PositionVertex&, const PositionVertex&) = default;
  friend auto operator<=>(const PositionVertex&, const PositionVertex&) = default;
};

using PositionEdge = std::pair<PositionVertex, PositionVertex>;

struct DependencyGraph {
  std::set<PositionVertex> vertices;
  std::set<PositionEdge> normal_edges;
  std::set<PositionEdge> special_edges;
};

/// Replaces each existential rule  body -> R(head args)  by
///   body -> R*(head args, body-only vars)   and
///   R*(head args, body-only vars) -> R(head args)
/// with a fresh R* per rule. Datalog rules are kept as they are.
inline Program variable_expansion(const Program& program) {
  if (!program.has_existential_rules()) return program;
  std::set<std::string> taken;
  for (const auto& [pred, arity] : program.signature()) taken.insert(pred);

  Program out;
  for (const auto& rule : program.rules()) {
    if (!rule.is_existential()) {
      Rule copy = rule;
      copy.id = 0;
      out.add_rule(std::move(copy));
      continue;
    }
    std::set<std::string> head_vars;
    for (const auto& t : rule.head.args)
      if (t.is_variable()) head_vars.insert(t.name());
    std::vector<Term> expanded_args = rule.head.args;
    for (const auto& v : rule.body_variables())
      if (!head_vars.contains(v)) expanded_args.push_back(Term::variable(v));

    std::string star = fresh_name(rule.head.predicate, "_star", taken);
    taken.insert(star);
    Atom star_atom{star, expanded_args};

    Rule introduce;
    introduce.body = rule.body;
    introduce.head = star_atom;
    out.add_rule(std::move(introduce));

    Rule project;
    project.body = {star_atom};
    project.head = rule.head;
    out.add_rule(std::move(project));
  }
  return out;
}

inline DependencyGraph build_dependency_graph(const Program& program) {
  DependencyGraph g;
  for (const auto& [pred, arity] : program.signature())
    for (std::size_t i = 1; i <= arity; ++i) g.vertices.insert(PositionVertex{pred, i});

  auto positions_of = [](const Atom& atom, const std::string& var) {
    std::vector<PositionVertex> out;
    for (std::size_t i = 0; i < atom.arity(); ++i)
      if (atom.args[i].is_variable() && atom.args[i].name() == var) out.push_back(PositionVertex{atom.predicate, i + 1});
    return out;
  };

  for (const auto& rule : program.rules()) {
    std::vector<PositionVertex> existential_positions;
    for (const auto& y : rule.existential_vars)
      for (auto& p : positions_of(rule.head, y)) existential_positions.push_back(p);

    for (const auto& x : rule.body_variables()) {
      auto head_positions = positions_of(rule.head, x);
      if (head_positions.empty()) continue;
      for (const auto& b : rule.body)
        for (const auto& from : positions_of(b, x)) {
          for (const auto& to : head_positions) g.normal_edges.emplace(from, to);
          for (const auto& to : existential_positions) g.special_edges.emplace(from, to);
        }
    }
  }
  return g;
}

struct AcyclicityReport {
  bool weakly_acyclic = true;
  /// On failure: a cycle v0 -> v1 -> ... -> v0 whose first edge is special.
  std::vector<PositionVertex> witness;
  Program expanded;
  DependencyGraph graph;
};

namespace detail {

/// Tarjan's strongly connected components; returns the component id of
/// every vertex.
inline std::map<PositionVertex, int> strongly_connected_components(
    const std::set<PositionVertex>& vertices, const std::map<PositionVertex, std::vector<PositionVertex>>& succ) {
  std::map<PositionVertex, int> index, low, component;
  std::vector<PositionVertex> stack;
  std::set<PositionVertex> on_stack;
  int counter = 0, components = 0;

  // Iterative DFS to stay safe on large signatures.
  struct Frame {
    PositionVertex v;
    std::size_t next;
  };
  static const std::vector<PositionVertex> none;
  auto successors = [&](const PositionVertex& v) -> const std::vector<PositionVertex>& {
    auto it = succ.find(v);
    return it == succ.end() ? none : it->second;
  };

  for (const auto& root : vertices) {
    if (index.contains(root)) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack.insert(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& next = successors(f.v);
      if (f.next < next.size()) {
        const PositionVertex w = next[f.next++];
        if (!index.contains(w)) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack.insert(w);
          frames.push_back({w, 0});
        } else if (on_stack.contains(w)) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      PositionVertex v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        PositionVertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          component[w] = components;
        } while (w != v);
        ++components;
      }
    }
  }
  return component;
}

}  // namespace detail

/// Checks that the dependency graph of `program` (used as given) has no
/// cycle through a special edge.
inline AcyclicityReport check_weak_acyclicity(const Program& program) {
  AcyclicityReport report;
  report.expanded = program;
  report.graph = build_dependency_graph(program);
  const auto& g = report.graph;

  std::map<PositionVertex, std::vector<PositionVertex>> succ;
  for (const auto& [a, b] : g.normal_edges) succ[a].push_back(b);
  for (const auto& [a, b] : g.special_edges) succ[a].push_back(b);
  for (auto& [v, list] : succ) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  auto component = detail::strongly_connected_components(g.vertices, succ);
  for (const auto& [from, to] : g.special_edges) {
    if (component.at(from) != component.at(to)) continue;
    // Shortest path to -> from inside the component closes the cycle.
    std::map<PositionVertex, PositionVertex> parent;
    std::queue<PositionVertex> queue;
    queue.push(to);
    parent.emplace(to, to);
    while (!queue.empty() && !parent.contains(from)) {
      auto v = queue.front();
      queue.pop();
      for (const auto& w : succ[v])
        if (component.at(w) == component.at(from) && parent.emplace(w, v).second) queue.push(w);
    }
    std::vector<PositionVertex> back;
    for (auto v = from; v != to; v = parent.at(v)) back.push_back(v);
    report.weakly_acyclic = false;
    report.witness.push_back(from);
    report.witness.push_back(to);
    for (auto it = back.rbegin(); it != back.rend(); ++it) report.witness.push_back(*it);
    return report;
  }
  return report;
}

/// Weak acyclicity of the variable expansion. A positive answer guarantees a
/// finite oblivious chase on every database.
inline AcyclicityReport is_weakly_acyclic_ve(const Program& program) {
  auto report = check_weak_acyclicity(variable_expansion(program));
  return report;
}

}  // namespace mvlog
