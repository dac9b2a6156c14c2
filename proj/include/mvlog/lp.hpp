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

/// \file lp.hpp
/// Exact rational linear programming.
///
/// Models have box-bounded variables, optional fixings and constraints of the
/// form  sum a_j x_j >= b; the objective is minimised. The solver is a sparse
/// two-phase tableau simplex over GMP rationals with Bland's rule, so results
/// are exact and pivoting cannot cycle.

#pragma once

#include "mvlog/core.hpp"
#include "mvlog/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvlog::lp {

using VarId = std::size_t;

/// Inconsistent model data (bad bounds, fixings outside bounds, unknown
/// variables). Reported before any pivoting.
struct MalformedModel : Error {
  using Error::Error;
};

/// Sparse linear expression sum coef * x_var.
class LinearForm {
 public:
  LinearForm() = default;

  LinearForm& add(VarId var, const Rational& coef) {
    auto [it, inserted] = terms_.emplace(var, coef);
    if (!inserted) it->second += coef;
    if (sgn(it->second) == 0) terms_.erase(it);
    return *this;
  }

  const std::map<VarId, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Rational evaluate(const std::vector<Rational>& values) const {
    Rational sum = 0;
    for (const auto& [v, c] : terms_) sum += c * values.at(v);
    return sum;
  }

  LinearForm negated() const {
    LinearForm out;
    for (const auto& [v, c] : terms_) out.terms_.emplace(v, -c);
    return out;
  }

 private:
  std::map<VarId, Rational> terms_;
};

/// form >= rhs
struct Constraint {
  LinearForm form;
  Rational rhs;
  std::string label;
};

struct Variable {
  std::string name;
  Rational lower = 0;
  Rational upper = 1;
  std::optional<Rational> fixed;
};

class LinearProgram {
 public:
  VarId add_variable(std::string name, Rational lower = 0, Rational upper = 1) {
    variables_.push_back(Variable{std::move(name), std::move(lower), std::move(upper), std::nullopt});
    return variables_.size() - 1;
  }

  void fix(VarId var, Rational value) { variables_.at(var).fixed = std::move(value); }

  void add_constraint(LinearForm form, Rational rhs, std::string label = {}) {
    constraints_.push_back(Constraint{std::move(form), std::move(rhs), std::move(label)});
  }

  void set_objective(LinearForm objective) { objective_ = std::move(objective); }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearForm& objective() const { return objective_; }
  std::size_t variable_count() const { return variables_.size(); }

  /// Throws MalformedModel when bounds, fixings or references are inconsistent.
  void validate() const {
    for (const auto& v : variables_) {
      if (v.lower > v.upper) throw MalformedModel("variable " + v.name + " has empty bounds");
      if (v.fixed && (*v.fixed < v.lower || *v.fixed > v.upper))
        throw MalformedModel("variable " + v.name + " fixed to " + to_string(*v.fixed) + " outside [" +
                             to_string(v.lower) + "," + to_string(v.upper) + "]");
    }
    auto check = [&](const LinearForm& f, const std::string& what) {
      for (const auto& [var, c] : f.terms())
        if (var >= variables_.size()) throw MalformedModel(what + " references unknown variable " + std::to_string(var));
    };
    for (const auto& c : constraints_) check(c.form, "constraint " + c.label);
    check(objective_, "objective");
  }

  /// True iff `values` meets every bound, fixing and constraint exactly.
  bool is_feasible(const std::vector<Rational>& values) const {
    if (values.size() != variables_.size()) return false;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      const auto& v = variables_[i];
      if (values[i] < v.lower || values[i] > v.upper) return false;
      if (v.fixed && values[i] != *v.fixed) return false;
    }
    for (const auto& c : constraints_)
      if (c.form.evaluate(values) < c.rhs) return false;
    return true;
  }

  /// LP-style text dump for debugging.
  std::string str() const {
    std::ostringstream out;
    auto form_str = [&](const LinearForm& f) {
      std::string s;
      bool first = true;
      for (const auto& [v, c] : f.terms()) {
        bool neg = sgn(c) < 0;
        Rational mag = neg ? Rational(-c) : c;
        if (!first || neg) s += neg ? (first ? "-" : " - ") : " + ";
        if (mag != 1) s += to_string(mag) + " ";
        s += variables_[v].name;
        first = false;
      }
      return first ? std::string("0") : s;
    };
    out << "minimize\n  " << form_str(objective_) << "\nsubject to\n";
    for (const auto& c : constraints_)
      out << "  " << (c.label.empty() ? "" : c.label + ": ") << form_str(c.form) << " >= " << to_string(c.rhs) << "\n";
    out << "bounds\n";
    for (const auto& v : variables_) {
      if (v.fixed)
        out << "  " << v.name << " = " << to_string(*v.fixed) << "\n";
      else
        out << "  " << to_string(v.lower) << " <= " << v.name << " <= " << to_string(v.upper) << "\n";
    }
    out << "end\n";
    return out.str();
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinearForm objective_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  /// One value per model variable (fixed variables included) when Optimal.
  std::vector<Rational> values;
  /// Objective value when Optimal. For lexicographic solves: the primary one.
  Rational objective = 0;
  std::optional<Rational> secondary_objective;
  std::size_t pivots = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

namespace detail {

/// Sparse row: (column, coefficient) pairs sorted by column, no zeros.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

inline const Rational* find_entry(const SparseRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  return it != row.end() && it->first == col ? &it->second : nullptr;
}

/// Tableau in canonical form: for every live row i, column basis[i] has a
/// unit entry in row i and zero elsewhere; all rhs are non-negative.
class Tableau {
 public:
  explicit Tableau(std::size_t columns) : column_rows_(columns), stamp_(0) {}

  std::size_t add_row(SparseRow row, Rational rhs, std::size_t basic) {
    std::size_t i = rows_.size();
    for (const auto& [c, v] : row) column_rows_[c].push_back(i);
    rows_.push_back(std::move(row));
    rhs_.push_back(std::move(rhs));
    basis_.push_back(basic);
    live_.push_back(true);
    return i;
  }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return column_rows_.size(); }
  bool live(std::size_t i) const { return live_[i]; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  const SparseRow& row(std::size_t i) const { return rows_[i]; }
  const Rational& rhs(std::size_t i) const { return rhs_[i]; }

  void kill(std::size_t i) {
    live_[i] = false;
    rows_[i].clear();
    rhs_[i] = 0;
  }

  /// Live rows with a nonzero entry in `col`; compacts the occupancy list.
  const std::vector<std::size_t>& rows_with(std::size_t col) {
    auto& list = column_rows_[col];
    if (marks_.size() < rows_.size()) marks_.resize(rows_.size(), 0);
    ++stamp_;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      std::size_t i = list[k];
      if (marks_[i] == stamp_ || !live_[i] || !find_entry(rows_[i], col)) continue;
      marks_[i] = stamp_;
      list[kept++] = i;
    }
    list.resize(kept);
    std::sort(list.begin(), list.end());
    return list;
  }

  /// Pivots column `col` into the basis at row `r`, updating the reduced
  /// costs `cost` and the objective value `z` alongside.
  void pivot(std::size_t r, std::size_t col, std::vector<Rational>& cost, Rational& z) {
    SparseRow& pr = rows_[r];
    const Rational piv = *find_entry(pr, col);
    if (piv != 1) {
      for (auto& [c, v] : pr) v /= piv;
      rhs_[r] /= piv;
    }
    std::vector<std::size_t> targets = rows_with(col);
    for (std::size_t i : targets) {
      if (i == r) continue;
      const Rational f = *find_entry(rows_[i], col);
      axpy(i, f, pr);
      rhs_[i] -= f * rhs_[r];
    }
    if (sgn(cost[col]) != 0) {
      const Rational f = cost[col];
      for (const auto& [c, v] : pr) cost[c] -= f * v;
      z += f * rhs_[r];
    }
    basis_[r] = col;
  }

 private:
  /// rows_[i] -= f * src
  void axpy(std::size_t i, const Rational& f, const SparseRow& src) {
    SparseRow& dst = rows_[i];
    SparseRow out;
    out.reserve(dst.size() + src.size());
    auto a = dst.begin();
    auto b = src.begin();
    Rational tmp;
    while (a != dst.end() || b != src.end()) {
      if (b == src.end() || (a != dst.end() && a->first < b->first)) {
        out.push_back(std::move(*a));
        ++a;
      } else if (a == dst.end() || b->first < a->first) {
        tmp = -f * b->second;
        out.emplace_back(b->first, tmp);
        column_rows_[b->first].push_back(i);
        ++b;
      } else {
        tmp = a->second - f * b->second;
        if (sgn(tmp) != 0) out.emplace_back(a->first, tmp);
        ++a;
        ++b;
      }
    }
    dst = std::move(out);
  }

  std::vector<SparseRow> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<bool> live_;
  std::vector<std::vector<std::size_t>> column_rows_;
  std::vector<std::uint64_t> marks_;
  std::uint64_t stamp_;
};

/// Runs simplex iterations with Bland's rule until optimality or
/// unboundedness. Columns with `banned[j]` never enter.
inline SolveStatus iterate(Tableau& t, std::vector<Rational>& cost, Rational& z, const std::vector<bool>& banned,
                           std::size_t& pivots) {
  for (;;) {
    std::size_t entering = cost.size();
    for (std::size_t j = 0; j < cost.size(); ++j)
      if (!banned[j] && sgn(cost[j]) < 0) {
        entering = j;
        break;
      }
    if (entering == cost.size()) return SolveStatus::Optimal;

    std::optional<std::size_t> leaving;
    Rational best, ratio;
    for (std::size_t i : t.rows_with(entering)) {
      const Rational& a = *find_entry(t.row(i), entering);
      if (sgn(a) <= 0) continue;
      ratio = t.rhs(i) / a;
      if (!leaving || ratio < best || (ratio == best && t.basic(i) < t.basic(*leaving))) {
        leaving = i;
        best = ratio;
      }
    }
    if (!leaving) return SolveStatus::Unbounded;
    t.pivot(*leaving, entering, cost, z);
    ++pivots;
  }
}

}  // namespace detail

/// Solves `model` exactly. Fixed variables (and variables with equal bounds)
/// are substituted out before pivoting; upper bounds become rows with their
/// own slacks; rows whose shifted right-hand side is positive get an
/// artificial variable for phase one.
inline Solution solve(const LinearProgram& model) {
  model.validate();
  const auto& vars = model.variables();
  const std::size_t n = vars.size();

  // Value each variable takes if it is not a tableau column.
  std::vector<Rational> base(n);
  std::vector<std::optional<std::size_t>> column_of(n);
  std::size_t free_count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (vars[v].fixed) {
      base[v] = *vars[v].fixed;
    } else {
      base[v] = vars[v].lower;
      if (vars[v].lower != vars[v].upper) column_of[v] = free_count++;
    }
  }

  Solution solution;
  struct PendingRow {
    detail::SparseRow coefs;
    Rational rhs;
  };
  std::vector<PendingRow> rows;
  for (const auto& c : model.constraints()) {
    PendingRow row;
    row.rhs = c.rhs;
    for (const auto& [v, a] : c.form.terms()) {
      row.rhs -= a * base[v];
      if (column_of[v]) row.coefs.emplace_back(*column_of[v], a);
    }
    std::sort(row.coefs.begin(), row.coefs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    if (row.coefs.empty()) {
      if (sgn(row.rhs) > 0) return solution;  // 0 >= positive
      continue;
    }
    rows.push_back(std::move(row));
  }

  // Columns: [0, f) shifted variables, then one surplus per constraint row,
  // one slack per upper-bound row, then artificials.
  const std::size_t m = rows.size();
  const std::size_t surplus0 = free_count;
  const std::size_t slack0 = surplus0 + m;
  std::size_t artificial_count = 0;
  for (const auto& r : rows)
    if (sgn(r.rhs) > 0) ++artificial_count;
  const std::size_t artificial0 = slack0 + free_count;
  const std::size_t columns = artificial0 + artificial_count;

  detail::Tableau t(columns);
  std::vector<bool> is_artificial(columns, false);
  std::size_t next_artificial = artificial0;
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = rows[i];
    if (sgn(r.rhs) > 0) {
      // a.y - s + art = rhs
      r.coefs.emplace_back(surplus0 + i, Rational(-1));
      r.coefs.emplace_back(next_artificial, Rational(1));
      is_artificial[next_artificial] = true;
      t.add_row(std::move(r.coefs), r.rhs, next_artificial++);
    } else {
      // -a.y + s = -rhs
      for (auto& [c, a] : r.coefs) a = -a;
      r.coefs.emplace_back(surplus0 + i, Rational(1));
      t.add_row(std::move(r.coefs), -r.rhs, surplus0 + i);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!column_of[v]) continue;
    std::size_t j = *column_of[v];
    detail::SparseRow r{{j, Rational(1)}, {slack0 + j, Rational(1)}};
    t.add_row(std::move(r), vars[v].upper - vars[v].lower, slack0 + j);
  }

  auto reduced_costs = [&](const std::vector<Rational>& c, Rational& z) {
    std::vector<Rational> d = c;
    z = 0;
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      if (!t.live(i)) continue;
      const Rational& cb = c[t.basic(i)];
      if (sgn(cb) == 0) continue;
      for (const auto& [col, a] : t.row(i)) d[col] -= cb * a;
      z += cb * t.rhs(i);
    }
    return d;
  };

  std::vector<bool> banned(columns, false);
  if (artificial_count > 0) {
    std::vector<Rational> c1(columns);
    for (std::size_t j = artificial0; j < columns; ++j) c1[j] = 1;
    Rational z1;
    auto d1 = reduced_costs(c1, z1);
    detail::iterate(t, d1, z1, banned, solution.pivots);
    if (sgn(z1) > 0) return solution;

    // Drive remaining (zero-valued) artificials out of the basis.
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      if (!t.live(i) || !is_artificial[t.basic(i)]) continue;
      std::optional<std::size_t> col;
      for (const auto& [c, a] : t.row(i))
        if (!is_artificial[c]) {
          col = c;
          break;
        }
      if (col) {
        t.pivot(i, *col, d1, z1);
        ++solution.pivots;
      } else {
        t.kill(i);  // redundant row
      }
    }
    for (std::size_t j = artificial0; j < columns; ++j) banned[j] = true;
  }

  std::vector<Rational> c2(columns);
  for (const auto& [v, a] : model.objective().terms())
    if (column_of[v]) c2[*column_of[v]] += a;
  Rational z2;
  auto d2 = reduced_costs(c2, z2);
  if (detail::iterate(t, d2, z2, banned, solution.pivots) == SolveStatus::Unbounded) {
    solution.status = SolveStatus::Unbounded;
    return solution;
  }

  std::vector<Rational> column_value(columns);
  for (std::size_t i = 0; i < t.row_count(); ++i)
    if (t.live(i)) column_value[t.basic(i)] = t.rhs(i);
  solution.values = base;
  for (std::size_t v = 0; v < n; ++v)
    if (column_of[v]) solution.values[v] += column_value[*column_of[v]];

  if (!model.is_feasible(solution.values))
    throw std::logic_error("simplex returned an assignment violating the model");
  solution.status = SolveStatus::Optimal;
  solution.objective = model.objective().evaluate(solution.values);
  return solution;
}

/// Minimises the model objective, then, among its optima, `secondary`.
inline Solution lexicographic_solve(const LinearProgram& model, const LinearForm& secondary) {
  Solution first = solve(model);
  if (!first.optimal()) return first;
  LinearProgram second = model;
  second.add_constraint(model.objective(), first.objective, "primary_lower");
  second.add_constraint(model.objective().negated(), -first.objective, "primary_upper");
  second.set_objective(secondary);
  Solution out = solve(second);
  if (!out.optimal()) throw std::logic_error("second stage of a lexicographic solve lost feasibility");
  out.secondary_objective = out.objective;
  out.objective = first.objective;
  out.pivots += first.pivots;
  return out;
}

}  // namespace mvlog::lp
