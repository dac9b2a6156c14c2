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

#include "mvlog/semantics.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <random>

namespace mvlog {
namespace {

using testing::at;
using testing::ga;
using testing::rule;

Rational q(long n, long d = 1) { return make_rational(n, d); }

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(*parse_rational("0.8"), q(4, 5));
  EXPECT_EQ(*parse_rational(".5"), q(1, 2));
  EXPECT_EQ(*parse_rational("4/5"), q(4, 5));
  EXPECT_EQ(*parse_rational("8/10"), q(4, 5));
  EXPECT_EQ(*parse_rational("1"), q(1));
  EXPECT_EQ(*parse_rational("-0.25"), q(-1, 4));
  EXPECT_EQ(*parse_rational("0.08"), q(2, 25));
  EXPECT_EQ(*parse_rational("0.1") + *parse_rational("0.2"), *parse_rational("0.3"));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "-", "1/0", "a", "1.", "1/", "/2", "1.2.3", "0x1", "1e3", " 1"})
    EXPECT_FALSE(parse_rational(bad).has_value()) << bad;
}

TEST(Rational, PrintsReducedFractions) {
  EXPECT_EQ(to_string(q(2, 4)), "1/2");
  EXPECT_EQ(to_string(q(1)), "1");
  EXPECT_EQ(to_string(q(0)), "0");
}

TEST(TruthDegree, EnforcesUnitInterval) {
  EXPECT_NO_THROW(TruthDegree(q(0)));
  EXPECT_NO_THROW(TruthDegree(q(1)));
  EXPECT_THROW(TruthDegree(q(-1, 10)), std::domain_error);
  EXPECT_THROW(TruthDegree(q(11, 10)), std::domain_error);
  EXPECT_TRUE(TruthDegree::one().is_one());
  EXPECT_TRUE(TruthDegree().is_zero());
  EXPECT_LT(TruthDegree(q(1, 3)), TruthDegree(q(1, 2)));
}

TEST(Connectives, Examples) {
  EXPECT_EQ(luk_and(q(4, 5), q(7, 10)), q(1, 2));
  EXPECT_EQ(luk_and(q(3, 10), q(1, 2)), q(0));
  EXPECT_EQ(luk_or(q(3, 5), q(3, 5)), q(1));
  EXPECT_EQ(luk_or(q(1, 5), q(1, 5)), q(2, 5));
  EXPECT_EQ(luk_implies(q(1, 2), q(1, 5)), q(7, 10));
  EXPECT_EQ(luk_implies(q(1, 5), q(1, 2)), q(1));
  EXPECT_EQ(luk_not(q(1, 4)), q(3, 4));
}

TEST(Connectives, DeMorganAndResiduationProperties) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(0, 12);
  for (int i = 0; i < 2000; ++i) {
    Rational a = q(num(rng), 12), b = q(num(rng), 12), c = q(num(rng), 12);
    EXPECT_EQ(luk_not(luk_and(a, b)), luk_or(luk_not(a), luk_not(b)));
    EXPECT_EQ(luk_and(a, b), luk_and(b, a));
    EXPECT_EQ(luk_and(luk_and(a, b), c), luk_and(a, luk_and(b, c)));
    EXPECT_EQ(luk_implies(a, b), luk_or(luk_not(a), b));
    // residuation: a (x) c <= b  iff  c <= a -> b
    EXPECT_EQ(luk_and(a, c) <= b, c <= luk_implies(a, b));
  }
}

TEST(BodyTruth, ClosedFormAgreesWithFoldedConjunction) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(0, 10), len(1, 5);
  for (int i = 0; i < 1000; ++i) {
    TruthAssignment nu;
    std::vector<GroundAtom> body;
    Rational folded = 1;
    int n = len(rng);
    for (int j = 0; j < n; ++j) {
      GroundAtom a = ga("b" + std::to_string(j), {"c"});
      Rational d = q(num(rng), 10);
      nu.set(a, TruthDegree(d));
      body.push_back(a);
      folded = luk_and(folded, d);
    }
    EXPECT_EQ(body_truth(nu, body).value(), folded);
  }
}

TEST(BodyTruth, Examples) {
  TruthAssignment nu;
  nu.set(ga("label", {"i1", "whale"}), TruthDegree(q(4, 5)));
  nu.set(ga("polar", {"i1"}), TruthDegree(q(7, 10)));
  EXPECT_EQ(body_truth(nu, {ga("label", {"i1", "whale"}), ga("polar", {"i1"})}).value(), q(1, 2));
  EXPECT_TRUE(body_truth(nu, {ga("label", {"i1", "whale"}), ga("missing", {})}).is_zero());
  EXPECT_EQ(body_truth(nu, {ga("polar", {"i1"})}).value(), q(7, 10));
}

GroundRule ground_rule(std::vector<GroundAtom> body, GroundAtom head, std::vector<std::uint32_t> nulls = {}) {
  GroundRule g;
  g.origin_rule_id = 1;
  g.body = std::move(body);
  g.head = std::move(head);
  g.existential_nulls = std::move(nulls);
  return g;
}

TEST(Satisfaction, GapSignDecidesSatisfaction) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(0, 10);
  const TruthDegree ks[] = {TruthDegree(q(1)), TruthDegree(q(4, 5)), TruthDegree(q(1, 2))};
  for (int i = 0; i < 1000; ++i) {
    TruthAssignment nu;
    nu.set(ga("a", {}), TruthDegree(make_rational(num(rng), 10)));
    nu.set(ga("b", {}), TruthDegree(make_rational(num(rng), 10)));
    nu.set(ga("h", {}), TruthDegree(make_rational(num(rng), 10)));
    auto g = ground_rule({ga("a", {}), ga("b", {})}, ga("h", {}));
    const auto& K = ks[i % 3];
    EXPECT_EQ(k_satisfies(nu, g, K), sgn(rule_gap(nu, g, K)) >= 0);
  }
}

TEST(Satisfaction, OrcaRuleIsTightAtOneHalf) {
  TruthAssignment nu;
  nu.set(ga("label", {"i1", "whale"}), TruthDegree(q(4, 5)));
  nu.set(ga("polar", {"i1"}), TruthDegree(q(7, 10)));
  auto g = ground_rule({ga("label", {"i1", "whale"}), ga("polar", {"i1"})}, ga("orca", {"i1"}));
  EXPECT_FALSE(k_satisfies(nu, g, TruthDegree::one()));
  nu.set(ga("orca", {"i1"}), TruthDegree(q(1, 2)));
  EXPECT_TRUE(k_satisfies(nu, g, TruthDegree::one()));
  EXPECT_EQ(rule_gap(nu, g, TruthDegree::one()), 0);
  EXPECT_EQ(rule_gap(nu, g, TruthDegree(q(4, 5))), q(1, 5));
}

TEST(Satisfaction, StrongExistentialSumsMatchingAtoms) {
  TruthAssignment nu;
  GroundAtom pattern("kp", {Term::null(1), Term::constant("acme")});
  nu.set(ga("kp", {"amy", "acme"}), TruthDegree(q(4, 5)));
  nu.set(pattern, TruthDegree(q(1, 5)));
  nu.set(ga("kp", {"bob", "other"}), TruthDegree(q(1)));
  auto g = ground_rule({ga("company", {"acme"})}, pattern, {1});
  EXPECT_EQ(head_truth(nu, g).value(), q(1));
  nu.set(pattern, TruthDegree(q(1, 10)));
  EXPECT_EQ(head_truth(nu, g).value(), q(9, 10));
  nu.set(ga("kp", {"cat", "acme"}), TruthDegree(q(1, 2)));
  EXPECT_EQ(head_truth(nu, g).value(), q(1));  // truncated at 1
}

TEST(Matches, RespectsRepeatedNullsAndFixedPositions) {
  GroundAtom pattern("p", {Term::null(3), Term::null(3), Term::constant("a")});
  EXPECT_TRUE(matches(ga("p", {"b", "b", "a"}), pattern, {3}));
  EXPECT_FALSE(matches(ga("p", {"b", "c", "a"}), pattern, {3}));
  EXPECT_FALSE(matches(ga("p", {"b", "b", "c"}), pattern, {3}));
  EXPECT_FALSE(matches(ga("q", {"b", "b", "a"}), pattern, {3}));
  // a null that is not existential for this rule must agree literally
  EXPECT_FALSE(matches(ga("p", {"b", "b", "a"}), pattern, {}));
  EXPECT_TRUE(matches(pattern, pattern, {}));
}

TEST(Program, ComputesExistentialVariablesAndIds) {
  Program p;
  const auto& r1 = p.add_rule(rule(at("kp", {"Y", "X"}), {at("company", {"X"})}));
  EXPECT_EQ(r1.id, 1);
  EXPECT_EQ(r1.existential_vars, std::set<std::string>{"Y"});
  EXPECT_TRUE(p.has_existential_rules());
  auto r = rule(at("q", {"X"}), {at("company", {"X"})});
  r.id = 1;
  EXPECT_EQ(p.add_rule(r).id, 2);
  EXPECT_NE(p.find_rule(2), nullptr);
  EXPECT_EQ(p.find_rule(7), nullptr);
}

TEST(Program, RejectsArityConflictsAndEmptyBodies) {
  Program p;
  p.add_rule(rule(at("q", {"X"}), {at("r", {"X"})}));
  EXPECT_THROW(p.add_rule(rule(at("q", {"X", "X"}), {at("r", {"X"})})), ArityError);
  EXPECT_THROW(p.add_rule(rule(at("q", {"X"}), {})), std::invalid_argument);
  EXPECT_THROW(p.declare("r", 2), ArityError);
}

TEST(FuzzyDatabase, RejectsZeroNullsAndConflicts) {
  FuzzyDatabase db;
  db.set(ga("r", {"a"}), TruthDegree(q(1, 2)));
  EXPECT_NO_THROW(db.set(ga("r", {"a"}), TruthDegree(q(1, 2))));
  EXPECT_THROW(db.set(ga("r", {"a"}), TruthDegree(q(1, 3))), DomainError);
  EXPECT_THROW(db.set(ga("r", {"b"}), TruthDegree::zero()), DomainError);
  EXPECT_THROW(db.set(GroundAtom("r", {Term::null(1)}), TruthDegree::one()), DomainError);
}

TEST(GroundAtom, RejectsVariablesAndPrintsNulls) {
  EXPECT_THROW(GroundAtom("p", {Term::variable("X")}), std::invalid_argument);
  EXPECT_EQ(GroundAtom("kp", {Term::null(1), Term::constant("acme")}).str(), "kp(_n1, acme)");
  EXPECT_EQ(GroundAtom("flag", {}).str(), "flag");
}

TEST(TruthAssignment, ZeroErasesAndMinIsPointwise) {
  TruthAssignment a, b;
  a.set(ga("x", {}), TruthDegree(q(1, 2)));
  a.set(ga("y", {}), TruthDegree(q(1)));
  b.set(ga("x", {}), TruthDegree(q(1, 3)));
  auto m = TruthAssignment::pointwise_min(a, b);
  EXPECT_EQ(m.degree(ga("x", {})).value(), q(1, 3));
  EXPECT_TRUE(m.degree(ga("y", {})).is_zero());
  EXPECT_EQ(m.support().size(), 1u);
  EXPECT_TRUE(m.leq(a));
  EXPECT_TRUE(m.leq(b));
  EXPECT_FALSE(a.leq(b));
  a.set(ga("y", {}), TruthDegree::zero());
  EXPECT_FALSE(a.support().contains(ga("y", {})));
}

TEST(Databases, CrispAndCertainViews) {
  FuzzyDatabase db;
  db.set(ga("r", {"a"}), TruthDegree(q(1)));
  db.set(ga("s", {"a"}), TruthDegree(q(1, 2)));
  EXPECT_EQ(crisp_database(db).size(), 2u);
  EXPECT_EQ(certain_database(db), std::set<GroundAtom>{ga("r", {"a"})});
}

TEST(ActiveAtoms, ExcludeNullsAndForeignConstants) {
  auto inst = testing::instance_from("0.8 :: s(a). p(X, b) :- s(X).");
  auto adom = active_domain(inst);
  EXPECT_EQ(adom, (std::set<std::string>{"a", "b"}));
  std::set<GroundAtom> universe{ga("p", {"a", "b"}), GroundAtom("p", {Term::constant("a"), Term::null(1)}),
                                ga("p", {"a", "zz"})};
  EXPECT_EQ(active_atoms(inst, universe), std::set<GroundAtom>{ga("p", {"a", "b"})});
}

TEST(RelaxRewrite, RenamesDatabasePredicatesAndAddsCopyRules) {
  auto inst = testing::instance_from("r(a). 0.5 :: s(a). s(X) :- r(X).");
  auto relaxed = relax_rewrite(inst);
  const auto& rules = relaxed.instance.program.rules();
  ASSERT_EQ(rules.size(), 3u);
  EXPECT_EQ(rules[0].str(), "s_relaxed(X) :- r_relaxed(X).");
  EXPECT_EQ(rules[1].str(), "r_relaxed(X1) :- r(X1).");
  EXPECT_EQ(rules[2].str(), "s_relaxed(X1) :- s(X1).");
  EXPECT_EQ(relaxed.original_of.at("s_relaxed"), "s");
  EXPECT_EQ(relaxed.instance.database, inst.database);
}

TEST(RelaxRewrite, AvoidsNameClashes) {
  auto inst = testing::instance_from("r(a). q(X) :- r_relaxed(X). r_relaxed(X) :- r(X).");
  auto relaxed = relax_rewrite(inst);
  EXPECT_EQ(relaxed.original_of.size(), 1u);
  EXPECT_EQ(relaxed.original_of.begin()->second, "r");
  EXPECT_NE(relaxed.original_of.begin()->first, "r_relaxed");
}

TEST(Instance, RejectsZeroThreshold) {
  EXPECT_THROW(Instance(Program{}, FuzzyDatabase{}, TruthDegree::zero()), DomainError);
}

}  // namespace
}  // namespace mvlog
