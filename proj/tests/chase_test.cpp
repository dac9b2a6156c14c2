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

#include "mvlog/chase.hpp"
#include "mvlog/termination.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

namespace mvlog {
namespace {

using testing::ga;

ChaseResult chase_of(const std::string& text, std::optional<std::size_t> limit = std::nullopt) {
  auto unit = parse(text);
  return oblivious_chase(unit.program, crisp_database(unit.database), limit);
}

std::vector<std::string> gamma_strings(const ChaseResult& c) {
  std::vector<std::string> out;
  for (const auto& g : c.gamma) out.push_back(std::to_string(g.origin_rule_id) + " " + g.str());
  return out;
}

TEST(Chase, KeyPersonIntroducesOneNull) {
  auto c = chase_of(testing::read_file(MVLOG_FIXTURES "/keyperson.mvdl"));
  ASSERT_EQ(c.gamma.size(), 1u);
  GroundAtom head("keyPerson", {Term::null(1), Term::constant("acme")});
  EXPECT_EQ(c.gamma[0].head, head);
  EXPECT_EQ(c.gamma[0].existential_nulls, std::vector<std::uint32_t>{1});
  EXPECT_EQ(c.olim.size(), 3u);
  EXPECT_TRUE(c.olim.contains(head));
  EXPECT_EQ(c.registry.null_count(), 1u);
  EXPECT_FALSE(c.truncated);
  // the head pattern matches both the null atom and the given key person
  auto idx = matching_atoms(c.olim, c.gamma[0]);
  std::set<GroundAtom> matched;
  for (auto i : idx) matched.insert(c.olim[i]);
  EXPECT_EQ(matched, (std::set<GroundAtom>{head, ga("keyPerson", {"amy", "acme"})}));
}

TEST(Chase, NullExampleHasTwoGroundRules) {
  auto c = chase_of(testing::read_file(MVLOG_FIXTURES "/nulls.mvdl"));
  ASSERT_EQ(c.gamma.size(), 2u);
  EXPECT_EQ(c.gamma[0].str(), "s(a) -> p(a, _n1)");
  EXPECT_EQ(c.gamma[1].str(), "p(a, _n1) -> t(a)");
  EXPECT_EQ(c.registry.null_count(), 1u);
  EXPECT_EQ(c.olim_set(), (std::set<GroundAtom>{ga("s", {"a"}), ga("t", {"a"}),
                                                 GroundAtom("p", {Term::constant("a"), Term::null(1)})}));
}

TEST(Chase, ObliviousChaseFiresEvenWhenHeadHolds) {
  // p(a, b) already witnesses the head, yet the oblivious chase still fires.
  auto c = chase_of("s(a). p(a, b). p(X, Y) :- s(X).");
  EXPECT_EQ(c.gamma.size(), 1u);
  EXPECT_EQ(c.olim.size(), 3u);
}

TEST(Chase, TransitiveClosure) {
  auto c = chase_of("e(a,b). e(b,c). e(c,d). t(X,Y) :- e(X,Y). t(X,Z) :- t(X,Y), e(Y,Z).");
  std::set<GroundAtom> t;
  for (const auto& a : c.olim.atoms())
    if (a.predicate() == "t") t.insert(a);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(c.gamma.size(), 3u + 3u);
}

TEST(Chase, StepLimitTruncates) {
  auto c = chase_of(testing::read_file(MVLOG_FIXTURES "/nonterminating.mvdl"), 25);
  EXPECT_TRUE(c.truncated);
  EXPECT_EQ(c.steps, 25u);
  EXPECT_EQ(c.gamma.size(), 25u);
  auto done = chase_of("p(a). q(X) :- p(X).", 1);
  EXPECT_FALSE(done.truncated);
}

TEST(Homomorphisms, EnumeratesSortedMatches) {
  auto unit = parse("e(a,b). e(b,c). e(b,d). q(X,Z) :- e(X,Y), e(Y,Z).");
  auto homs = enumerate_homomorphisms(unit.program.rules()[0], crisp_database(unit.database));
  ASSERT_EQ(homs.size(), 2u);
  EXPECT_EQ(homs[0].at("Z"), Term::constant("c"));
  EXPECT_EQ(homs[1].at("Z"), Term::constant("d"));
}

// Independent re-enumeration: every assignment of body variables to terms
// of the limit whose grounded body lies in the limit is a ground rule, and
// nothing else is.
std::set<std::pair<int, std::vector<GroundAtom>>> brute_force_bodies(const Program& program,
                                                                     const std::set<GroundAtom>& olim) {
  std::set<Term> terms;
  for (const auto& a : olim)
    for (const auto& t : a.args()) terms.insert(t);
  std::vector<Term> universe(terms.begin(), terms.end());
  std::set<std::pair<int, std::vector<GroundAtom>>> out;
  for (const auto& r : program.rules()) {
    auto vars = r.body_variables();
    std::vector<std::size_t> pick(vars.size(), 0);
    if (!vars.empty() && universe.empty()) continue;
    for (;;) {
      Substitution s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.emplace(vars[i], universe[pick[i]]);
      std::vector<GroundAtom> body;
      bool inside = true;
      for (const auto& b : r.body) {
        body.push_back(ground(s, b));
        inside = inside && olim.contains(body.back());
      }
      if (inside) out.emplace(r.id, body);
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == universe.size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return out;
}

TEST(ChaseProperties, GroundRulesAreCompleteAndLimitIsClosed) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    testing::InstanceGenerator gen(seed);
    testing::GeneratorConfig cfg;
    cfg.existential = seed % 2 == 0;
    cfg.constants = 2;
    auto unit = gen.unit(cfg);
    auto c = oblivious_chase(unit.program, crisp_database(unit.database), 400);
    if (c.truncated) continue;
    ++checked;
    auto olim = c.olim_set();
    std::set<std::pair<int, std::vector<GroundAtom>>> produced;
    for (const auto& g : c.gamma) {
      EXPECT_TRUE(olim.contains(g.head));
      produced.emplace(g.origin_rule_id, g.body);
    }
    EXPECT_EQ(produced.size(), c.gamma.size()) << "a (rule, homomorphism) pair fired twice";
    EXPECT_EQ(produced, brute_force_bodies(unit.program, olim)) << format(unit);
    std::set<GroundAtom> explained = crisp_database(unit.database);
    for (const auto& g : c.gamma) explained.insert(g.head);
    EXPECT_EQ(explained, olim);
  }
  EXPECT_GT(checked, 100);
}

TEST(ChaseProperties, NullsAreFreshPerApplication) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::InstanceGenerator gen(seed);
    testing::GeneratorConfig cfg;
    cfg.existential = true;
    auto unit = gen.unit(cfg);
    auto c = oblivious_chase(unit.program, crisp_database(unit.database), 300);
    std::set<std::uint32_t> seen;
    for (const auto& g : c.gamma)
      for (auto id : g.existential_nulls) EXPECT_TRUE(seen.insert(id).second) << "null reused";
    EXPECT_EQ(seen.size(), c.registry.null_count());
    if (!seen.empty()) {
      EXPECT_EQ(*seen.begin(), 1u);
      EXPECT_EQ(*seen.rbegin(), seen.size());
    }
  }
}

TEST(ChaseProperties, DeterministicAndMonotoneOnDatalog) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing::InstanceGenerator gen(seed);
    testing::GeneratorConfig cfg;
    cfg.facts = 7;
    auto unit = gen.unit(cfg);
    auto facts = crisp_database(unit.database);
    auto a = oblivious_chase(unit.program, facts);
    auto b = oblivious_chase(unit.program, facts);
    EXPECT_EQ(gamma_strings(a), gamma_strings(b));
    EXPECT_EQ(a.olim.atoms(), b.olim.atoms());

    std::set<GroundAtom> fewer(facts.begin(), facts.end());
    if (!fewer.empty()) fewer.erase(fewer.begin());
    auto small = oblivious_chase(unit.program, fewer).olim_set();
    auto big = a.olim_set();
    EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    EXPECT_EQ(big, testing::classical_fixpoint(unit.program, facts));
  }
}

TEST(ChaseProperties, WeaklyAcyclicProgramsTerminate) {
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::InstanceGenerator gen(seed);
    testing::GeneratorConfig cfg;
    cfg.existential = true;
    auto unit = gen.unit(cfg);
    if (!is_weakly_acyclic_ve(unit.program).weakly_acyclic) continue;
    ++accepted;
    auto c = oblivious_chase(unit.program, crisp_database(unit.database), 100000);
    EXPECT_FALSE(c.truncated) << format(unit);
  }
  EXPECT_GT(accepted, 50);
}

}  // namespace
}  // namespace mvlog
