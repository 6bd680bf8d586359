//===----------------------------------------------------------------------===//
//
// Copyright 2026 The coopver authors
//
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
//
//===----------------------------------------------------------------------===//

#include <gtest/gtest.h>

#include "coopver/oracle.hpp"
#include "coopver/predabs.hpp"
#include "test_util.hpp"

using namespace coopver;
using coopver::test::load;
using coopver::test::parse;

namespace {

std::vector<std::string> shown(const Region &r) {
  std::vector<std::string> out;
  for (const auto &[p, pos] : r.literals)
    out.push_back((pos ? "" : "!") + to_string(p));
  return out;
}

std::vector<int> edges_by_line(const Cfa &cfa, std::vector<std::pair<int, std::string>> want) {
  // follows the CFA from the initial location choosing edges by their text
  std::vector<int> path;
  int loc = cfa.initial;
  for (const auto &[line, text] : want) {
    int found = -1;
    for (int e : cfa.out_edges[loc])
      if (cfa.edges[e].span.start_line == line && to_string(cfa.edges[e].op) == text)
        found = e;
    EXPECT_GE(found, 0) << line << " " << text;
    if (found < 0)
      return path;
    path.push_back(found);
    loc = cfa.edges[found].dst;
  }
  return path;
}

Witness witness_with(const Cfa &cfa, const std::string &inv) {
  return skeleton_witness(cfa, {{cfa.loop_heads.at(0), parse_bool_expr(inv)}}, "test");
}

MasterConfig quick(int cap) {
  MasterConfig c;
  c.bound_cap = cap;
  c.timeout = 60;
  return c;
}

} // namespace

TEST(PredAbs, AbstractPostAssign) {
  Cfa cfa = load("countdown.mc", 8);
  auto y = *cfa.symbols.find("y");
  auto r = abstract_post(cfa.symbols, Expr::bool_lit(true),
                         Operation::assign("y", y, Expr::int_lit(0)), {parse_bool_expr("y == 0")});
  EXPECT_EQ(shown(r), (std::vector<std::string>{"y == 0"}));
  auto none = abstract_post(cfa.symbols, Expr::bool_lit(true),
                            Operation::assign("y", y, Expr::int_lit(0)), {});
  EXPECT_TRUE(none.literals.empty());
  EXPECT_EQ(to_string(none.formula()), "true");
}

TEST(PredAbs, AbstractPostHavocAndAssume) {
  Cfa cfa = load("countdown.mc", 4);
  auto x = *cfa.symbols.find("x");
  auto p = parse_bool_expr("x > 0");
  EXPECT_TRUE(abstract_post(cfa.symbols, p, Operation::havoc("x", x), {p}).literals.empty());
  auto r = abstract_post(cfa.symbols, Expr::bool_lit(true),
                         Operation::assume(mk_not(p), false), {p});
  EXPECT_EQ(shown(r), (std::vector<std::string>{"!x > 0"}));
}

TEST(PredAbs, LoopBodyPreservesSum) {
  Cfa cfa = load("countdown.mc", 8);
  int head = cfa.loop_heads.at(0);
  std::vector<Operation> body;
  int loc = head;
  do {
    const Edge *next = nullptr;
    for (int e : cfa.out_edges[loc])
      if (cfa.edges[e].op.kind != OpKind::Assume || cfa.edges[e].op.then_branch)
        next = &cfa.edges[e];
    ASSERT_NE(next, nullptr);
    body.push_back(next->op);
    loc = next->dst;
  } while (loc != head);
  ASSERT_EQ(body.size(), 3u);
  ExprPtr inv = parse_bool_expr("n == x + y");
  auto r = abstract_post(cfa.symbols, inv, body, {inv});
  EXPECT_EQ(shown(r), (std::vector<std::string>{"n == x + y"}));
  // preservation confirmed by enumeration at a small width
  Cfa small = load("countdown.mc", 4);
  Executor ex(small);
  int edges[3];
  loc = small.loop_heads.at(0);
  for (int i = 0; i < 3; ++i) {
    for (int e : small.out_edges[loc])
      if (small.edges[e].op.kind != OpKind::Assume || small.edges[e].op.then_branch)
        edges[i] = e;
    loc = small.edges[edges[i]].dst;
  }
  for (uint64_t n = 0; n < 16; ++n)
    for (uint64_t x = 0; x < 16; ++x)
      for (uint64_t y = 0; y < 16; ++y) {
        if (((x + y) & 15) != n)
          continue;
        std::optional<State> s = State{n, x, y};
        for (int e : edges)
          if (s)
            s = ex.step(e, *s);
        if (s)
          EXPECT_EQ((*s)[0], ((*s)[1] + (*s)[2]) & 15);
      }
}

TEST(PredAbs, RefineInfeasibleErrorPath) {
  Cfa cfa = load("countdown.mc", 8);
  auto prop = extract_property(cfa);
  auto path = edges_by_line(cfa, {{2, "n = nondet()"},
                                  {3, "x = n"},
                                  {3, "y = 0"},
                                  {4, "assume(!(x > 0))"}});
  auto r = cegar_refine(cfa, prop, path, {});
  EXPECT_FALSE(r.counterexample);
  auto &ps = r.predicates.predicates[cfa.loop_heads.at(0)];
  std::vector<std::string> got;
  for (const auto &p : ps)
    got.push_back(to_string(p));
  EXPECT_NE(std::find(got.begin(), got.end(), "n == y"), got.end());
  EXPECT_NE(std::find(got.begin(), got.end(), "x > 0"), got.end());
}

TEST(PredAbs, RefineFeasiblePath) {
  Cfa cfa = load("countdown_unsafe.mc", 8);
  auto prop = extract_property(cfa);
  auto path = edges_by_line(cfa, {{2, "n = nondet()"},
                                  {3, "x = n"},
                                  {3, "y = 0"},
                                  {4, "assume(x > 0)"},
                                  {5, "x = x - 1"},
                                  {6, "y = y + 1"},
                                  {4, "assume(!(x > 0))"}});
  auto r = cegar_refine(cfa, prop, path, {});
  ASSERT_TRUE(r.counterexample);
  EXPECT_TRUE(replay(cfa, *r.counterexample));
}

TEST(PredAbs, RefineContradiction) {
  Cfa cfa = parse("int main() {\n  unsigned int x;\n  x = nondet();\n  while (x > 0) {\n"
                  "    if (!(x > 0)) { Error: return 1; }\n    x = x - 1;\n  }\n  return 0;\n}\n",
                  8);
  auto prop = extract_property(cfa);
  auto path = edges_by_line(cfa, {{3, "x = nondet()"}, {4, "assume(x > 0)"}});
  path.push_back(cfa.out_edges[cfa.edges[path.back()].dst].at(0));
  auto r = cegar_refine(cfa, prop, path, {});
  EXPECT_FALSE(r.counterexample);
  std::vector<std::string> got;
  for (const auto &p : r.predicates.predicates[cfa.loop_heads.at(0)])
    got.push_back(to_string(p));
  EXPECT_EQ(got, (std::vector<std::string>{"x > 0"}));
}

TEST(PredAbs, InjectSplitsConjunctions) {
  Cfa cfa = load("countdown.mc", 8);
  Precision prec;
  inject_predicates(prec, {witness_with(cfa, "n >= y && n == x + y")}, cfa);
  auto &ps = prec.predicates[cfa.loop_heads.at(0)];
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(to_string(ps[0]), "n >= y");
  EXPECT_EQ(to_string(ps[1]), "n == x + y");
  Precision before = prec;
  inject_predicates(prec, {skeleton_witness(cfa, {}, "trivial")}, cfa);
  EXPECT_EQ(prec.size(), before.size());
}

TEST(PredAbs, InjectedInvariantProves) {
  Cfa cfa = load("countdown.mc", 8);
  PredAbsMaster m;
  m.inject({witness_with(cfa, "n == x + y")});
  m.close_inbox();
  auto v = m.run(cfa, extract_property(cfa), quick(8));
  EXPECT_EQ(v.verdict, Verdict::True) << v.detail;
  ASSERT_TRUE(v.witness);
  // the emitted regions are genuine invariants at a small width
  Cfa small = load("countdown.mc", 4);
  auto m2 = match_to_cfa(*v.witness, cfa);
  for (const auto &li : m2.invariants)
    EXPECT_EQ(holds_at(small, li.invariant, li.loop_head), std::optional<bool>(true))
        << to_string(li.invariant);
}

TEST(PredAbs, StandaloneIsSound) {
  Cfa cfa = load("countdown.mc", 4);
  auto prop = extract_property(cfa);
  PredAbsMaster m;
  m.close_inbox();
  auto v = m.run(cfa, prop, quick(6));
  EXPECT_NE(v.verdict, Verdict::False);
  if (v.verdict == Verdict::True)
    EXPECT_EQ(brute_force_verify(cfa, prop).verdict, Verdict::True);
}

TEST(PredAbs, StandaloneUnsafe) {
  Cfa cfa = load("countdown_unsafe.mc", 8);
  PredAbsMaster m;
  m.close_inbox();
  auto v = m.run(cfa, extract_property(cfa), quick(16));
  ASSERT_EQ(v.verdict, Verdict::False) << v.detail;
  EXPECT_TRUE(replay(cfa, *v.counterexample));
}

TEST(PredAbs, WrongInjectionScreenedOut) {
  // x - y != 0 is false at the head, yet its atom is exactly the predicate
  // the proof needs
  Cfa cfa = parse(R"(int main() {
  unsigned int n = nondet();
  unsigned int x = n, y = n;
  while (x > 0) {
    x--;
    y--;
  }
  if (!(y == 0)) { Error: return 1; }
  return 0;
}
)");
  auto prop = extract_property(cfa);
  auto run = [&](bool validate) {
    PredAbsMaster m;
    m.inject({skeleton_witness(cfa, {{cfa.loop_heads[0], parse_bool_expr("x - y != 0")}},
                               "wrong")});
    m.close_inbox();
    MasterConfig c = quick(8);
    c.validate_injections = validate;
    return m.run(cfa, prop, c).verdict;
  };
  EXPECT_EQ(run(true), Verdict::Unknown);
  EXPECT_EQ(run(false), Verdict::True);
}
