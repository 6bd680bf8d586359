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

#include <thread>

#include "coopver/helpers.hpp"
#include "coopver/kinduction.hpp"
#include "coopver/oracle.hpp"
#include "test_util.hpp"

using namespace coopver;
using coopver::test::load;
using coopver::test::parse;

namespace {

LocatedInvariant at_loop(const Cfa &cfa, const std::string &inv) {
  return {cfa.loop_heads.at(0), parse_bool_expr(inv), "test"};
}

Witness witness_with(const Cfa &cfa, const std::string &inv) {
  return skeleton_witness(cfa, {{cfa.loop_heads.at(0), parse_bool_expr(inv)}}, "test");
}

MasterConfig quick(int cap) {
  MasterConfig c;
  c.bound_cap = cap;
  c.builtin_aux = false;
  return c;
}

} // namespace

TEST(KInduction, BmcSafeWithinBound) {
  Cfa cfa = load("countdown.mc", 4);
  auto prop = extract_property(cfa);
  BruteForceOptions bo;
  bo.loop_bound = 3; // two iterations are three loop-head entries
  EXPECT_EQ(brute_force_verify(cfa, prop, bo).verdict, Verdict::True);
  EXPECT_EQ(bmc_check(cfa, prop, 2).status, BmcStatus::Safe);
}

TEST(KInduction, BmcFindsShallowViolation) {
  Cfa cfa = load("countdown_unsafe.mc", 8);
  auto prop = extract_property(cfa);
  auto r = bmc_check(cfa, prop, 1);
  ASSERT_EQ(r.status, BmcStatus::Counterexample);
  ASSERT_TRUE(r.counterexample);
  EXPECT_TRUE(replay(cfa, *r.counterexample));
  auto n = *cfa.symbols.find("n");
  EXPECT_EQ(r.counterexample->path.steps.back().state[n], 1u);
  // the oracle's shortest violation also uses a single iteration
  BruteForceOptions bo;
  bo.loop_bound = 2;
  EXPECT_EQ(brute_force_verify(cfa, prop, bo).verdict, Verdict::False);
}

TEST(KInduction, BmcLoopFree) {
  Cfa cfa = parse("int main() {\n  unsigned int a;\n  a = nondet();\n  a = a * 0;\n"
                  "  if (!(a == 0)) { Error: return 1; }\n  return 0;\n}\n",
                  8);
  auto prop = extract_property(cfa);
  for (int k : {1, 2, 5})
    EXPECT_EQ(bmc_check(cfa, prop, k).status, BmcStatus::Safe);
  EXPECT_EQ(induction_step(cfa, prop, 1, {}), InductionStatus::Proven);
}

TEST(KInduction, InductionWithAndWithoutAux) {
  Cfa cfa = load("countdown.mc", 8);
  auto prop = extract_property(cfa);
  EXPECT_EQ(induction_step(cfa, prop, 1, {at_loop(cfa, "n == x + y")}), InductionStatus::Proven);
  EXPECT_EQ(induction_step(cfa, prop, 1, {}), InductionStatus::NotInductive);
  EXPECT_EQ(induction_step(cfa, prop, 1, {at_loop(cfa, "true")}), InductionStatus::NotInductive);
  EXPECT_EQ(induction_step(cfa, prop, 3, {at_loop(cfa, "n == x + y")}), InductionStatus::Proven);
}

TEST(KInduction, ValidateInvariant) {
  Cfa cfa = load("countdown.mc", 8);
  EXPECT_TRUE(validate_invariant(cfa, at_loop(cfa, "n == x + y"), {}));
  EXPECT_FALSE(validate_invariant(cfa, at_loop(cfa, "n == y"), {}));
  EXPECT_TRUE(validate_invariant(cfa, at_loop(cfa, "x >= 0"), {}));
  EXPECT_TRUE(validate_invariant(cfa, at_loop(cfa, "n >= y"), {at_loop(cfa, "n == x + y")}));
  // the oracle agrees on a small width
  Cfa small = load("countdown.mc", 4);
  for (const char *inv : {"n == x + y", "n == y", "x >= 0", "n >= y", "y <= 3"}) {
    bool holds = *holds_at(small, parse_bool_expr(inv), small.loop_heads.at(0));
    if (validate_invariant(small, at_loop(small, inv), {}))
      EXPECT_TRUE(holds) << inv;
  }
}

TEST(KInduction, StandaloneSmallWidth) {
  Cfa cfa = load("countdown.mc", 4);
  auto prop = extract_property(cfa);
  KInductionMaster m;
  m.close_inbox();
  MasterConfig c;
  auto v = m.run(cfa, prop, c);
  EXPECT_EQ(v.verdict, Verdict::True) << v.detail;
  EXPECT_EQ(brute_force_verify(cfa, prop).verdict, Verdict::True);
  ASSERT_TRUE(v.witness);
  bool logged = false;
  for (const auto &l : m.log())
    logged |= l.rfind("k=", 0) == 0 && l.find("status=proven") != std::string::npos;
  EXPECT_TRUE(logged);
}

TEST(KInduction, StandaloneUnsafe) {
  Cfa cfa = load("countdown_unsafe.mc", 8);
  KInductionMaster m;
  m.close_inbox();
  auto v = m.run(cfa, extract_property(cfa), quick(8));
  ASSERT_EQ(v.verdict, Verdict::False);
  ASSERT_TRUE(v.counterexample);
  EXPECT_TRUE(replay(cfa, *v.counterexample));
}

TEST(KInduction, HelpRequestedImmediately) {
  Cfa cfa = load("countdown.mc", 8);
  KInductionMaster m;
  m.close_inbox();
  MasterConfig c = quick(2);
  c.timer_m = 0;
  m.run(cfa, extract_property(cfa), c);
  EXPECT_TRUE(m.requests_help());
  EXPECT_TRUE(m.state().requests_help);
}

TEST(KInduction, InjectionProves) {
  Cfa cfa = load("countdown.mc", 8);
  auto prop = extract_property(cfa);
  {
    KInductionMaster m;
    m.close_inbox();
    EXPECT_EQ(m.run(cfa, prop, quick(3)).verdict, Verdict::Unknown);
  }
  KInductionMaster m;
  m.inject({witness_with(cfa, "n == x + y")});
  m.close_inbox();
  auto v = m.run(cfa, prop, quick(3));
  EXPECT_EQ(v.verdict, Verdict::True) << v.detail;
  auto st = m.state();
  ASSERT_EQ(st.aux_invariants.size(), 1u);
  EXPECT_EQ(to_string(st.aux_invariants[0].invariant), "n == x + y");
  auto back = match_to_cfa(*v.witness, cfa);
  ASSERT_EQ(back.invariants.size(), 1u);
}

TEST(KInduction, InjectionIntoRunningMaster) {
  Cfa cfa = load("countdown.mc", 8);
  KInductionMaster m;
  MasterConfig c = quick(3);
  c.timeout = 30;
  VerifierVerdict v;
  std::thread t([&] { v = m.run(cfa, extract_property(cfa), c); });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  m.inject({witness_with(cfa, "n == x + y")});
  m.close_inbox();
  t.join();
  EXPECT_EQ(v.verdict, Verdict::True) << v.detail;
}

TEST(KInduction, WrongAndTrivialInjectionsIgnored) {
  Cfa cfa = load("countdown.mc", 8);
  KInductionMaster m;
  m.inject({witness_with(cfa, "n == y"), skeleton_witness(cfa, {}, "trivial")});
  m.close_inbox();
  auto v = m.run(cfa, extract_property(cfa), quick(3));
  EXPECT_EQ(v.verdict, Verdict::Unknown);
  EXPECT_TRUE(m.state().aux_invariants.empty());
}

TEST(KInduction, StopIsHonored) {
  Cfa cfa = load("countdown.mc", 8);
  KInductionMaster m;
  MasterConfig c = quick(3);
  VerifierVerdict v;
  std::thread t([&] { v = m.run(cfa, extract_property(cfa), c); });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  m.stop();
  t.join();
  EXPECT_EQ(v.verdict, Verdict::Unknown);
  EXPECT_EQ(v.detail, "stopped");
}
