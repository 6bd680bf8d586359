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

#include "coopver/witness.hpp"
#include "test_util.hpp"

using namespace coopver;
using coopver::test::data_path;
using coopver::test::load;

namespace {

int head_of(const Cfa &cfa) {
  EXPECT_EQ(cfa.loop_heads.size(), 1u);
  return cfa.loop_heads.at(0);
}

} // namespace

TEST(Witness, GoldenFileMatchesLoopHead) {
  Cfa cfa = load("countdown.mc", 8);
  Witness w = read_graphml(read_text_file(data_path("countdown_witness.graphml")));
  EXPECT_EQ(w.initial, "q0");
  ASSERT_NE(w.state("q3"), nullptr);
  EXPECT_EQ(to_string(w.state("q3")->invariant), "n == x + y");
  EXPECT_EQ(w.state("q3")->scope, "main");
  EXPECT_EQ(w.transitions[1].guard.type, GuardType::EnterLoopHead);
  EXPECT_EQ(w.transitions[1].guard.startline, 3);

  MatchResult m = match_to_cfa(w, cfa);
  ASSERT_EQ(m.invariants.size(), 1u);
  EXPECT_EQ(m.invariants[0].loop_head, head_of(cfa));
  EXPECT_EQ(cfa.line_of(m.invariants[0].loop_head), 4);
  EXPECT_EQ(to_string(m.invariants[0].invariant), "n == x + y");
  EXPECT_TRUE(m.diagnostics.empty());
}

TEST(Witness, SkeletonRoundTrip) {
  Cfa cfa = load("countdown.mc", 8);
  int head = head_of(cfa);
  Witness w = skeleton_witness(cfa, {{head, parse_bool_expr("n >= y")}}, "test");
  std::string doc = write_graphml(w);
  Witness back = read_graphml(doc);
  EXPECT_EQ(write_graphml(back), doc);
  EXPECT_FALSE(is_trivial_witness(back));

  MatchResult m = match_to_cfa(back, cfa);
  ASSERT_EQ(m.invariants.size(), 1u);
  EXPECT_EQ(m.invariants[0].loop_head, head);
  EXPECT_EQ(to_string(m.invariants[0].invariant), "n >= y");
}

TEST(Witness, SkeletonGuardsAtLoopHead) {
  Cfa cfa = load("countdown.mc", 8);
  Witness w = skeleton_witness(cfa, {}, "test");
  std::vector<int> lines;
  for (const auto &t : w.transitions)
    if (t.guard.type == GuardType::EnterLoopHead)
      lines.push_back(t.guard.startline);
  EXPECT_EQ(lines, (std::vector<int>{3, 6}));
  EXPECT_TRUE(is_trivial_witness(w));
}

TEST(Witness, EscapesOperators) {
  Cfa cfa = load("countdown.mc", 8);
  Witness w = skeleton_witness(cfa, {{head_of(cfa), parse_bool_expr("x < 5 && y > 0")}}, "t");
  std::string doc = write_graphml(w);
  EXPECT_NE(doc.find("x &lt; 5 &amp;&amp; y &gt; 0"), std::string::npos);
  EXPECT_EQ(to_string(read_graphml(doc).state("q" + std::to_string(head_of(cfa)))->invariant),
            "x < 5 && y > 0");
}

TEST(Witness, ShiftedLinesMatchNothing) {
  Cfa cfa = load("countdown.mc", 8);
  Witness w = skeleton_witness(cfa, {{head_of(cfa), parse_bool_expr("n >= y")}}, "t");
  for (auto &t : w.transitions) {
    t.guard.startline += 100;
    t.guard.endline += 100;
  }
  MatchResult m = match_to_cfa(w, cfa);
  EXPECT_TRUE(m.invariants.empty());
  ASSERT_FALSE(m.diagnostics.empty());
  EXPECT_NE(m.diagnostics[0].find("no witness transition"), std::string::npos);
}

TEST(Witness, HashMismatch) {
  Cfa cfa = load("countdown.mc", 8);
  Witness w = skeleton_witness(cfa, {{head_of(cfa), parse_bool_expr("n >= y")}}, "t");
  w.metadata.program_hash = std::string(64, '0');
  EXPECT_THROW(match_to_cfa(w, cfa), Error);
  MatchOptions o;
  o.force = true;
  MatchResult m = match_to_cfa(w, cfa, o);
  EXPECT_EQ(m.invariants.size(), 1u);
  EXPECT_FALSE(m.diagnostics.empty());
}

TEST(Witness, MalformedDocuments) {
  EXPECT_THROW(read_graphml("<graphml><graph>"), Error);
  EXPECT_THROW(read_graphml("<graphml><graph edgedefault=\"directed\"/></graphml>"), Error);
  EXPECT_THROW(read_graphml("<graphml><graph><node id=\"a\"><data key=\"entry\">true</data>"
                            "<data key=\"invariant\">x +</data></node></graph></graphml>"),
               Error);
  EXPECT_THROW(read_graphml("<graphml><graph><node id=\"a\"><data key=\"entry\">true</data>"
                            "</node><edge source=\"a\" target=\"b\"/></graph></graphml>"),
               Error);
}

TEST(Witness, SinkStatesPrune) {
  Cfa cfa = load("countdown.mc", 8);
  int head = head_of(cfa);
  Witness w = skeleton_witness(cfa, {{head, parse_bool_expr("n >= y")}}, "t");
  for (auto &t : w.transitions)
    if (t.guard.type == GuardType::EnterLoopHead && t.guard.startline == 3)
      t.target = "qs";
  WitnessState sink;
  sink.id = "qs";
  sink.sink = true;
  w.states.push_back(sink);
  EXPECT_TRUE(match_to_cfa(w, cfa).invariants.empty());
}
