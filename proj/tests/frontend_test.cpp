#include <gtest/gtest.h>

#include "coopver/cfa.hpp"
#include "test_util.hpp"

using namespace coopver;

namespace {

const Edge *find_edge(const Cfa &cfa, const std::string &op) {
  for (const Edge &e : cfa.edges)
    if (to_string(e.op) == op)
      return &e;
  return nullptr;
}

} // namespace

TEST(Frontend, CountdownStructure) {
  Cfa cfa = test::load("countdown.mc");
  ASSERT_EQ(cfa.loop_heads.size(), 1u);
  int head = cfa.loop_heads[0];
  EXPECT_EQ(cfa.line_of(head), 4);
  // Loop entry from line 3 and back edge from line 6.
  std::vector<int> into_head;
  for (int e : cfa.in_edges[head])
    into_head.push_back(cfa.edges[e].span.start_line);
  std::sort(into_head.begin(), into_head.end());
  EXPECT_EQ(into_head, (std::vector<int>{3, 6}));
  const Edge *err = find_edge(cfa, "Error:");
  ASSERT_NE(err, nullptr);
  EXPECT_EQ(err->span.start_line, 9);
  EXPECT_EQ(cfa.symbols.size(), 3u);
  EXPECT_FALSE(cfa.symbols[0].is_signed);
}

TEST(Frontend, CountdownProperty) {
  Cfa cfa = test::load("countdown.mc");
  SafetyProperty p = extract_property(cfa);
  EXPECT_EQ(cfa.line_of(p.location), 8);
  EXPECT_EQ(to_string(p.condition), "n == y");
  ASSERT_EQ(cfa.property_sites.size(), 1u);
  EXPECT_EQ(cfa.property_sites[0].style, EncodingStyle::ErrorLabel);
  EXPECT_EQ(cfa.property_sites[0].start_line, 8);
  EXPECT_EQ(cfa.property_sites[0].end_line, 9);
}

TEST(Frontend, TrivialProgram) {
  Cfa cfa = test::parse("int main(){return 0;}");
  EXPECT_EQ(cfa.num_locations(), 2u);
  ASSERT_EQ(cfa.edges.size(), 1u);
  EXPECT_EQ(cfa.edges[0].op.kind, OpKind::Return);
  EXPECT_TRUE(cfa.loop_heads.empty());
  EXPECT_THROW(extract_property(cfa), Error);
}

// Hand-built expectation: head --assume(x > 0)--> body --x = x - 1--> head,
// head --assume(!(x > 0))--> exit.
TEST(Frontend, SimpleLoopMatchesHandCfa) {
  Cfa cfa = test::parse("int main(){ int x = 3; while(x>0){x--;} }");
  ASSERT_EQ(cfa.num_locations(), 4u);
  struct E { int src; std::string op; int dst; };
  std::vector<E> want = {{0, "x = 3", 1}, {1, "assume(x > 0)", 2},
                         {1, "assume(!(x > 0))", 3}, {2, "x = x - 1", 1}};
  ASSERT_EQ(cfa.edges.size(), want.size());
  for (size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(cfa.edges[i].src, want[i].src);
    EXPECT_EQ(to_string(cfa.edges[i].op), want[i].op);
    EXPECT_EQ(cfa.edges[i].dst, want[i].dst);
  }
  EXPECT_EQ(cfa.loop_heads, std::vector<int>{1});
  EXPECT_EQ(cfa.exit, 3);
}

TEST(Frontend, Errors) {
  EXPECT_THROW(test::parse("int main(){ x = 1; }"), ParseError);
  EXPECT_THROW(test::parse("int main(){ int x; int x; }"), ParseError);
  EXPECT_THROW(test::parse("int main(){ int f() { return 0; } }"), ParseError);
  EXPECT_THROW(test::parse("int f(){ return 0; } int main(){ return 0; }"), ParseError);
  try {
    test::parse("int main(){\n  int x = 1\n}");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Frontend, PropertyShapes) {
  Cfa unguarded = test::parse("int main(){ int x; ERROR: return 1; }");
  SafetyProperty p = extract_property(unguarded);
  EXPECT_EQ(to_string(p.condition), "false");

  Cfa after = test::parse("int main(){ int x = 5;\n while(x > 0) { x--; }\n"
                          " if(!(x>=0)) { Error: return 1; } return 0; }");
  SafetyProperty q = extract_property(after);
  EXPECT_EQ(to_string(q.condition), "x >= 0");
  EXPECT_EQ(after.line_of(q.location), 3);

  Cfa as = test::parse("int main(){ int x = 5;\n assert(x == 5);\n return 0; }");
  SafetyProperty r = extract_property(as);
  EXPECT_EQ(to_string(r.condition), "x == 5");
  EXPECT_EQ(as.property_sites.at(0).style, EncodingStyle::AssertStmt);

  Cfa ve = test::parse("int main(){ int x = 5;\n if (!(x == 5)) { verifier_error(); }\n }");
  EXPECT_EQ(to_string(extract_property(ve).condition), "x == 5");
  EXPECT_EQ(ve.property_sites.at(0).style, EncodingStyle::VerifierErrorCall);
}

TEST(Frontend, Deterministic) {
  Cfa a = test::load("countdown.mc"), b = test::load("countdown.mc");
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) {
    EXPECT_EQ(a.edges[i].src, b.edges[i].src);
    EXPECT_EQ(a.edges[i].dst, b.edges[i].dst);
    EXPECT_EQ(to_string(a.edges[i].op), to_string(b.edges[i].op));
  }
  EXPECT_EQ(a.program_hash, b.program_hash);
  EXPECT_EQ(a.program_hash.size(), 64u);
}
