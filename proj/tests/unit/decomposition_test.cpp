// Copyright 2026 The yr Authors
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

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "decomposition/ghd.hpp"
#include "decomposition/join_tree.hpp"
#include "testkit.hpp"

namespace yr {
namespace {

// Variables abbreviated: s student, p program, c cid, g grade, f faculty,
// n num_semesters.
Hypergraph university() {
  return Hypergraph({{"enrolled", {"s", "p"}},
                     {"exams", {"c", "s", "g"}},
                     {"courses", {"c", "f"}},
                     {"tutors", {"c", "s", "n"}}});
}

JoinTree tree_from(const Hypergraph& h, const std::string& root,
                   const std::vector<std::pair<std::string, std::string>>& edges) {
  JoinTree t;
  t.add_node(root, {NodeLabel::Kind::BaseAtom, root}, h.edge(root));
  for (const auto& [p, c] : edges) t.add_node(c, {NodeLabel::Kind::BaseAtom, c}, h.edge(c), p);
  return t;
}

Hypergraph triangle() { return Hypergraph({{"r", {"a", "b"}}, {"s", {"b", "c"}}, {"t", {"a", "c"}}}); }

TEST(FlatGyo, UniversityIsDepthOneRootedAtExams) {
  GyoResult r = flat_gyo(university());
  ASSERT_TRUE(r.acyclic());
  EXPECT_EQ(r.tree->root, "exams");
  EXPECT_EQ(r.tree->children("exams"), (std::vector<std::string>{"courses", "enrolled", "tutors"}));
  EXPECT_EQ(r.tree->depth(), 1);
  EXPECT_TRUE(is_valid_join_tree(university(), *r.tree));
}

TEST(JoinTreeValidity, HandBuiltTrees) {
  Hypergraph h = university();
  JoinTree deep = tree_from(h, "enrolled", {{"enrolled", "exams"}, {"exams", "courses"}, {"exams", "tutors"}});
  EXPECT_TRUE(is_valid_join_tree(h, deep));
  EXPECT_EQ(deep.depth(), 2);
  // s occurs in enrolled, exams and tutors but not in courses.
  JoinTree swapped = tree_from(h, "exams", {{"exams", "courses"}, {"courses", "enrolled"}, {"exams", "tutors"}});
  EXPECT_FALSE(is_valid_join_tree(h, swapped));
  // Missing an atom.
  JoinTree partial = tree_from(h, "exams", {{"exams", "courses"}, {"exams", "tutors"}});
  EXPECT_FALSE(is_valid_join_tree(h, partial));
}

TEST(FlatGyo, PathOfFour) {
  Hypergraph h({{"a", {"x1", "x2"}}, {"b", {"x2", "x3"}}, {"c", {"x3", "x4"}}, {"d", {"x4", "x5"}}});
  GyoResult r = flat_gyo(h);
  ASSERT_TRUE(r.acyclic());
  EXPECT_EQ(r.tree->depth(), 2);
  EXPECT_EQ(min_depth_oracle(h), 2);
  EXPECT_TRUE(is_valid_join_tree(h, *r.tree));
}

TEST(FlatGyo, TriangleIsCyclicWithResidual) {
  GyoResult r = flat_gyo(triangle());
  EXPECT_FALSE(r.acyclic());
  EXPECT_EQ(r.residual, triangle());
}

TEST(FlatGyo, DisconnectedInputThrows) {
  Hypergraph h({{"a", {"x"}}, {"b", {"y"}}});
  try {
    flat_gyo(h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DisconnectedInput);
  }
  std::vector<std::string> warnings;
  GyoResult r = build_join_tree(h, &warnings);
  ASSERT_TRUE(r.acyclic());
  EXPECT_EQ(r.tree->root, "a");
  EXPECT_EQ(r.tree->children("a"), (std::vector<std::string>{"b"}));
  EXPECT_FALSE(warnings.empty());
}

TEST(FlatGyo, SingleAndDuplicateEdges) {
  GyoResult one = flat_gyo(Hypergraph({{"a", {"x", "y"}}}));
  ASSERT_TRUE(one.acyclic());
  EXPECT_EQ(one.tree->size(), 1u);
  GyoResult twins = flat_gyo(Hypergraph({{"a", {"x"}}, {"b", {"x"}}}));
  ASSERT_TRUE(twins.acyclic());
  EXPECT_EQ(twins.tree->depth(), 1);
}

TEST(MinDepthOracle, Examples) {
  EXPECT_EQ(min_depth_oracle(university()), 1);
  EXPECT_EQ(min_depth_oracle(Hypergraph({{"a", VertexSet{"x"}}})), 0);
  EXPECT_THROW(min_depth_oracle(triangle()), Error);
  Hypergraph big;
  for (int i = 0; i < 8; ++i) big.add_edge("e" + std::to_string(i), {"x"});
  try {
    min_depth_oracle(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(FlatGyo, MatchesOracleOnRandomAcyclic) {
  testkit::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Hypergraph h = testkit::random_acyclic_hypergraph(rng, testkit::uniform(rng, 1, 6), 8);
    GyoResult r = flat_gyo(h);
    ASSERT_TRUE(r.acyclic()) << h.dump();
    EXPECT_TRUE(is_valid_join_tree(h, *r.tree)) << h.dump();
    EXPECT_EQ(r.tree->depth(), min_depth_oracle(h)) << h.dump();
  }
}

TEST(JoinTree, RerootKeepsValidity) {
  Hypergraph h = university();
  JoinTree t = *flat_gyo(h).tree;
  for (const auto& n : t.nodes()) {
    JoinTree r = reroot(t, n);
    EXPECT_EQ(r.root, n);
    EXPECT_TRUE(is_valid_join_tree(h, r));
  }
  EXPECT_EQ(t.path("courses", "tutors"), (std::vector<std::string>{"courses", "exams", "tutors"}));
}

TEST(Ghd, TriangleWidth) {
  EXPECT_FALSE(find_ghd(triangle(), 1).has_value());
  auto g = find_ghd(triangle(), 2);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->width(), 2u);
  EXPECT_TRUE(validate_ghd(triangle(), *g));
}

TEST(Ghd, AcyclicWidthOneIsSingletonCovers) {
  auto g = find_ghd(university(), 1);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->nodes.size(), 4u);
  for (const auto& n : g->nodes) EXPECT_EQ(n.cover.size(), 1u);
  EXPECT_TRUE(validate_ghd(university(), *g));
}

TEST(Ghd, ArgumentChecks) {
  EXPECT_THROW(find_ghd(triangle(), 0), Error);
  EXPECT_THROW(find_ghd(triangle(), 4), Error);
  Hypergraph big;
  for (int i = 0; i < 13; ++i) big.add_edge("e" + std::to_string(i), {"x" + std::to_string(i), "x" + std::to_string(i + 1)});
  try {
    find_ghd(big, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(Ghd, ValidationRejectsBrokenDecompositions) {
  GHDecomposition g = *find_ghd(triangle(), 2);
  // Edges s and t not contained in any bag.
  GHDecomposition missing;
  missing.nodes = {{"v1", {"a", "b"}, {"r"}}};
  missing.root = "v1";
  EXPECT_FALSE(validate_ghd(triangle(), missing));
  EXPECT_TRUE(validate_ghd(triangle(), g));

  // Bag not covered by its cover.
  GHDecomposition loose;
  loose.nodes = {{"v1", {"a", "b", "c"}, {"r"}}, {"v2", {"a", "c"}, {"t"}}, {"v3", {"b", "c"}, {"s"}}};
  loose.root = "v1";
  loose.parent = {{"v2", "v1"}, {"v3", "v1"}};
  EXPECT_FALSE(validate_ghd(triangle(), loose));

  // Connectedness broken: a in v1 and v3, not in v2.
  GHDecomposition split;
  split.nodes = {{"v1", {"a", "b"}, {"r"}}, {"v2", {"b", "c"}, {"s"}}, {"v3", {"a", "c"}, {"t"}}};
  split.root = "v1";
  split.parent = {{"v2", "v1"}, {"v3", "v2"}};
  EXPECT_FALSE(validate_ghd(triangle(), split));
}

TEST(Ghd, EnumerationIsDistinctAndValid) {
  auto all = enumerate_ghds(triangle(), 2, 50);
  ASSERT_GE(all.size(), 2u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_TRUE(validate_ghd(triangle(), all[i]));
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(all[i] == all[j]);
  }
  auto seeded = enumerate_ghds(triangle(), 2, 50, 99);
  EXPECT_EQ(seeded.size(), all.size());
}

TEST(Ghd, RandomWidthTwoCyclic) {
  testkit::Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    Hypergraph h = testkit::random_width2_cyclic(rng, 8);
    EXPECT_FALSE(find_ghd(h, 1).has_value()) << h.dump();
    auto g = find_ghd(h, 2);
    ASSERT_TRUE(g.has_value()) << h.dump();
    EXPECT_TRUE(validate_ghd(h, *g)) << h.dump();
  }
}

TEST(GhdIo, RoundTrip) {
  GHDecomposition g = *find_ghd(triangle(), 2);
  EXPECT_EQ(read_ghd(write_ghd(g)), g);
  EXPECT_THROW(read_ghd("{not json"), Error);
  EXPECT_THROW(read_ghd(R"({"nodes":[{"id":"v1","bag":["a"],"cover":["r"]}],"edges":[["v1","v9"]],"root":"v1"})"),
               Error);
}

TEST(GhdJoinTree, OwnershipAndFilters) {
  ConjunctiveQuery cq = extract_cq(parse_query("SELECT 1 FROM r, s, t WHERE r.b = s.b AND s.c = t.c AND t.a = r.a"));
  Hypergraph h = build_hypergraph(cq);
  auto g = find_ghd(h, 2);
  ASSERT_TRUE(g.has_value());
  GhdJoinTree gj = ghd_to_join_tree(*g, cq);
  EXPECT_EQ(gj.tree.size(), g->nodes.size());
  std::map<std::string, int> owners;
  for (const auto& v : gj.views)
    for (const auto& src : v.sources)
      if (!src.filter_only) ++owners[src.atom];
  EXPECT_EQ(owners.size(), 3u);
  for (const auto& [atom, n] : owners) EXPECT_EQ(n, 1) << atom;
  for (const auto& n : gj.tree.nodes()) EXPECT_EQ(gj.tree.label.at(n).kind, NodeLabel::Kind::View);

  GHDecomposition bad = *g;
  bad.nodes[0].cover = {"nosuch"};
  EXPECT_THROW(ghd_to_join_tree(bad, cq), Error);
}

}  // namespace
}  // namespace yr
