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

#include <random>

#include "common/error.hpp"
#include "frontend/conjunctive_query.hpp"
#include "frontend/parsed_query.hpp"
#include "testkit.hpp"

namespace yr {
namespace {

const char* kMinGrade =
    "SELECT exams.student, MIN(exams.grade) FROM exams, courses "
    "WHERE exams.cid = courses.cid AND courses.faculty = 'Biology' GROUP BY exams.student";

const char* kUniversity =
    "SELECT enrolled.program, exams.cid, MIN(exams.grade) FROM exams, courses, enrolled, tutors "
    "WHERE exams.cid = courses.cid AND exams.student = enrolled.student AND exams.cid = tutors.cid "
    "AND courses.faculty = 'ComputerScience' AND exams.student = tutors.student "
    "AND tutors.num_semesters > 1 GROUP BY enrolled.program, exams.cid";

std::string var_of(const ConjunctiveQuery& cq, const std::string& atom, const std::string& attr) {
  for (const auto& b : cq.find_atom(atom)->bindings)
    if (b.attribute == attr) return b.variable;
  return "";
}

TEST(Parser, MinGradeQueryStructure) {
  ParsedQuery pq = parse_query(kMinGrade);
  EXPECT_EQ(pq.from_items.size(), 2u);
  ASSERT_EQ(pq.where_conjuncts.size(), 2u);
  EXPECT_TRUE(pq.where_conjuncts[0].is_join());
  EXPECT_FALSE(pq.where_conjuncts[1].is_join());
  ASSERT_EQ(pq.group_by.size(), 1u);
  ASSERT_EQ(pq.select_items.size(), 2u);
  EXPECT_EQ(pq.select_items[1].kind, SelectItem::Kind::Aggregate);
  EXPECT_EQ(pq.select_items[1].aggregate.func, AggFunc::Min);
}

TEST(Parser, SelectOneIsConstantProjection) {
  ParsedQuery pq = parse_query("SELECT 1 FROM r");
  ASSERT_EQ(pq.select_items.size(), 1u);
  EXPECT_EQ(pq.select_items[0].kind, SelectItem::Kind::Literal);
  EXPECT_EQ(pq.from_items.size(), 1u);
  EXPECT_TRUE(pq.where_conjuncts.empty());
}

TEST(Parser, OuterJoinIsUnsupported) {
  try {
    parse_query("SELECT a FROM r LEFT JOIN s ON r.a = s.a");
    FAIL() << "expected UnsupportedFeature";
  } catch (const UnsupportedFeature& e) {
    EXPECT_EQ(e.construct(), "OUTER JOIN");
  }
}

TEST(Parser, InnerJoinOnIsAccepted) {
  ParsedQuery pq = parse_query("SELECT r.a FROM r INNER JOIN s ON r.a = s.a JOIN t ON s.b = t.b");
  EXPECT_EQ(pq.from_items.size(), 3u);
  EXPECT_EQ(pq.where_conjuncts.size(), 2u);
}

TEST(Parser, SyntaxErrorCarriesPosition) {
  try {
    parse_query("SELECT FROM r");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    EXPECT_EQ(e.token(), "FROM");
  }
  EXPECT_THROW(parse_query("SELECT r.a FROM r WHERE"), SyntaxError);
  EXPECT_THROW(parse_query("SELECT r.a FROM r WHERE r.a = 'open"), SyntaxError);
}

TEST(Parser, RejectsOutsideTheFragment) {
  EXPECT_THROW(parse_query("SELECT r.a FROM r WHERE r.a = 1 OR r.a = 2"), UnsupportedFeature);
  EXPECT_THROW(parse_query("SELECT r.a FROM r WHERE r.a IN (SELECT s.a FROM s)"), Error);
  EXPECT_THROW(parse_query("SELECT r.a FROM r WHERE r.a < s.b"), Error);
}

TEST(Parser, TrailingSemicolonAndCase) {
  ParsedQuery pq = parse_query("select DISTINCT R.A from R;");
  EXPECT_TRUE(pq.distinct);
  EXPECT_EQ(pq.from_items[0].table, "r");
  EXPECT_EQ(pq.select_items[0].column.column, "a");
}

TEST(Extract, MinGradeQuery) {
  ConjunctiveQuery cq = extract_cq(parse_query(kMinGrade));
  ASSERT_EQ(cq.atoms.size(), 2u);
  EXPECT_EQ(var_of(cq, "exams", "cid"), var_of(cq, "courses", "cid"));
  ASSERT_EQ(cq.selections.size(), 1u);
  EXPECT_EQ(cq.selections[0].atom, "courses");
  EXPECT_EQ(cq.selections[0].attribute, "faculty");
  EXPECT_EQ(cq.selections[0].constant, Value(std::string("Biology")));
  ASSERT_EQ(cq.grouping_vars.size(), 1u);
  EXPECT_EQ(cq.grouping_vars[0], var_of(cq, "exams", "student"));
  ASSERT_EQ(cq.aggregates.size(), 1u);
  EXPECT_EQ(cq.aggregates[0].func, AggFunc::Min);
  EXPECT_EQ(cq.aggregates[0].variable, var_of(cq, "exams", "grade"));
  EXPECT_FALSE(cq.aggregates[0].distinct);
}

TEST(Extract, UniversityQueryVariableClasses) {
  ConjunctiveQuery cq = extract_cq(parse_query(kUniversity));
  ASSERT_EQ(cq.atoms.size(), 4u);
  const std::string c = var_of(cq, "exams", "cid");
  EXPECT_EQ(var_of(cq, "courses", "cid"), c);
  EXPECT_EQ(var_of(cq, "tutors", "cid"), c);
  const std::string s = var_of(cq, "exams", "student");
  EXPECT_EQ(var_of(cq, "enrolled", "student"), s);
  EXPECT_EQ(var_of(cq, "tutors", "student"), s);
  EXPECT_NE(c, s);
  ASSERT_EQ(cq.selections.size(), 2u);
  bool faculty = false;
  bool semesters = false;
  for (const auto& sel : cq.selections) {
    faculty |= sel.attribute == "faculty" && sel.cmp == Comparator::Eq;
    semesters |= sel.attribute == "num_semesters" && sel.cmp == Comparator::Gt &&
                 sel.constant == Value(std::int64_t{1});
  }
  EXPECT_TRUE(faculty);
  EXPECT_TRUE(semesters);
}

TEST(Extract, AmbiguousUnqualifiedColumn) {
  Catalog catalog{{"r", {"a", "b"}}, {"s", {"a", "c"}}};
  EXPECT_THROW(
      {
        try {
          extract_cq(parse_query("SELECT a FROM r, s WHERE r.b = s.c"), &catalog);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::AmbiguousColumn);
          throw;
        }
      },
      Error);
  ConjunctiveQuery cq = extract_cq(parse_query("SELECT c FROM r, s WHERE r.a = s.a"), &catalog);
  EXPECT_EQ(cq.output_vars().size(), 1u);
}

TEST(Extract, UnknownTableIsInvalid) {
  try {
    extract_cq(parse_query("SELECT x.a FROM r"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidQuery);
  }
}

TEST(Extract, AliasesMakeSelfJoinsDistinctAtoms) {
  ConjunctiveQuery cq = extract_cq(parse_query("SELECT a.x FROM r AS a, r AS b WHERE a.y = b.x"));
  ASSERT_EQ(cq.atoms.size(), 2u);
  EXPECT_EQ(cq.atoms[0].relation, "r");
  EXPECT_EQ(cq.atoms[1].relation, "r");
  EXPECT_NE(cq.atoms[0].id, cq.atoms[1].id);
}

TEST(Extract, ContradictoryConstantsAreStaticallyEmpty) {
  ConjunctiveQuery cq =
      extract_cq(parse_query("SELECT r.a FROM r, s WHERE r.a = s.a AND r.a = 1 AND s.a = 2"));
  EXPECT_TRUE(cq.statically_empty);
  ConjunctiveQuery ok = extract_cq(parse_query("SELECT r.a FROM r, s WHERE r.a = s.a AND r.a = 1 AND s.a = 1"));
  EXPECT_FALSE(ok.statically_empty);
}

TEST(Extract, SameAtomEqualitySharesVariable) {
  ConjunctiveQuery cq = extract_cq(parse_query("SELECT r.a FROM r WHERE r.a = r.b"));
  EXPECT_EQ(var_of(cq, "r", "a"), var_of(cq, "r", "b"));
}

TEST(Extract, BooleanQuery) {
  ConjunctiveQuery cq = extract_cq(parse_query("SELECT 1 FROM r, s WHERE r.a = s.a"));
  EXPECT_TRUE(cq.is_boolean());
  EXPECT_TRUE(cq.projection_vars().empty());
}

TEST(Extract, ProjectToJoinVarsKeepsOneColumnPerClass) {
  ConjunctiveQuery cq = extract_cq(parse_query(kUniversity));
  ConjunctiveQuery p = project_to_join_vars(cq);
  EXPECT_FALSE(p.is_aggregated());
  EXPECT_EQ(p.output_vars().size(), 2u);  // cid and student classes
}

TEST(Canonical, RoundTripOnExamples) {
  for (const char* sql : {kMinGrade, kUniversity, "SELECT 1 FROM r, s WHERE r.a = s.a",
                          "SELECT DISTINCT r.a, COUNT(DISTINCT s.b) FROM r JOIN s ON r.a = s.a GROUP BY r.a "
                          "HAVING COUNT(DISTINCT s.b) > 2",
                          "SELECT r.a FROM r WHERE r.b = 'it''s'"}) {
    ConjunctiveQuery cq = extract_cq(parse_query(sql));
    const std::string once = render_canonical_sql(cq);
    const std::string twice = render_canonical_sql(extract_cq(parse_query(once)));
    EXPECT_EQ(once, twice) << sql;
  }
}

TEST(Canonical, RoundTripOnRandomQueries) {
  testkit::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    testkit::Skeleton s = testkit::random_acyclic_skeleton(rng, 1, 6, 0, 3, 8);
    testkit::QueryShape q;
    auto vars = s.variables();
    q.outputs.push_back(vars[static_cast<std::size_t>(testkit::uniform(rng, 0, static_cast<int>(vars.size()) - 1))]);
    q.distinct = testkit::coin(rng, 0.3);
    const std::string sql = testkit::render_sql(s, q);
    ConjunctiveQuery cq = extract_cq(parse_query(sql));
    const std::string once = render_canonical_sql(cq);
    EXPECT_EQ(once, render_canonical_sql(extract_cq(parse_query(once)))) << sql;
  }
}

}  // namespace
}  // namespace yr
