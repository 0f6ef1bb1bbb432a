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

#include <filesystem>
#include <fstream>

#include "common/error.hpp"
#include "engine/evaluate.hpp"
#include "pipeline/pipeline.hpp"
#include "testkit.hpp"

namespace yr {
namespace {

Value I(std::int64_t v) { return Value(v); }
Value S(const char* s) { return Value(std::string(s)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

TEST(Csv, TypesQuotingAndNulls) {
  Relation r = parse_csv("A,b,c\n1,x,\n-7,\"a,b\",\"12\"\n\"q\"\"q\",,3\n");
  EXPECT_EQ(r.schema(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.cardinality(), 3u);
  EXPECT_EQ(r.count({I(1), S("x"), Value()}), 1u);
  EXPECT_EQ(r.count({I(-7), S("a,b"), S("12")}), 1u);
  EXPECT_EQ(r.count({S("q\"q"), Value(), I(3)}), 1u);
}

TEST(Csv, Errors) {
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1\n"); }), ErrorCode::ArityMismatch);
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1,2\n", std::vector<std::string>{"a", "c"}); }), ErrorCode::SchemaMismatch);
  EXPECT_EQ(code_of([] { load_csv("/nonexistent/x.csv"); }), ErrorCode::IoError);
}

TEST(Csv, LoadDatabaseAndCatalog) {
  auto dir = std::filesystem::temp_directory_path() / "yr_engine_test_db";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "r.csv") << "a,b\n1,2\n";
  Catalog c = load_catalog(dir.string());
  EXPECT_EQ(c.at("r"), (std::vector<std::string>{"a", "b"}));
  ConjunctiveQuery cq = parse_sql("SELECT r.a FROM r, s WHERE r.b = s.b");
  EXPECT_EQ(code_of([&] { load_database(dir.string(), cq); }), ErrorCode::MissingRelation);
  std::ofstream(dir / "s.csv") << "b\n2\n";
  EXPECT_EQ(load_database(dir.string(), cq).size(), 2u);
  std::filesystem::remove_all(dir);
}

TEST(Operators, SemiJoinKeepsMultiplicities) {
  Relation l({"a", "b"});
  l.add({I(1), I(1)}, 3);
  l.add({I(2), I(1)});
  l.add({Value(), I(1)});
  Relation r({"a"});
  r.add({I(1)}, 5);
  r.add({Value()});
  Relation out = semi_join(l, r, {{"a", "a"}});
  EXPECT_EQ(out.cardinality(), 3u);
  EXPECT_EQ(out.count({I(1), I(1)}), 3u);
  EXPECT_EQ(semi_join(l, Relation({"a"}), {}).cardinality(), 0u);
  EXPECT_EQ(semi_join(l, r, {}).cardinality(), 5u);
  EXPECT_EQ(code_of([&] { semi_join(l, r, {{"zz", "a"}}); }), ErrorCode::UnknownAttribute);
}

TEST(Operators, NaturalJoinMultipliesCounts) {
  Relation l({"a", "b"});
  l.add({I(1), I(2)}, 2);
  Relation r({"b", "c"});
  r.add({I(2), I(3)}, 3);
  r.add({I(2), I(4)});
  Relation j = natural_join(l, r);
  EXPECT_EQ(j.schema(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(j.count({I(1), I(2), I(3)}), 6u);
  EXPECT_EQ(j.cardinality(), 8u);
  EXPECT_EQ(natural_join(Relation::unit(), l).cardinality(), 2u);
}

TEST(Operators, AggregateMinGrade) {
  Relation r({"student", "grade"});
  r.add({S("s1"), I(3)});
  r.add({S("s1"), I(5)});
  r.add({S("s2"), I(4)});
  Relation out = aggregate(r, {"student"}, {{AggFunc::Min, "grade", false, "m"}});
  EXPECT_EQ(out.cardinality(), 2u);
  EXPECT_EQ(out.count({S("s1"), I(3)}), 1u);
  EXPECT_EQ(out.count({S("s2"), I(4)}), 1u);
}

TEST(Operators, AggregateFunctions) {
  Relation r({"x"});
  r.add({I(1)}, 2);
  r.add({I(2)});
  r.add({Value()});
  auto one = [&](AggFunc f, bool distinct) {
    Relation out = aggregate(r, {}, {{f, "x", distinct, "v"}});
    return out.sorted_rows().at(0).first.at(0);
  };
  EXPECT_EQ(one(AggFunc::Sum, false), I(4));
  EXPECT_EQ(one(AggFunc::Sum, true), I(3));
  EXPECT_EQ(one(AggFunc::Count, false), I(3));
  EXPECT_EQ(one(AggFunc::Count, true), I(2));
  EXPECT_EQ(one(AggFunc::Avg, false), S("1.333333"));
  EXPECT_EQ(one(AggFunc::Max, false), I(2));
  Relation empty = aggregate(Relation({"x"}), {}, {{AggFunc::Count, "x", false, "c"}, {AggFunc::Min, "x", false, "m"}});
  ASSERT_EQ(empty.cardinality(), 1u);
  EXPECT_EQ(empty.count({I(0), Value()}), 1u);
  EXPECT_EQ(aggregate(Relation({"x"}), {"x"}, {}).cardinality(), 0u);
}

TEST(Operators, AvgRoundsHalfAwayFromZero) {
  Relation r({"x"});
  r.add({I(-1)});
  r.add({I(-2)});
  r.add({I(-2)});
  // -5/3 = -1.6666666...
  EXPECT_EQ(aggregate(r, {}, {{AggFunc::Avg, "x", false, "v"}}).sorted_rows()[0].first[0], S("-1.666667"));
}

TEST(Operators, TypeErrors) {
  Relation r({"x"});
  r.add({I(1)});
  r.add({S("a")});
  EXPECT_EQ(code_of([&] { aggregate(r, {}, {{AggFunc::Min, "x", false, "v"}}); }), ErrorCode::TypeError);
  EXPECT_EQ(code_of([&] { aggregate(r, {}, {{AggFunc::Sum, "x", false, "v"}}); }), ErrorCode::TypeError);
  Relation big({"x"});
  big.add({I(INT64_MAX)});
  big.add({I(1)});
  EXPECT_EQ(code_of([&] { aggregate(big, {}, {{AggFunc::Sum, "x", false, "v"}}); }), ErrorCode::TypeError);
}

TEST(Operators, ArityAndBagEquality) {
  Relation r({"a", "b"});
  EXPECT_EQ(code_of([&] { r.add({I(1)}); }), ErrorCode::ArityMismatch);
  Relation x({"a", "b"});
  x.add({I(1), I(2)}, 2);
  Relation y({"b", "a"});
  y.add({I(2), I(1)}, 2);
  EXPECT_TRUE(bag_equal(x, y));
  y.add({I(2), I(1)});
  EXPECT_FALSE(bag_equal(x, y));
}

Database exams_db() {
  Database db;
  Relation exams({"cid", "student", "grade"});
  exams.add({S("c1"), S("s1"), I(3)});
  exams.add({S("c1"), S("s1"), I(5)});
  exams.add({S("c2"), S("s2"), I(4)});
  Relation courses({"cid", "faculty"});
  courses.add({S("c1"), S("Biology")});
  courses.add({S("c2"), S("Law")});
  db.emplace("exams", exams);
  db.emplace("courses", courses);
  return db;
}

const char* kMinGrade =
    "SELECT exams.student, MIN(exams.grade) FROM exams, courses "
    "WHERE exams.cid = courses.cid AND courses.faculty = 'Biology' GROUP BY exams.student";

TEST(Evaluate, NaiveMinGrade) {
  Relation r = eval_naive(parse_sql(kMinGrade), exams_db());
  EXPECT_EQ(r.cardinality(), 1u);
  EXPECT_EQ(r.count({S("s1"), I(3)}), 1u);
}

TEST(Evaluate, ZeroMAPlanMinGrade) {
  Compiled c = compile(parse_sql(kMinGrade), {});
  ASSERT_EQ(c.mode, PlanMode::ZeroMA);
  PlanResult pr = eval_plan(c.plan, exams_db());
  EXPECT_EQ(pr.result.cardinality(), 1u);
  EXPECT_EQ(pr.result.count({S("s1"), I(3)}), 1u);
  EXPECT_EQ(pr.handles.at("exams_sjup").cardinality(), 2u);
}

TEST(Evaluate, MissingRelationAndBadReference) {
  Database db = exams_db();
  db.erase("courses");
  EXPECT_EQ(code_of([&] { eval_naive(parse_sql(kMinGrade), db); }), ErrorCode::MissingRelation);
  Compiled c = compile(parse_sql(kMinGrade), {});
  StagePlan broken = c.plan;
  std::get<SemijoinBody>(broken.statements[2].body).reducers[0].handle = "nowhere";
  EXPECT_EQ(code_of([&] { eval_plan(broken, exams_db()); }), ErrorCode::PlanReferenceError);
}

TEST(Evaluate, SemijoinsNeverGrowTheirInput) {
  testkit::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    testkit::Skeleton s = testkit::random_acyclic_skeleton(rng, 2, 6, 0, 2, 6);
    testkit::QueryShape q;
    q.outputs = {s.variables().front()};
    Compiled c = compile(parse_sql(testkit::render_sql(s, q)), {ModeChoice::Full});
    PlanResult pr = eval_plan(c.plan, testkit::random_database(s, rng, 6, 30));
    for (const auto& st : pr.stats.statements)
      if (st.stage == Stage::SemijoinUp || st.stage == Stage::SemijoinDown) EXPECT_LE(st.rows, st.input_rows);
  }
}

TEST(Evaluate, ShortCircuitOnEmptyRoot) {
  Database db = exams_db();
  PipelineOptions o;
  o.mode = ModeChoice::Full;
  Compiled c = compile(parse_sql("SELECT exams.student, courses.faculty FROM exams, courses "
                                 "WHERE exams.cid = courses.cid AND courses.faculty = 'Music'"),
                       o);
  PlanResult pr = eval_plan(c.plan, db, {true});
  EXPECT_TRUE(pr.stats.short_circuited);
  EXPECT_EQ(pr.result.cardinality(), 0u);
  EXPECT_TRUE(bag_equal(pr.result, eval_plan(c.plan, db).result));
}

TEST(Evaluate, FullReducerUniversityRandom) {
  const char* sql =
      "SELECT enrolled.program, exams.cid, MIN(exams.grade) FROM exams, courses, enrolled, tutors "
      "WHERE exams.cid = courses.cid AND exams.student = enrolled.student AND exams.cid = tutors.cid "
      "AND courses.faculty = 'ComputerScience' AND exams.student = tutors.student "
      "AND tutors.num_semesters > 1 GROUP BY enrolled.program, exams.cid";
  PipelineOptions o;
  o.mode = ModeChoice::Full;
  Compiled c = compile(parse_sql(sql), o);
  testkit::Rng rng(17);
  const char* faculties[] = {"ComputerScience", "Law"};
  for (int i = 0; i < 30; ++i) {
    Database db;
    Relation exams({"cid", "student", "grade"});
    Relation courses({"cid", "faculty"});
    Relation enrolled({"student", "program"});
    Relation tutors({"student", "cid", "num_semesters"});
    for (int k = 0; k < 20; ++k) {
      exams.add({I(testkit::uniform(rng, 0, 4)), I(testkit::uniform(rng, 0, 4)), I(testkit::uniform(rng, 1, 6))});
      courses.add({I(testkit::uniform(rng, 0, 4)), S(faculties[testkit::uniform(rng, 0, 1)])});
      enrolled.add({I(testkit::uniform(rng, 0, 4)), I(testkit::uniform(rng, 0, 2))});
      tutors.add({I(testkit::uniform(rng, 0, 4)), I(testkit::uniform(rng, 0, 4)), I(testkit::uniform(rng, 0, 3))});
    }
    db.emplace("exams", exams);
    db.emplace("courses", courses);
    db.emplace("enrolled", enrolled);
    db.emplace("tutors", tutors);
    PlanResult pr = eval_plan(c.plan, db);
    EXPECT_TRUE(full_reducer_holds(c.plan, pr.handles, Stage::SemijoinDown, c.cq, db));
    EXPECT_TRUE(bag_equal(pr.result, eval_naive(c.cq, db)));
  }
}

}  // namespace
}  // namespace yr
