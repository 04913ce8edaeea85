#include <gtest/gtest.h>

#include "kgframe/error.hpp"
#include "kgframe/oracle/aggregate.hpp"
#include "kgframe/oracle/algebra.hpp"
#include "kgframe/oracle/relational.hpp"
#include "kgframe/oracle/table.hpp"

using namespace kgframe;

namespace {

Term ex(const std::string& l) { return Term::iri("http://ex.org/" + l); }

ResultTable table(std::vector<std::string> cols, std::vector<Row> rows) {
  ResultTable t;
  t.columns = std::move(cols);
  t.rows = std::move(rows);
  return t;
}

Dataset small() {
  Dataset d;
  auto& g = d.add_graph("http://ex.org/g");
  g.insert(Triple::make(ex("a"), ex("p"), ex("b")));
  g.insert(Triple::make(ex("a"), ex("p"), ex("c")));
  g.insert(Triple::make(ex("b"), ex("q"), Term::integer(1)));
  g.insert(Triple::make(ex("d"), ex("p"), ex("b")));
  return d;
}

TriplePattern tp(const std::string& s, const std::string& p, const std::string& o) {
  return {Variable{s}, ex(p), Variable{o}};
}

}  // namespace

TEST(Aggregate, Functions) {
  std::vector<Term> v{Term::integer(1), Term::integer(2), Term::integer(2)};
  EXPECT_EQ(aggregate_values(AggFn::kCount, v, false), Term::integer(3));
  EXPECT_EQ(aggregate_values(AggFn::kCount, v, true), Term::integer(2));
  EXPECT_EQ(aggregate_values(AggFn::kSum, v, false), Term::integer(5));
  EXPECT_EQ(aggregate_values(AggFn::kSum, v, true), Term::integer(3));
  EXPECT_EQ(numeric_value(*aggregate_values(AggFn::kAvg, v, false)), 5.0 / 3.0);
  EXPECT_EQ(aggregate_values(AggFn::kMin, v, false), Term::integer(1));
  EXPECT_EQ(aggregate_values(AggFn::kMax, v, false), Term::integer(2));
  EXPECT_EQ(aggregate_values(AggFn::kCount, {}, false), Term::integer(0));
  EXPECT_EQ(aggregate_values(AggFn::kSum, {}, false), Term::integer(0));
  EXPECT_FALSE(aggregate_values(AggFn::kMax, {}, false));
  EXPECT_FALSE(aggregate_values(AggFn::kSum, {ex("x")}, false));  // non-numeric sum is an error
}

TEST(Table, BagEqualityCountsMultiplicityAndIgnoresColumnOrder) {
  auto a = table({"x", "y"}, {{ex("1"), ex("2")}, {ex("1"), ex("2")}});
  auto b = table({"y", "x"}, {{ex("2"), ex("1")}, {ex("2"), ex("1")}});
  auto c = table({"y", "x"}, {{ex("2"), ex("1")}});
  EXPECT_TRUE(bag_equal(a, b));
  EXPECT_FALSE(bag_equal(a, c));
  auto diff = bag_difference(a, c);
  ASSERT_TRUE(diff);
  EXPECT_NE(diff->find("2 time(s) vs 1"), std::string::npos) << *diff;
  EXPECT_TRUE(bag_difference(a, table({"x"}, {})));
}

TEST(Table, SolutionRoundTrip) {
  auto t = table({"x", "y"}, {{ex("1"), std::nullopt}, {ex("1"), std::nullopt}, {ex("2"), ex("3")}});
  auto bag = table_to_solution(t);
  EXPECT_EQ(bag.multiplicity(Mapping{{"x", ex("1")}}), 2u);
  std::vector<std::string> cols{"x", "y"};
  EXPECT_TRUE(bag_equal(solution_to_table(bag, &cols), t));
}

TEST(Relational, JoinTreatsNullAsWildcard) {
  auto a = table({"k", "v"}, {{ex("1"), ex("a")}, {std::nullopt, ex("b")}});
  auto b = table({"k", "w"}, {{ex("1"), ex("x")}, {ex("2"), ex("y")}});
  auto inner = relational::join(a, b, JoinType::kInner);
  // (1,a,x); (null,b) pairs with both and takes their key
  auto want = table({"k", "v", "w"}, {{ex("1"), ex("a"), ex("x")}, {ex("1"), ex("b"), ex("x")}, {ex("2"), ex("b"), ex("y")}});
  EXPECT_TRUE(bag_equal(inner, want)) << *bag_difference(inner, want);
}

TEST(Relational, OuterJoins) {
  auto a = table({"k", "v"}, {{ex("1"), ex("a")}, {ex("3"), ex("c")}});
  auto b = table({"k", "w"}, {{ex("1"), ex("x")}, {ex("2"), ex("y")}});
  auto left = relational::join(a, b, JoinType::kLeftOuter);
  EXPECT_TRUE(bag_equal(left, table({"k", "v", "w"}, {{ex("1"), ex("a"), ex("x")}, {ex("3"), ex("c"), std::nullopt}})));
  auto right = relational::join(a, b, JoinType::kRightOuter);
  EXPECT_TRUE(bag_equal(right, table({"k", "v", "w"}, {{ex("1"), ex("a"), ex("x")}, {ex("2"), std::nullopt, ex("y")}})));
  // full outer as the union of both left joins: the matched row twice
  auto full = relational::join(a, b, JoinType::kFullOuter);
  auto want = table({"k", "v", "w"}, {{ex("1"), ex("a"), ex("x")},
                                      {ex("1"), ex("a"), ex("x")},
                                      {ex("3"), ex("c"), std::nullopt},
                                      {ex("2"), std::nullopt, ex("y")}});
  EXPECT_TRUE(bag_equal(full, want)) << *bag_difference(full, want);
}

TEST(Relational, GroupAndSortSlice) {
  auto t = table({"k", "v"}, {{ex("1"), Term::integer(5)}, {ex("1"), Term::integer(7)}, {ex("2"), std::nullopt}});
  auto g = relational::group(t, {"k"}, {{AggFn::kCount, "v", "n", false}, {AggFn::kSum, "v", "s", false}});
  EXPECT_TRUE(bag_equal(g, table({"k", "n", "s"}, {{ex("1"), Term::integer(2), Term::integer(12)},
                                                  {ex("2"), Term::integer(0), Term::integer(0)}})));
  auto top = relational::sort_slice(t, {{"v", SortOrder::kDesc}}, 1, std::nullopt);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top.rows[0][1], Term::integer(7));
  auto skip = relational::sort_slice(t, {{"v", SortOrder::kAsc}}, std::nullopt, 1);
  ASSERT_EQ(skip.size(), 2u);
  EXPECT_EQ(skip.rows[0][1], Term::integer(5));  // unbound sorts first and was skipped
}

TEST(Algebra, JoinAndLeftJoinWithCondition) {
  Dataset d = small();
  auto p = algebra::triple(tp("x", "p", "y"));
  auto q = algebra::triple(tp("y", "q", "z"));
  EXPECT_EQ(eval_pattern(*algebra::join(p, q), d).total_size(), 2u);  // a-b-1, d-b-1
  auto lj = eval_pattern(*algebra::left_join(p, q), d);
  EXPECT_EQ(lj.total_size(), 3u);
  EXPECT_EQ(lj.multiplicity(Mapping{{"x", ex("a")}, {"y", ex("c")}}), 1u);
  // a condition that never holds keeps every left row unextended
  auto never = eval_pattern(*algebra::left_join(p, q, {{"z", Condition::compare("=", Term::integer(9))}}), d);
  EXPECT_EQ(never.total_size(), 3u);
  EXPECT_EQ(never.multiplicity(Mapping{{"x", ex("a")}, {"y", ex("b")}}), 1u);
}

TEST(Algebra, ProjectKeepsMultiplicityDistinctRemovesIt) {
  Dataset d = small();
  auto p = algebra::project(algebra::triple(tp("x", "p", "y")), {"y"});
  auto bag = eval_pattern(*p, d);
  EXPECT_EQ(bag.multiplicity(Mapping{{"y", ex("b")}}), 2u);
  EXPECT_EQ(eval_pattern(*algebra::distinct(p), d).total_size(), 2u);
}

TEST(Algebra, GroupOverEmptyInputWithoutKeysYieldsOneRow) {
  Dataset d = small();
  auto none = algebra::triple(tp("x", "nothing", "y"));
  auto g = eval_pattern(*algebra::group_agg(none, {}, {{AggFn::kCount, "x", "n", false}}), d);
  EXPECT_EQ(g.total_size(), 1u);
  EXPECT_EQ(g.multiplicity(Mapping{{"n", Term::integer(0)}}), 1u);
  EXPECT_EQ(eval_pattern(*algebra::group_agg(none, {"x"}, {{AggFn::kCount, "y", "n", false}}), d).total_size(), 0u);
}

TEST(Algebra, SliceUsesCanonicalTieBreak) {
  Dataset d = small();
  auto s = algebra::slice(algebra::triple(tp("x", "p", "y")), {}, 1, std::nullopt);
  auto bag = eval_pattern(*s, d);
  ASSERT_EQ(bag.total_size(), 1u);
  // rows by sorted value lists: {a,b} < {a,c} < {b,d}
  EXPECT_EQ(bag.multiplicity(Mapping{{"x", ex("a")}, {"y", ex("b")}}), 1u);
}

TEST(Algebra, TriplesNeedAKnownGraph) {
  Dataset d = small();
  d.add_graph("http://ex.org/h");
  EXPECT_THROW(eval_pattern(*algebra::triple(tp("x", "p", "y")), d), EvalError);
  EXPECT_THROW(eval_pattern(*algebra::triple(tp("x", "p", "y"), "http://ex.org/zzz"), d), EvalError);
  EXPECT_EQ(eval_pattern(*algebra::triple(tp("x", "p", "y"), "http://ex.org/g"), d).total_size(), 3u);
}
