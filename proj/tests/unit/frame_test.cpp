#include <gtest/gtest.h>

#include "kgframe/error.hpp"
#include "kgframe/frame/condition.hpp"
#include "kgframe/frame/expression.hpp"
#include "kgframe/frame/frame.hpp"

using namespace kgframe;

namespace {

PrefixMap dbp() {
  PrefixMap p;
  p.add("dbpp", "http://dbpedia.org/property/");
  p.add("dbpr", "http://dbpedia.org/resource/");
  return p;
}

KnowledgeGraph kg() { return KnowledgeGraph("http://dbpedia.org", dbp()); }

}  // namespace

TEST(Frame, RecordsOperatorsWithoutTouchingData) {
  auto f = kg().feature_domain_range("dbpp:starring", "movie", "actor");
  EXPECT_EQ(f.columns(), (std::vector<std::string>{"movie", "actor"}));
  ASSERT_EQ(f.ops().size(), 1u);
  auto g = f.expand("actor", "dbpp:birthPlace", "country").filter_text({{"country", {"=dbpr:United_States"}}});
  EXPECT_EQ(g.ops().size(), 3u);
  EXPECT_EQ(g.columns(), (std::vector<std::string>{"movie", "actor", "country"}));
  // derivation leaves the source alone
  EXPECT_EQ(f.ops().size(), 1u);
  const auto& e = std::get<ExpandOp>(g.ops()[1]);
  EXPECT_EQ(e.predicate, "http://dbpedia.org/property/birthPlace");
  EXPECT_EQ(e.graph, "http://dbpedia.org");
}

TEST(Frame, ReplayedColumnsMatchTrackedColumns) {
  auto base = kg().feature_domain_range("dbpp:starring", "movie", "actor");
  auto other = kg().feature_domain_range("dbpp:director", "film", "person");
  auto f = base.expand("actor", {{"dbpp:birthPlace", "country", Direction::kOut, false},
                                 {"dbpp:award", "award", Direction::kOut, true}})
               .join(other, "movie", "film", JoinType::kLeftOuter, "movie")
               .group_by({"actor"})
               .count("movie", "n", true)
               .filter_text({{"n", {">=2"}}})
               .sort({{"n", SortOrder::kDesc}})
               .head(5);
  EXPECT_EQ(f.columns(), (std::vector<std::string>{"actor", "n"}));
  EXPECT_EQ(f.replay_columns(), f.columns());
  EXPECT_TRUE(f.terminal());
}

TEST(Frame, RejectsContractViolations) {
  auto f = kg().feature_domain_range("dbpp:starring", "movie", "actor");
  EXPECT_THROW(f.expand("nope", "dbpp:x", "y"), FrameError);
  EXPECT_THROW(f.expand("actor", "dbpp:x", "movie"), FrameError);
  EXPECT_THROW(f.select_cols({"ghost"}), FrameError);
  EXPECT_THROW(f.group_by({}), FrameError);
  EXPECT_THROW(f.count("movie", "n"), FrameError);  // not after group_by
  EXPECT_THROW(f.head(-1), FrameError);
  EXPECT_THROW(f.head(3).expand("actor", "dbpp:x", "y"), FrameError);
  EXPECT_THROW(f.expand("actor", "undefined:p", "y"), FrameError);
  EXPECT_THROW(f.filter_text({{"actor", {"raw:?ghost = 1"}}}), FrameError);
  EXPECT_THROW(f.group_by({"actor"}).count("movie", "movie"), FrameError);
}

TEST(Frame, GroupingFilterRoles) {
  auto g = kg().feature_domain_range("dbpp:starring", "movie", "actor").group_by({"actor"}).count("movie", "n");
  auto having = g.filter_text({{"n", {">=2"}}});
  EXPECT_EQ(std::get<FilterOp>(having.ops().back()).entries[0].role, FilterRole::kHaving);
  auto post = g.filter_text({{"actor", {"isURI"}}});
  EXPECT_EQ(std::get<FilterOp>(post.ops().back()).entries[0].role, FilterRole::kPostGroup);
}

TEST(Frame, CacheBranchesAreIndependent) {
  auto base = kg().feature_domain_range("dbpp:starring", "movie", "actor").cache();
  auto a = base.expand("actor", "dbpp:birthPlace", "country");
  auto b = base.expand("movie", "dbpp:genre", "genre");
  EXPECT_EQ(a.columns().back(), "country");
  EXPECT_EQ(b.columns().back(), "genre");
  EXPECT_EQ(base.ops().size(), 1u);
}

TEST(Frame, ExploreClassesShape) {
  auto f = kg().explore_classes();
  EXPECT_EQ(f.columns(), (std::vector<std::string>{"class", "frequency"}));
  EXPECT_TRUE(f.grouped());
}

TEST(Condition, ParsesStringForms) {
  auto p = dbp();
  auto eq = parse_condition("=dbpr:United_States", p);
  EXPECT_EQ(eq.kind, Condition::Kind::kCompare);
  EXPECT_EQ(eq.op, "=");
  EXPECT_EQ(eq.operand, Term::iri("http://dbpedia.org/resource/United_States"));
  auto ge = parse_condition(">=50", p);
  EXPECT_EQ(ge.op, ">=");
  EXPECT_EQ(ge.operand, Term::integer(50));
  EXPECT_EQ(parse_condition("isURI", p).kind, Condition::Kind::kIsUri);
  EXPECT_EQ(parse_condition("isLiteral", p).kind, Condition::Kind::kIsLiteral);
  EXPECT_EQ(parse_condition("regex(USA)", p).pattern, "USA");
  auto in = parse_condition("in(dbpr:A, dbpr:B)", p);
  ASSERT_EQ(in.list.size(), 2u);
  EXPECT_EQ(in.list[1], Term::iri("http://dbpedia.org/resource/B"));
  EXPECT_EQ(parse_condition("raw:bound(?x)", p).kind, Condition::Kind::kRaw);
  EXPECT_THROW(parse_condition("raw:(((", p), ParseError);
}

TEST(Condition, Rendering) {
  auto p = dbp();
  EXPECT_EQ(render_condition("c", parse_condition("=dbpr:United_States", p), p), "?c = dbpr:United_States");
  EXPECT_EQ(render_condition("n", parse_condition(">=50", p), p), "?n >= 50");
  EXPECT_EQ(render_condition("c", parse_condition("regex(USA)", p), p), "regex(str(?c), \"USA\")");
  EXPECT_EQ(render_condition("c", Condition::is_uri(), p), "isIRI(?c)");
}

TEST(Condition, TruthTable) {
  Bindings none = [](const std::string&) -> const Term* { return nullptr; };
  Term us = Term::iri("http://dbpedia.org/resource/United_States");
  EXPECT_TRUE(condition_holds(Condition::compare("=", us), &us, none));
  EXPECT_FALSE(condition_holds(Condition::compare("=", us), nullptr, none));  // null never passes
  Term five = Term::integer(5);
  Term five_dec = Term::decimal(5.0);
  EXPECT_TRUE(condition_holds(Condition::compare("=", five_dec), &five, none));
  EXPECT_TRUE(condition_holds(Condition::compare("<", Term::integer(10)), &five, none));
  // comparing an IRI with a number is a type error, so false both ways
  EXPECT_FALSE(condition_holds(Condition::compare("<", Term::integer(10)), &us, none));
  EXPECT_FALSE(condition_holds(Condition::compare(">=", Term::integer(10)), &us, none));
  EXPECT_TRUE(condition_holds(Condition::regex("States"), &us, none));
  EXPECT_TRUE(condition_holds(Condition::in({Term::integer(1), Term::integer(5)}), &five, none));
  EXPECT_TRUE(condition_holds(Condition::is_uri(), &us, none));
  EXPECT_FALSE(condition_holds(Condition::is_literal(), &us, none));
}

TEST(Expression, EvaluatesBoundAndArithmetic) {
  PrefixMap p;
  Term two = Term::integer(2);
  Bindings b = [&](const std::string& v) -> const Term* { return v == "x" ? &two : nullptr; };
  EXPECT_TRUE(expression_holds(*parse_expression("bound(?x) && !bound(?y)", p), b));
  EXPECT_TRUE(expression_holds(*parse_expression("?x * 3 = 6", p), b));
  EXPECT_FALSE(expression_holds(*parse_expression("?y = 1", p), b));  // error is false
  EXPECT_TRUE(expression_holds(*parse_expression("?y = 1 || true", p), b));
  EXPECT_EQ(expression_variables(*parse_expression("?a + ?b > ?a", p)), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(rename_variable_in_text("?a + ?ab", "a", "z"), "?z + ?ab");
}
