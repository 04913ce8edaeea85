#include <gtest/gtest.h>

#include "kgframe/error.hpp"
#include "kgframe/query/model.hpp"

using namespace kgframe;

namespace {

const std::string kG = "http://ex.org/g";
Term p(const std::string& l) { return Term::iri("http://ex.org/" + l); }
TriplePattern tp(const std::string& s, const std::string& pred, const std::string& o) {
  return {Variable{s}, p(pred), Variable{o}};
}

QueryModel two_triples() {
  QueryModel m = new_model({}, {kG});
  m.add_triple(tp("a", "p", "b"), kG);
  m.add_triple(tp("b", "q", "c"), kG);
  return m;
}

}  // namespace

TEST(QueryModel, ScopeOfFlatModel) {
  QueryModel m = two_triples();
  EXPECT_EQ(visible_vars(m), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(certain_vars(m), (std::set<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(m.flat());
  EXPECT_EQ(subquery_count(m), 0u);
}

TEST(QueryModel, OptionalVariablesAreNotCertain) {
  QueryModel m = two_triples();
  PatternGroup g;
  g.add_triple({tp("c", "r", "d"), kG});
  m.add_optional_block(std::move(g));
  EXPECT_EQ(visible_vars(m).back(), "d");
  EXPECT_FALSE(certain_vars(m).count("d"));
}

TEST(QueryModel, TriplesGatherBeforeSubqueriesButNotAcrossOptional) {
  QueryModel m = two_triples();
  m.where.add_element(SubqueryElem{two_triples()});
  m.add_triple(tp("c", "s", "e"), kG);
  ASSERT_EQ(m.where.elements.size(), 4u);
  EXPECT_TRUE(std::holds_alternative<TripleElem>(m.where.elements[2]));
  PatternGroup g;
  g.add_triple({tp("e", "r", "f"), kG});
  m.add_optional_block(std::move(g));
  m.add_triple(tp("f", "s", "h"), kG);
  EXPECT_TRUE(std::holds_alternative<TripleElem>(m.where.elements.back()) ||
              std::holds_alternative<SubqueryElem>(m.where.elements.back()));
  // the new triple sits after the OPTIONAL
  std::size_t opt_at = 0, triple_at = 0;
  for (std::size_t i = 0; i < m.where.elements.size(); ++i) {
    if (std::holds_alternative<OptionalElem>(m.where.elements[i])) opt_at = i;
    if (auto* t = std::get_if<TripleElem>(&m.where.elements[i]); t && t->pattern == tp("f", "s", "h")) triple_at = i;
  }
  EXPECT_GT(triple_at, opt_at);
}

TEST(QueryModel, WrapMovesFromOutwardAndKeepsModifiersInside) {
  QueryModel m = two_triples();
  m.set_modifiers({{"a", SortOrder::kAsc}}, 5, std::nullopt);
  QueryModel w = wrap_as_subquery(m);
  EXPECT_EQ(w.from, std::vector<std::string>{kG});
  EXPECT_FALSE(w.has_modifiers());
  ASSERT_EQ(w.where.elements.size(), 1u);
  const auto& inner = *std::get<SubqueryElem>(w.where.elements[0]).query;
  EXPECT_TRUE(inner.from.empty());
  EXPECT_EQ(inner.limit, 5);
  EXPECT_EQ(subquery_count(w), 1u);
  EXPECT_EQ(visible_vars(w), visible_vars(m));
}

TEST(QueryModel, GroupingVisibility) {
  QueryModel m = two_triples();
  m.set_grouping({"a"}, {{AggFn::kCount, "b", "n", true}});
  EXPECT_EQ(visible_vars(m), (std::vector<std::string>{"a", "n"}));
  EXPECT_EQ(hidden_vars(m), (std::set<std::string>{"b", "c"}));
  EXPECT_THROW(m.set_grouping({"c"}, {}), ModelError);
}

TEST(QueryModel, RenameReachesNestedScopesAndSeparatesHidden) {
  QueryModel inner = two_triples();
  inner.select = {"a", "b"};  // c is hidden
  QueryModel m = wrap_as_subquery(inner);
  rename_variable(m, "a", "c");
  EXPECT_EQ(visible_vars(m), (std::vector<std::string>{"c", "b"}));
  const auto& q = *std::get<SubqueryElem>(m.where.elements[0]).query;
  auto vars = all_vars(q);
  EXPECT_FALSE(vars.count("a"));
  EXPECT_EQ(vars.size(), 3u);  // the hidden c moved to a fresh name
  validate(m);
}

TEST(QueryModel, RenameOntoVisibleVariableIsAnError) {
  QueryModel m = two_triples();
  EXPECT_THROW(rename_variable(m, "a", "b"), ModelError);
}

TEST(QueryModel, UnionNeedsSameVariables) {
  QueryModel a = two_triples(), b = two_triples();
  QueryModel u = union_models(a, b);
  EXPECT_EQ(u.where.elements.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<UnionElem>(u.where.elements[0]));
  QueryModel c = new_model({}, {kG});
  c.add_triple(tp("x", "p", "y"), kG);
  EXPECT_THROW(union_models(a, c), ModelError);
}

TEST(QueryModel, MergeConcatenatesFlatGroups) {
  QueryModel a = two_triples();
  QueryModel b = new_model({}, {kG});
  b.add_triple(tp("c", "r", "d"), kG);
  QueryModel m = merge_models(a, b);
  EXPECT_EQ(m.where.elements.size(), 3u);
  QueryModel g = two_triples();
  g.set_grouping({"a"}, {});
  EXPECT_THROW(merge_models(g, b), ModelError);
}

TEST(QueryModel, ValidateCatchesOutOfScopeNames) {
  QueryModel m = two_triples();
  m.select = {"a", "zzz"};
  EXPECT_THROW(validate(m), ModelError);
  QueryModel o = two_triples();
  o.order = {{"zzz", SortOrder::kAsc}};
  EXPECT_THROW(validate(o), ModelError);
  EXPECT_THROW(o.set_modifiers({}, -1, std::nullopt), ModelError);
}

TEST(QueryModel, FreshName) {
  EXPECT_EQ(fresh_name("x", {"y"}), "x");
  EXPECT_EQ(fresh_name("x", {"x", "x_1"}), "x_2");
}
