#include <gtest/gtest.h>

#include "kgframe/query/emitter.hpp"
#include "kgframe/query/model.hpp"

using namespace kgframe;

TEST(Tokens, NormalizesLayoutCaseAndPrologue) {
  auto t = sparql_tokens("PREFIX a: <http://a/>\nselect  * where { ?x a:p \"two words\" . }");
  EXPECT_EQ(t, (std::vector<std::string>{"SELECT", "*", "WHERE", "{", "?x", "a:p", "\"two words\"", "}"}));
}

TEST(Tokens, TokenEqualityIgnoresWhitespaceAndOptionalDots) {
  EXPECT_TRUE(token_equal("SELECT * WHERE { ?s ?p ?o . }", "select *\n  where {\n ?s   ?p ?o }"));
  EXPECT_TRUE(token_equal("{ ?s <p> ?o . FILTER ( ?o > 2 ) }", "{ ?s <p> ?o FILTER(?o>2) }"));
  EXPECT_FALSE(token_equal("SELECT ?a WHERE { ?a <p> ?b }", "SELECT ?b WHERE { ?a <p> ?b }"));
  EXPECT_FALSE(token_equal("{ ?s <p> \"x y\" }", "{ ?s <p> \"x  y\" }"));
}

TEST(Emitter, PrefixesOnlyForUsedNamespacesAndAbbreviatedTriples) {
  PrefixMap p;
  p.add("ex", "http://ex.org/");
  p.add("unused", "http://unused.org/");
  QueryModel m = new_model(p, {"http://ex.org/g"});
  m.add_triple({Variable{"s"}, Term::iri("http://ex.org/p"), Variable{"o"}}, "http://ex.org/g");
  m.add_triple({Variable{"s"}, Term::iri("http://ex.org/q"), Variable{"v"}}, "http://ex.org/g");
  m.add_filter({{{"v", Condition::compare(">=", Term::integer(3))}}});
  m.set_modifiers({{"v", SortOrder::kDesc}}, 10, 5);
  std::string q = emit_sparql(m);
  EXPECT_NE(q.find("PREFIX ex: <http://ex.org/>"), std::string::npos);
  EXPECT_EQ(q.find("unused"), std::string::npos);
  EXPECT_TRUE(token_equal(q,
                          "SELECT * FROM <http://ex.org/g> WHERE { ?s ex:p ?o ; ex:q ?v FILTER ( ?v >= 3 ) } "
                          "ORDER BY DESC(?v) LIMIT 10 OFFSET 5"))
      << q;
}

TEST(Emitter, GroupedProjectionAndHaving) {
  QueryModel m = new_model({}, {"http://ex.org/g"});
  m.add_triple({Variable{"m"}, Term::iri("http://ex.org/starring"), Variable{"a"}}, "http://ex.org/g");
  m.set_grouping({"a"}, {{AggFn::kCount, "m", "n", true}});
  m.add_having({{{"n", Condition::compare(">=", Term::integer(50))}}});
  EXPECT_TRUE(token_equal(emit_sparql(m),
                          "SELECT ?a (COUNT(DISTINCT ?m) AS ?n) FROM <http://ex.org/g> WHERE { ?m "
                          "<http://ex.org/starring> ?a } GROUP BY ?a HAVING ( COUNT(DISTINCT ?m) >= 50 )"))
      << emit_sparql(m);
}

TEST(Emitter, SeveralGraphsUseFromNamedAndGraphBlocks) {
  QueryModel m = new_model({}, {"http://ex.org/g1", "http://ex.org/g2"});
  m.add_triple({Variable{"s"}, Term::iri("http://ex.org/p"), Variable{"o"}}, "http://ex.org/g1");
  m.add_triple({Variable{"o"}, Term::iri("http://ex.org/q"), Variable{"v"}}, "http://ex.org/g2");
  std::string q = emit_sparql(m);
  EXPECT_TRUE(token_equal(q,
                          "SELECT * FROM NAMED <http://ex.org/g1> FROM NAMED <http://ex.org/g2> WHERE { GRAPH "
                          "<http://ex.org/g1> { ?s <http://ex.org/p> ?o } GRAPH <http://ex.org/g2> { ?o "
                          "<http://ex.org/q> ?v } }"))
      << q;
}
