#include <gtest/gtest.h>

#include "kgframe/cli/program.hpp"
#include "kgframe/error.hpp"
#include "suite.hpp"

using namespace kgframe;

namespace {

const char* kHeader =
    "prefix dbpp: <http://dbpedia.org/property/>\n"
    "graph dbpedia = <http://dbpedia.org>\n";

std::size_t error_line(const std::string& text) {
  try {
    parse_program(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Program, ParsesAssignmentsContinuationsAndComments) {
  auto p = parse_program(std::string(kHeader) +
                         "# comment\n"
                         "movies = dbpedia.feature_domain_range('dbpp:starring', 'movie', 'actor')  # trailing\n"
                         "usa = movies.expand('actor', [('dbpp:birthPlace', 'country')])\\\n"
                         "  .filter({'country': ['regex(USA)']})\n"
                         "usa.head(10)\n"
                         "result usa\n");
  const auto& f = p.result_frame();
  EXPECT_EQ(f.columns(), (std::vector<std::string>{"movie", "actor", "country"}));
  EXPECT_EQ(f.ops().size(), 4u);
  EXPECT_TRUE(f.terminal());
  EXPECT_EQ(p.graphs.at("dbpedia"), "http://dbpedia.org");
}

TEST(Program, ExpandFlagsAndJoinForms) {
  auto p = parse_program(std::string(kHeader) +
                         "a = dbpedia.feature_domain_range('dbpp:starring', 'movie', 'actor')\n"
                         "b = a.expand('actor', [('dbpp:starring', 'other', INCOMING),\n"
                         "                       ('dbpp:award', 'award', OPTIONAL)])\n"
                         "c = dbpedia.feature_domain_range('dbpp:director', 'film', 'who')\n"
                         "d = b.join(c, 'movie', 'film', LeftOuterJoin, new_col='m')\n"
                         "result d\n");
  const auto& ops = p.result_frame().ops();
  const auto& in = std::get<ExpandOp>(ops[1]);
  EXPECT_EQ(in.dir, Direction::kIn);
  EXPECT_TRUE(std::get<ExpandOp>(ops[2]).optional);
  const auto& j = std::get<JoinOp>(ops[3]);
  EXPECT_EQ(j.type, JoinType::kLeftOuter);
  EXPECT_EQ(j.new_col, "m");
}

TEST(Program, AggregationsAndSort) {
  auto p = parse_program(std::string(kHeader) +
                         "a = dbpedia.feature_domain_range('dbpp:starring', 'movie', 'actor')\n"
                         "b = a.group_by(['actor']).count('movie', 'n', unique=True).filter({'n': ['>=5']})\n"
                         "c = b.sort({'n': 'DESC'}).head(3, offset=1)\n"
                         "result c\n");
  const auto& ops = p.result_frame().ops();
  EXPECT_TRUE(std::get<AggregationOp>(ops[2]).distinct);
  EXPECT_EQ(std::get<SortOp>(ops[4]).keys[0].second, SortOrder::kDesc);
  EXPECT_EQ(std::get<HeadOp>(ops[5]).offset, 1);
}

TEST(Program, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line(std::string(kHeader) + "a = nowhere.expand('x', 'p', 'y')\nresult a\n"), 3u);
  EXPECT_EQ(error_line(std::string(kHeader) +
                       "a = dbpedia.feature_domain_range('dbpp:starring', 'movie', 'actor')\n"
                       "b = a.expand('ghost', [('dbpp:x', 'y')])\nresult b\n"),
            4u);
  EXPECT_EQ(error_line(std::string(kHeader) + "a = dbpedia.feature_domain_range('dbpp:starring', 'm', 'a'\n"), 3u);
  EXPECT_GT(error_line(std::string(kHeader) + "a = dbpedia.feature_domain_range('dbpp:starring', 'm', 'a')\n"), 0u);
}

TEST(Program, EmptyProgramIsRejected) {
  EXPECT_THROW(parse_program(""), ParseError);
  EXPECT_THROW(parse_program("# only a comment\n\n"), ParseError);
  EXPECT_THROW(load_program("/nonexistent/file.kgf"), Error);
}

TEST(Program, FixturesLoad) {
  for (const auto& c : kgframe::testing::golden_cases()) EXPECT_NO_THROW(load_program(c.program)) << c.name;
}
