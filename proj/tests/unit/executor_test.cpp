#include <gtest/gtest.h>

#include <set>

#include "kgframe/cli/program.hpp"
#include "kgframe/error.hpp"
#include "kgframe/exec/executor.hpp"
#include "kgframe/exec/table_io.hpp"
#include "kgframe/query/emitter.hpp"
#include "kgframe/query/generator.hpp"
#include "mock_endpoint.hpp"
#include "suite.hpp"

using namespace kgframe;
using namespace kgframe::testing;

namespace {

QueryModel scan_x() {
  QueryModel m = new_model({}, {"http://ex.org/g"});
  m.add_triple({Variable{"x"}, Term::iri("http://ex.org/p"), Variable{"y"}}, "http://ex.org/g");
  m.select = {"x"};
  return m;
}

EndpointConfig fast(const std::string& url, std::size_t page) {
  EndpointConfig c;
  c.url = url;
  c.page_size = page;
  c.backoff = std::chrono::milliseconds(0);
  c.timeout = std::chrono::milliseconds(2000);
  return c;
}

// Scripted transport: answers from a queue, counts calls.
class ScriptedTransport : public Transport {
 public:
  std::vector<HttpResponse> script;
  std::vector<HttpRequest> seen;
  HttpResponse send(const HttpRequest& r) override {
    seen.push_back(r);
    HttpResponse res = script.front();
    script.erase(script.begin());
    return res;
  }
};

}  // namespace

TEST(ResultsJson, ParsesAllTermTypesAndUnbound) {
  auto t = parse_results_json(R"({"head":{"vars":["a","b"]},"results":{"bindings":[
      {"a":{"type":"uri","value":"http://ex.org/x"},
       "b":{"type":"literal","value":"7","datatype":"http://www.w3.org/2001/XMLSchema#integer"}},
      {"a":{"type":"literal","value":"hi","xml:lang":"en"}},
      {"a":{"type":"bnode","value":"b0"},"b":{"type":"typed-literal","value":"s","datatype":"http://www.w3.org/2001/XMLSchema#string"}}]}})");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.rows[0][0], Term::iri("http://ex.org/x"));
  EXPECT_EQ(t.rows[0][1], Term::integer(7));
  EXPECT_EQ(t.rows[1][0], Term::lang_literal("hi", "en"));
  EXPECT_FALSE(t.rows[1][1]);
  EXPECT_EQ(t.rows[2][0], Term::blank("b0"));
  EXPECT_EQ(t.rows[2][1], Term::literal("s"));
  EXPECT_THROW(parse_results_json("<html>"), EndpointError);
  EXPECT_THROW(parse_results_json(R"({"head":{}})"), EndpointError);
}

TEST(TableIo, CsvQuotesPerRfc4180) {
  ResultTable t;
  t.columns = {"a", "b"};
  t.rows = {{Term::literal("x,y"), Term::literal("say \"hi\"")}, {Term::iri("http://ex.org/z"), std::nullopt}};
  EXPECT_EQ(format_table(t, TableFormat::kCsv), "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\nhttp://ex.org/z,\r\n");
}

TEST(TableIo, TsvUsesNTriplesTerms) {
  ResultTable t;
  t.columns = {"a", "b"};
  t.rows = {{Term::iri("http://ex.org/z"), Term::integer(3)}};
  EXPECT_EQ(format_table(t, TableFormat::kTsv),
            "?a\t?b\n<http://ex.org/z>\t\"3\"^^<http://www.w3.org/2001/XMLSchema#integer>\n");
}

TEST(TableIo, JsonRoundTrips) {
  ResultTable t;
  t.columns = {"a", "b"};
  t.rows = {{Term::iri("http://ex.org/z"), std::nullopt}, {Term::lang_literal("v", "fr"), Term::decimal(1.5)}};
  EXPECT_TRUE(bag_equal(parse_results_json(format_table(t, TableFormat::kJson)), t));
  EXPECT_THROW(parse_table_format("xml"), Error);
}

TEST(PageQuery, WindowsInsideTheUserSlice) {
  QueryModel m = scan_x();
  m.limit = 25;
  m.offset = 5;
  QueryModel p = page_query(m, 10, 10, true, true);
  EXPECT_EQ(p.offset, 15);
  EXPECT_EQ(p.limit, 11);
  EXPECT_EQ(p.order, (std::vector<OrderSpec>{{"x", SortOrder::kAsc}}));
  QueryModel last = page_query(m, 20, 5, false, false);
  EXPECT_EQ(last.limit, 5);
  EXPECT_TRUE(last.order.empty());
}

TEST(Executor, PagesWithSentinelUntilShortPage) {
  MockEndpoint ep(numbered_rows(1000));
  HttpTransport http(ep.url(), std::chrono::milliseconds(2000));
  Executor ex(http, fast(ep.url(), 100));
  ResultTable t = ex.execute(scan_x());
  EXPECT_EQ(t.size(), 1000u);
  EXPECT_EQ(ep.requests(), 10u);
  std::set<Row> unique(t.rows.begin(), t.rows.end());
  EXPECT_EQ(unique.size(), 1000u);
}

TEST(Executor, RespectsUserLimit) {
  MockEndpoint ep(numbered_rows(1000));
  HttpTransport http(ep.url(), std::chrono::milliseconds(2000));
  Executor ex(http, fast(ep.url(), 100));
  QueryModel m = scan_x();
  m.limit = 250;
  m.offset = 10;
  ResultTable t = ex.execute(m);
  ASSERT_EQ(t.size(), 250u);
  EXPECT_EQ(t.rows.front()[0], Term::iri("http://ex.org/r10"));
  EXPECT_EQ(t.rows.back()[0], Term::iri("http://ex.org/r259"));
  EXPECT_EQ(ep.requests(), 3u);
}

TEST(Executor, RetriesServerErrorsThenGivesUp) {
  MockEndpoint ep(numbered_rows(50));
  HttpTransport http(ep.url(), std::chrono::milliseconds(2000));
  Executor ex(http, fast(ep.url(), 100));
  ep.fail_next(2, 503);
  EXPECT_EQ(ex.execute(scan_x()).size(), 50u);
  EXPECT_EQ(ex.stats().retries, 2u);
  ep.fail_next(10, 500);
  try {
    ex.execute(scan_x());
    FAIL() << "expected EndpointError";
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.status(), 500);
  }
}

TEST(Executor, ClientErrorsAreNotRetried) {
  ScriptedTransport tr;
  tr.script = {{400, "bad query"}};
  Executor ex(tr, fast("http://unused", 0));
  EXPECT_THROW(ex.execute(scan_x()), EndpointError);
  EXPECT_EQ(tr.seen.size(), 1u);
}

TEST(Executor, LongQueriesGoByPost) {
  ScriptedTransport tr;
  const std::string empty = R"({"head":{"vars":["x"]},"results":{"bindings":[]}})";
  tr.script = {{200, empty}, {200, empty}};
  Executor ex(tr, fast("http://unused", 0));
  ex.execute(scan_x());
  EXPECT_EQ(tr.seen[0].method, HttpRequest::Method::kGet);
  QueryModel big = scan_x();
  for (int i = 0; i < 40; ++i)
    big.add_triple({Variable{"x"}, Term::iri("http://ex.org/a/rather/long/predicate/" + std::to_string(i)),
                    Variable{"v" + std::to_string(i)}},
                   "http://ex.org/g");
  ASSERT_GT(encoded_length(emit_sparql(big)), 2000u);
  ex.execute(big);
  EXPECT_EQ(tr.seen[1].method, HttpRequest::Method::kPost);
}

TEST(Executor, SlowEndpointTimesOut) {
  MockEndpoint ep(numbered_rows(5));
  ep.set_delay_ms(600);
  EndpointConfig c = fast(ep.url(), 0);
  c.timeout = std::chrono::milliseconds(200);
  c.max_retries = 1;
  HttpTransport http(ep.url(), c.timeout);
  Executor ex(http, c);
  EXPECT_THROW(ex.execute(scan_x()), TimeoutError);
  EXPECT_EQ(ex.stats().requests, 2u);
}

TEST(Executor, UnreachableEndpoint) {
  EXPECT_THROW(HttpTransport("ftp://x", std::chrono::milliseconds(100)), EndpointError);
  HttpTransport http("http://127.0.0.1:1/sparql", std::chrono::milliseconds(500));
  Executor ex(http, fast("http://127.0.0.1:1/sparql", 0));
  EXPECT_THROW(ex.execute(scan_x()), EndpointError);
}

TEST(Executor, CompilingTheGoldenSuiteSendsNothing) {
  MockEndpoint ep(numbered_rows(3));
  HttpTransport http(ep.url(), std::chrono::milliseconds(2000));
  CountingTransport counting(http);
  Executor ex(counting, fast(ep.url(), 100));
  for (const auto& c : golden_cases()) {
    FrameProgram p = load_program(c.program);
    emit_sparql(generate(p.result_frame()));
  }
  EXPECT_EQ(counting.count(), 0u);
  EXPECT_EQ(ep.requests(), 0u);
  ex.execute(load_program(golden_cases()[0].program).result_frame());
  EXPECT_GT(counting.count(), 0u);
}

TEST(Executor, EndpointFromEnvironment) {
  setenv(kEndpointEnv, "http://example.org/sparql", 1);
  EXPECT_EQ(EndpointConfig::from_env().url, "http://example.org/sparql");
  unsetenv(kEndpointEnv);
  EXPECT_EQ(EndpointConfig::from_env().url, "");
}
