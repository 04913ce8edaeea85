// Prints one PASS/FAIL line per acceptance criterion; exits non-zero when
// any criterion fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "checks.hpp"
#include "fuzz.hpp"
#include "kgframe/cli/program.hpp"
#include "kgframe/error.hpp"
#include "kgframe/exec/executor.hpp"
#include "kgframe/oracle/algebra.hpp"
#include "kgframe/oracle/relational.hpp"
#include "kgframe/query/emitter.hpp"
#include "kgframe/query/generator.hpp"
#include "mock_endpoint.hpp"
#include "suite.hpp"

using namespace kgframe;
using namespace kgframe::testing;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome golden() {
  std::ostringstream d;
  bool ok = true;
  for (const auto& c : golden_cases()) {
    auto t0 = Clock::now();
    std::string q = emit_sparql(generate(load_program(c.program).result_frame()));
    double secs = since(t0);
    bool eq = token_equal(q, read_file(c.golden));
    ok = ok && eq && secs < 1.0;
    d << c.name << (eq ? " equal" : " DIFFERENT") << " in " << secs * 1000 << " ms; ";
  }
  return {ok, d.str()};
}

Outcome naive_baseline() {
  QueryModel m = naive_generate(load_program(fixture("programs/movie_genres.kgf")).result_frame());
  std::vector<std::multiset<std::string>> blocks;
  collect_blocks(m, blocks);
  std::set<std::size_t> sizes;
  std::size_t leaves = 0;
  for (const auto& b : blocks) {
    sizes.insert(b.size());
    leaves += b.size();
  }
  // an american block (seed + 6 expands + filter) and a movies block (seed + 6 expands)
  bool shape = sizes == std::set<std::size_t>{7, 8};
  bool flat = leaves == count_leaves(m.where);
  std::ostringstream d;
  d << blocks.size() << " leaf blocks of sizes {7,8}=" << (shape ? "yes" : "no") << ", every leaf one level deep="
    << (flat ? "yes" : "no");
  return {shape && flat, d.str()};
}

Outcome theorem() {
  auto t0 = Clock::now();
  int opt_fail = 0, naive_fail = 0;
  std::string first;
  for (std::uint64_t s = 0; s < 500; ++s) {
    if (auto f = compilation_case(s, false)) {
      if (!opt_fail++) first = *f;
    }
    if (auto f = compilation_case(s, true)) {
      if (!naive_fail++ && first.empty()) first = *f;
    }
  }
  double secs = since(t0);
  std::ostringstream d;
  d << "500 programs, optimized " << 500 - opt_fail << "/500, naive " << 500 - naive_fail << "/500 in " << secs
    << " s";
  if (!first.empty()) d << "; first failure " << first;
  return {opt_fail == 0 && naive_fail == 0 && secs < 60, d.str()};
}

Outcome lemma() {
  std::array<int, 7> held{};
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto r = operator_case(50000 + s);
    for (std::size_t i = 0; i < r.size(); ++i) held[i] += !r[i];
  }
  std::ostringstream d;
  bool ok = true;
  for (std::size_t i = 0; i < held.size(); ++i) {
    d << kLemmaOps[i] << " " << held[i] << "/200 ";
    ok = ok && held[i] == 200;
  }
  return {ok, d.str()};
}

Outcome nesting() {
  std::ostringstream d;
  bool ok = true;
  for (std::size_t k = 1; k <= 10; ++k) {
    FrameDescriptor f = linear_program(k);
    auto opt = subquery_count(generate(f)), nv = subquery_count(naive_generate(f));
    ok = ok && opt == 0 && nv == k;
    d << "k=" << k << ":" << opt << "/" << nv << " ";
  }
  return {ok, "optimized/naive subqueries " + d.str()};
}

bool union_of_left_outers(const PatternGroup& g) {
  for (const auto& e : g.elements) {
    if (const auto* u = std::get_if<UnionElem>(&e)) {
      bool each = u->branches.size() == 2;
      for (const auto& b : u->branches)
        each = each && std::any_of(b->where.elements.begin(), b->where.elements.end(),
                                   [](const Element& x) { return std::holds_alternative<OptionalElem>(x); });
      if (each) return true;
    }
    if (const auto* s = std::get_if<SubqueryElem>(&e); s && union_of_left_outers(s->query->where)) return true;
  }
  return false;
}

Outcome full_outer() {
  bool listing = union_of_left_outers(generate(load_program(fixture("programs/movie_genres.kgf")).result_frame()).where);
  KnowledgeGraph kg(kFuzzGraph);
  int equal = 0, structured = 0;
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    Dataset data = random_dataset(rng, 40);
    auto p = [&](int k) { return Term::iri(std::string(kFuzzNs) + "p" + std::to_string(k)); };
    auto a = kg.seed(Variable{"x"}, p(i % 4), Variable{"y"});
    auto b = kg.seed(Variable{"x"}, p((i + 1) % 4), Variable{"z"});
    if (i % 3 == 1) b = b.expand("z", p(2).text(), "w", Direction::kOut, true);
    if (i % 3 == 2) a = a.filter({{"y", {Condition::is_uri()}}});
    FrameDescriptor f = a.join(b, "x", JoinType::kFullOuter);
    QueryModel m = generate(f);
    structured += union_of_left_outers(m.where);
    std::vector<std::string> cols = visible_vars(m);
    ResultTable got = solution_to_table(eval_pattern(*lower_model(m), data), &cols);
    equal += bag_equal(eval_frame_relational(f, data), got);
  }
  std::ostringstream d;
  d << "movie-genre query has a two-branch UNION of OPTIONAL branches=" << (listing ? "yes" : "no")
    << "; random full outer joins: structure " << structured << "/200, oracle-equal " << equal << "/200";
  return {listing && structured == 200 && equal == 200, d.str()};
}

Outcome pagination() {
  MockEndpoint ep(numbered_rows(1000));
  EndpointConfig c;
  c.url = ep.url();
  c.page_size = 100;
  c.backoff = std::chrono::milliseconds(10);
  HttpTransport http(c.url, std::chrono::milliseconds(5000));
  QueryModel m = new_model({}, {kFuzzGraph});
  m.add_triple({Variable{"x"}, Term::iri(std::string(kFuzzNs) + "p0"), Variable{"y"}}, kFuzzGraph);
  m.select = {"x"};

  Executor ex(http, c);
  ResultTable t = ex.execute(m);
  std::set<Row> unique(t.rows.begin(), t.rows.end());
  bool paged = ep.requests() == 10 && t.size() == 1000 && unique.size() == 1000;

  std::size_t before = ep.requests();
  ep.fail_next(1, 500);
  Executor retrying(http, c);
  ResultTable r = retrying.execute(m);
  bool recovered = r.size() == 1000 && retrying.stats().retries == 1 && ep.requests() - before == 11;

  std::ostringstream d;
  d << ep.requests() - (ep.requests() - before) << " requests for " << t.size() << " rows (" << unique.size()
    << " distinct); injected 500 recovered=" << (recovered ? "yes" : "no") << " with " << retrying.stats().retries
    << " retry";
  return {paged && recovered, d.str()};
}

Outcome laziness() {
  MockEndpoint ep(numbered_rows(5));
  HttpTransport http(ep.url(), std::chrono::milliseconds(5000));
  CountingTransport counting(http);
  EndpointConfig c;
  c.url = ep.url();
  Executor ex(counting, c);
  std::vector<FrameDescriptor> frames;
  for (const auto& g : golden_cases()) {
    FrameProgram p = load_program(g.program);
    frames.push_back(p.result_frame());
    emit_sparql(generate(frames.back()));
    emit_sparql(naive_generate(frames.back()));
  }
  std::size_t before = counting.count() + ep.requests();
  for (const auto& f : frames) ex.execute(f);
  std::size_t after = counting.count();
  std::ostringstream d;
  d << before << " requests while building and compiling " << frames.size() << " programs, " << after
    << " once executed";
  return {before == 0 && after >= frames.size(), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden-compilation", golden},     {"naive-baseline", naive_baseline}, {"compilation-soundness", theorem},
      {"operator-equivalence", lemma},    {"nesting", nesting},              {"full-outer-join", full_outer},
      {"pagination", pagination},         {"laziness", laziness},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
