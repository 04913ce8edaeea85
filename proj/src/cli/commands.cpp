#include "kgframe/cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <set>

#include "kgframe/cli/program.hpp"
#include "kgframe/error.hpp"
#include "kgframe/exec/executor.hpp"
#include "kgframe/exec/table_io.hpp"
#include "kgframe/oracle/relational.hpp"
#include "kgframe/query/emitter.hpp"
#include "kgframe/query/generator.hpp"
#include "kgframe/rdf/ntriples.hpp"

namespace kgframe {

namespace {

struct Options {
  std::string program;
  bool naive = false;
  std::string endpoint;
  std::string format = "csv";
  std::size_t page_size = 10000;
  double timeout_s = 60;
  int retries = 3;
  std::vector<std::string> graphs;  // FILE or IRI=FILE
  std::vector<std::string> local;
  bool mutate_optional = false;
  int repeat = 3;
  std::string graph_iri;
};

// Usage problems that CLI11 cannot see (missing endpoint, ambiguous graph).
struct UsageError : Error {
  using Error::Error;
};

std::set<std::string> graphs_of(const FrameDescriptor& f) {
  std::set<std::string> out(f.graphs().begin(), f.graphs().end());
  return out;
}

Dataset load_dataset(const std::vector<std::string>& specs, const std::set<std::string>& default_graphs) {
  Dataset d;
  for (const auto& spec : specs) {
    std::string iri, file = spec;
    if (auto eq = spec.find('='); eq != std::string::npos && spec.find("://") < eq) {
      iri = spec.substr(0, eq);
      file = spec.substr(eq + 1);
    } else if (default_graphs.size() == 1) {
      iri = *default_graphs.begin();
    } else {
      throw UsageError("--graph " + spec + ": the program reads " + std::to_string(default_graphs.size()) +
                       " graphs; use IRI=FILE");
    }
    auto triples = parse_ntriples_file(file);
    d.add_graph(iri).insert_all(triples);
  }
  // graphs the program reads but no file mentions are empty
  for (const auto& g : default_graphs) d.add_graph(g);
  return d;
}

EndpointConfig endpoint_config(const Options& o) {
  EndpointConfig c = EndpointConfig::from_env();
  if (!o.endpoint.empty()) c.url = o.endpoint;
  if (c.url.empty()) throw UsageError(std::string("no endpoint: pass --endpoint or set ") + kEndpointEnv);
  c.page_size = o.page_size;
  c.max_retries = o.retries;
  c.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(o.timeout_s * 1000));
  return c;
}

QueryModel compile(const FrameDescriptor& f, bool naive, const GeneratorHooks& hooks = {}) {
  return naive ? naive_generate(f) : generate(f, hooks);
}

int cmd_compile(const Options& o, std::ostream& out) {
  FrameProgram p = load_program(o.program);
  out << emit_sparql(compile(p.result_frame(), o.naive));
  return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  FrameProgram p = load_program(o.program);
  QueryModel m = compile(p.result_frame(), o.naive);
  TableFormat fmt = parse_table_format(o.format);
  ResultTable t;
  if (!o.local.empty()) {
    t = evaluate_local(m, load_dataset(o.local, graphs_of(p.result_frame())));
  } else {
    EndpointConfig c = endpoint_config(o);
    HttpTransport http(c.url, c.timeout);
    Executor ex(http, c);
    t = ex.execute(m);
    err << ex.stats().requests << " request(s)\n";
  }
  write_table(out, t, fmt);
  err << t.size() << " row(s)\n";
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  FrameProgram p = load_program(o.program);
  const FrameDescriptor& f = p.result_frame();
  if (o.graphs.empty()) throw UsageError("verify needs at least one --graph FILE");
  Dataset data = load_dataset(o.graphs, graphs_of(f));
  GeneratorHooks hooks;
  hooks.optional_as_mandatory = o.mutate_optional;

  ResultTable oracle = eval_frame_relational(f, data);
  ResultTable optimized = evaluate_local(generate(f, hooks), data);
  ResultTable naive = evaluate_local(naive_generate(f), data);

  bool ok = true;
  auto report = [&](const char* what, const ResultTable& a, const ResultTable& b) {
    if (auto diff = bag_difference(a, b)) {
      out << "FAIL " << what << ": " << *diff << '\n';
      ok = false;
    } else {
      out << "PASS " << what << " (" << a.size() << " rows)\n";
    }
  };
  report("optimized vs relational oracle", oracle, optimized);
  report("naive vs optimized", naive, optimized);
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const Options& o, std::ostream& out) {
  FrameProgram p = load_program(o.program);
  const FrameDescriptor& f = p.result_frame();
  if (o.repeat < 1) throw UsageError("--repeat must be at least 1");
  std::optional<Dataset> data;
  std::unique_ptr<HttpTransport> http;
  std::unique_ptr<Executor> ex;
  if (!o.local.empty()) {
    data = load_dataset(o.local, graphs_of(f));
  } else {
    EndpointConfig c = endpoint_config(o);
    http = std::make_unique<HttpTransport>(c.url, c.timeout);
    ex = std::make_unique<Executor>(*http, c);
  }

  struct Result {
    std::size_t subqueries, bytes, rows = 0;
    double mean_ms = 0;
  };
  auto measure = [&](const QueryModel& m) {
    Result r{subquery_count(m), emit_sparql(m).size()};
    double total = 0;
    for (int i = 0; i < o.repeat; ++i) {
      auto t0 = std::chrono::steady_clock::now();
      ResultTable t = data ? evaluate_local(m, *data) : ex->execute(m);
      total += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      r.rows = t.size();
    }
    r.mean_ms = total / o.repeat;
    return r;
  };
  Result opt = measure(generate(f));
  Result nv = measure(naive_generate(f));

  out << std::fixed << std::setprecision(2);
  out << "variant    subquery_count  bytes  rows  mean_ms\n";
  auto line = [&](const char* name, const Result& r) {
    out << std::left << std::setw(11) << name << std::setw(16) << r.subqueries << std::setw(7) << r.bytes
        << std::setw(6) << r.rows << r.mean_ms << '\n';
  };
  line("optimized", opt);
  line("naive", nv);
  out << "ratio naive/optimized: " << (opt.mean_ms > 0 ? nv.mean_ms / opt.mean_ms : 0.0) << '\n';
  return kExitOk;
}

int cmd_explore(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.graph_iri.empty()) throw UsageError("explore needs --graph-iri");
  FrameDescriptor f = KnowledgeGraph(o.graph_iri).explore_classes().sort({{"frequency", SortOrder::kDesc}});
  QueryModel m = generate(f);
  ResultTable t;
  if (!o.local.empty()) {
    Dataset d;
    for (const auto& file : o.local) d.add_graph(o.graph_iri).insert_all(parse_ntriples_file(file));
    t = relational::sort_slice(evaluate_local(m, d), {{"frequency", SortOrder::kDesc}}, std::nullopt, std::nullopt);
  } else {
    EndpointConfig c = endpoint_config(o);
    HttpTransport http(c.url, c.timeout);
    t = Executor(http, c).execute(m);
  }
  write_table(out, t, parse_table_format(o.format));
  err << t.size() << " row(s)\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile lazily recorded frame programs over RDF graphs into SPARQL."};
  app.require_subcommand(1);
  Options o;

  auto add_endpoint = [&](CLI::App* sub) {
    sub->add_option("--endpoint", o.endpoint, std::string("SPARQL endpoint URL (default: $") + kEndpointEnv + ")");
    sub->add_option("--timeout", o.timeout_s, "Per-request timeout in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--retries", o.retries, "Retries after a 5xx answer or a timeout")->check(CLI::NonNegativeNumber);
    sub->add_option("--page-size", o.page_size, "Rows per request; 0 disables paging");
  };

  auto* compile_cmd = app.add_subcommand("compile", "Print the SPARQL query of a program");
  compile_cmd->add_option("program", o.program, "Program file")->required()->check(CLI::ExistingFile);
  compile_cmd->add_flag("--naive", o.naive, "One subquery per operator instead of the optimized form");

  auto* run_cmd = app.add_subcommand("run", "Execute a program and print the result table");
  run_cmd->add_option("program", o.program, "Program file")->required()->check(CLI::ExistingFile);
  run_cmd->add_flag("--naive", o.naive, "Execute the naive query");
  run_cmd->add_option("--format", o.format, "csv, tsv or json")->check(CLI::IsMember({"csv", "tsv", "json"}));
  run_cmd->add_option("--local", o.local, "Evaluate in-process over N-Triples files ([IRI=]FILE)");
  add_endpoint(run_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check a program against the relational oracle on local graphs");
  verify_cmd->add_option("program", o.program, "Program file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--graph", o.graphs, "N-Triples file, or IRI=FILE when the program reads several graphs")
      ->required();
  verify_cmd->add_flag("--mutate-optional", o.mutate_optional,
                       "Test hook: compile optional expansions as mandatory (must FAIL on data with gaps)");

  auto* bench_cmd = app.add_subcommand("bench", "Compare the optimized and naive queries");
  bench_cmd->add_option("program", o.program, "Program file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--local", o.local, "Evaluate in-process over N-Triples files ([IRI=]FILE)");
  bench_cmd->add_option("--repeat", o.repeat, "Runs per variant")->check(CLI::PositiveNumber);
  add_endpoint(bench_cmd);

  auto* explore_cmd = app.add_subcommand("explore", "List the classes of a graph by instance count");
  explore_cmd->add_option("--graph-iri", o.graph_iri, "Graph IRI")->required();
  explore_cmd->add_option("--local", o.local, "N-Triples files of the graph");
  explore_cmd->add_option("--format", o.format, "csv, tsv or json")->check(CLI::IsMember({"csv", "tsv", "json"}));
  add_endpoint(explore_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compile_cmd) return cmd_compile(o, out);
    if (*run_cmd) return cmd_run(o, out, err);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*bench_cmd) return cmd_bench(o, out);
    return cmd_explore(o, out, err);
  } catch (const TimeoutError& e) {
    err << "error: " << e.what() << '\n';
    return kExitTimeout;
  } catch (const EndpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitEndpoint;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace kgframe
