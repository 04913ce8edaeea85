#include "kgframe/exec/executor.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "kgframe/error.hpp"
#include "kgframe/exec/table_io.hpp"
#include "kgframe/oracle/algebra.hpp"
#include "kgframe/query/emitter.hpp"
#include "kgframe/query/generator.hpp"

namespace kgframe {

EndpointConfig EndpointConfig::from_env() {
  EndpointConfig c;
  if (const char* url = std::getenv(kEndpointEnv)) c.url = url;
  return c;
}

QueryModel page_query(const QueryModel& m, std::int64_t start, std::int64_t count, bool sentinel, bool stable_order) {
  QueryModel p = m;
  if (stable_order) {
    for (const auto& v : visible_vars(m)) {
      bool keyed = std::any_of(p.order.begin(), p.order.end(), [&](const OrderSpec& o) { return o.var == v; });
      if (!keyed) p.order.push_back({v, SortOrder::kAsc});
    }
  }
  std::int64_t offset = m.offset.value_or(0) + start;
  std::int64_t limit = count + (sentinel ? 1 : 0);
  if (m.limit) limit = std::min(limit, *m.limit - start);
  p.limit = std::max<std::int64_t>(0, limit);
  p.offset = offset > 0 ? std::optional<std::int64_t>(offset) : std::nullopt;
  return p;
}

std::size_t encoded_length(const std::string& value) {
  std::size_t n = 0;
  for (unsigned char c : value) n += (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') ? 1 : 3;
  return n;
}

Executor::Executor(Transport& transport, EndpointConfig config) : transport_(transport), config_(std::move(config)) {}

namespace {

// Reorders (or pads) a page to the expected column list.
ResultTable align(const ResultTable& t, const std::vector<std::string>& columns) {
  ResultTable out;
  out.columns = columns;
  std::vector<std::optional<std::size_t>> src;
  for (const auto& c : columns) src.push_back(t.index_of(c));
  for (const auto& r : t.rows) {
    Row n;
    for (const auto& i : src) n.push_back(i ? r[*i] : Cell{});
    out.rows.push_back(std::move(n));
  }
  return out;
}

}  // namespace

ResultTable Executor::request(const std::string& sparql) {
  HttpRequest req;
  req.params = {{"query", sparql}};
  req.method = encoded_length(sparql) + 6 > config_.max_get_bytes ? HttpRequest::Method::kPost : HttpRequest::Method::kGet;
  auto wait = config_.backoff;
  for (int attempt = 0;; ++attempt) {
    bool last = attempt >= config_.max_retries;
    ++stats_.requests;
    if (attempt > 0) ++stats_.retries;
    try {
      HttpResponse res = transport_.send(req);
      if (res.status >= 200 && res.status < 300) return parse_results_json(res.body);
      bool transient = res.status >= 500 || res.status == 429;
      if (!transient || last)
        throw EndpointError("endpoint answered HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200),
                            res.status);
    } catch (const TimeoutError&) {
      if (last) throw;
    }
    if (wait.count() > 0) std::this_thread::sleep_for(wait);
    wait *= 2;
  }
}

ResultTable Executor::execute_text(const std::string& sparql) { return request(sparql); }

ResultTable Executor::execute(const QueryModel& m) {
  const std::vector<std::string> columns = visible_vars(m);
  ResultTable out;
  out.columns = columns;
  if (config_.page_size == 0) {
    ++stats_.pages;
    return align(request(emit_sparql(m)), columns);
  }
  const auto page = static_cast<std::int64_t>(config_.page_size);
  for (std::int64_t start = 0;;) {
    std::int64_t count = page;
    bool sentinel = true;
    if (m.limit) {
      std::int64_t remaining = *m.limit - start;
      if (remaining <= 0) break;
      if (remaining <= page) {
        count = remaining;
        sentinel = false;
      }
    }
    ResultTable t = align(request(emit_sparql(page_query(m, start, count, sentinel, config_.stable_order))), columns);
    ++stats_.pages;
    bool more = sentinel && static_cast<std::int64_t>(t.rows.size()) > count;
    if (static_cast<std::int64_t>(t.rows.size()) > count) t.rows.resize(static_cast<std::size_t>(count));
    for (auto& r : t.rows) out.rows.push_back(std::move(r));
    if (!more) break;
    start += count;
  }
  return out;
}

ResultTable Executor::execute(const FrameDescriptor& frame, bool naive) {
  return execute(naive ? naive_generate(frame) : generate(frame));
}

ResultTable evaluate_local(const QueryModel& m, const Dataset& data) {
  const std::vector<std::string> columns = visible_vars(m);
  return solution_to_table(eval_pattern(*lower_model(m), data), &columns);
}

}  // namespace kgframe
