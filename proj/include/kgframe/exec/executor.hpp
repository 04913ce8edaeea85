#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "kgframe/exec/transport.hpp"
#include "kgframe/frame/frame.hpp"
#include "kgframe/oracle/table.hpp"
#include "kgframe/query/model.hpp"
#include "kgframe/rdf/graph_store.hpp"

namespace kgframe {

// Environment variable holding the default endpoint URL.
inline constexpr const char* kEndpointEnv = "KGFRAME_ENDPOINT";

struct EndpointConfig {
  std::string url;
  std::size_t page_size = 10000;  // 0 disables pagination
  int max_retries = 3;            // extra attempts after a 5xx, 429 or timeout
  std::chrono::milliseconds timeout{60000};
  std::chrono::milliseconds backoff{200};  // doubled per retry
  std::size_t max_get_bytes = 2000;        // longer encoded queries go by POST
  // Pages get ORDER BY over every projected variable so that windows do not
  // overlap on endpoints with unstable result order.
  bool stable_order = true;

  // url from KGFRAME_ENDPOINT when set.
  static EndpointConfig from_env();
};

struct ExecStats {
  std::size_t requests = 0;  // including retries
  std::size_t retries = 0;
  std::size_t pages = 0;
};

// The query for one page: the model's own window [offset, offset+limit)
// narrowed to [start, start+count) of it, one extra row requested as the
// "more pages" sentinel when the window may continue.
QueryModel page_query(const QueryModel& m, std::int64_t start, std::int64_t count, bool sentinel,
                      bool stable_order);

// Percent-encoded length of a form value, to pick GET or POST.
std::size_t encoded_length(const std::string& value);

// Sends compiled queries to an endpoint and pages through the results.
// Nothing is sent until execute() is called.
class Executor {
 public:
  Executor(Transport& transport, EndpointConfig config);

  // Emits, pages and concatenates. Columns are the model's projection.
  ResultTable execute(const QueryModel& m);
  // Compiles the frame (optimized unless `naive`) and executes it.
  ResultTable execute(const FrameDescriptor& frame, bool naive = false);
  // One request, no paging.
  ResultTable execute_text(const std::string& sparql);

  const ExecStats& stats() const noexcept { return stats_; }
  const EndpointConfig& config() const noexcept { return config_; }

 private:
  ResultTable request(const std::string& sparql);

  Transport& transport_;
  EndpointConfig config_;
  ExecStats stats_;
};

// In-process evaluation of a model over a local dataset (reference algebra),
// with the model's projection as column order.
ResultTable evaluate_local(const QueryModel& m, const Dataset& data);

}  // namespace kgframe
