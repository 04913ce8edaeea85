#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "kgframe/oracle/table.hpp"

namespace kgframe::testing {

// A local SPARQL endpoint over HTTP that answers every query with a window
// of a fixed table, honouring the last LIMIT and OFFSET in the query text.
class MockEndpoint {
 public:
  explicit MockEndpoint(ResultTable rows);
  ~MockEndpoint();

  std::string url() const;

  // The next `n` requests answer with `status` and no results.
  void fail_next(int n, int status = 500);
  // Every request sleeps this long before answering.
  void set_delay_ms(int ms) { delay_ms_ = ms; }

  std::size_t requests() const { return requests_; }
  std::size_t get_requests() const { return gets_; }
  std::size_t post_requests() const { return posts_; }
  std::vector<std::string> queries() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> failures_{0};
  std::atomic<int> failure_status_{500};
  std::atomic<int> delay_ms_{0};
  std::atomic<std::size_t> requests_{0}, gets_{0}, posts_{0};
  mutable std::mutex mu_;
  std::vector<std::string> queries_;
};

// Table of `n` rows with one IRI column ?x (<http://ex.org/r0>, ...).
ResultTable numbered_rows(std::size_t n);

}  // namespace kgframe::testing
