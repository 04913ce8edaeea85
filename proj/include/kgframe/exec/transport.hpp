#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace kgframe {

struct HttpRequest {
  enum class Method { kGet, kPost };
  Method method = Method::kGet;
  // Form fields: sent as the query string for GET, url-encoded body for POST.
  std::vector<std::pair<std::string, std::string>> params;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// One round trip to a SPARQL endpoint. Implementations throw TimeoutError
// when the endpoint does not answer in time and EndpointError when the
// connection fails; HTTP error statuses are returned, not thrown.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

// Plain HTTP (and HTTPS when built with OpenSSL) via cpp-httplib.
class HttpTransport final : public Transport {
 public:
  // url: scheme://host[:port]/path. Throws EndpointError when it is not one.
  HttpTransport(const std::string& url, std::chrono::milliseconds timeout);
  ~HttpTransport() override;

  HttpResponse send(const HttpRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Counts requests and forwards them; used to prove laziness.
class CountingTransport final : public Transport {
 public:
  explicit CountingTransport(Transport& inner) : inner_(inner) {}
  HttpResponse send(const HttpRequest& request) override {
    ++count_;
    return inner_.send(request);
  }
  std::size_t count() const noexcept { return count_; }

 private:
  Transport& inner_;
  std::size_t count_ = 0;
};

}  // namespace kgframe
