#include "kgframe/exec/transport.hpp"

#include <httplib.h>

#include <regex>

#include "kgframe/error.hpp"

namespace kgframe {

struct HttpTransport::Impl {
  std::unique_ptr<httplib::Client> client;
  std::string path;
};

HttpTransport::HttpTransport(const std::string& url, std::chrono::milliseconds timeout) : impl_(std::make_unique<Impl>()) {
  static const std::regex kUrl(R"(^(https?)://([^/:?#]+)(:\d+)?(/[^#]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) throw EndpointError("not an http(s) endpoint URL: '" + url + "'");
  std::string origin = m[1].str() + "://" + m[2].str() + m[3].str();
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (m[1] == "https") throw EndpointError("https endpoints need a build with OpenSSL");
#endif
  impl_->client = std::make_unique<httplib::Client>(origin);
  impl_->path = m[4].matched && !m[4].str().empty() ? m[4].str() : "/";
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  impl_->client->set_connection_timeout(secs.count(), usecs.count());
  impl_->client->set_read_timeout(secs.count(), usecs.count());
  impl_->client->set_write_timeout(secs.count(), usecs.count());
  impl_->client->set_follow_location(true);
}

HttpTransport::~HttpTransport() = default;

HttpResponse HttpTransport::send(const HttpRequest& request) {
  httplib::Params params;
  for (const auto& [k, v] : request.params) params.emplace(k, v);
  httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
  httplib::Result res = request.method == HttpRequest::Method::kGet
                            ? impl_->client->Get(impl_->path, params, headers)
                            : impl_->client->Post(impl_->path, headers, params);
  if (!res) {
    auto err = res.error();
    // a read that runs out of time surfaces as Error::Read
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
      throw TimeoutError("endpoint did not answer in time (" + httplib::to_string(err) + ")");
    throw EndpointError("cannot reach endpoint: " + httplib::to_string(err));
  }
  return {res->status, res->body};
}

}  // namespace kgframe
