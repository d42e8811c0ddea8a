#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "voidext/endpoint.hpp"

#include <array>
#include <chrono>
#include <cstdlib>

namespace voidext {

namespace {

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path?query
};

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError(url, 0, "not an absolute URL");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

const char* proxy_env(bool https) {
  static const std::array<const char*, 2> secure{"https_proxy", "HTTPS_PROXY"};
  static const std::array<const char*, 2> plain{"http_proxy", "HTTP_PROXY"};
  for (const char* name : https ? secure : plain)
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return v;
  return nullptr;
}

std::string host_of(const std::string& origin) {
  std::string h = origin.substr(origin.find("://") + 3);
  if (auto colon = h.rfind(':'); colon != std::string::npos && h.find(']') == std::string::npos) h.resize(colon);
  return h;
}

bool bypass_proxy(const std::string& host) {
  const char* list = std::getenv("no_proxy");
  if (list == nullptr || *list == '\0') list = std::getenv("NO_PROXY");
  if (list == nullptr) return false;
  std::string entries = list;
  std::size_t start = 0;
  while (start <= entries.size()) {
    auto end = entries.find(',', start);
    if (end == std::string::npos) end = entries.size();
    std::string e = entries.substr(start, end - start);
    e.erase(0, e.find_first_not_of(' '));
    e.erase(e.find_last_not_of(' ') + 1);
    if (!e.empty() && e.front() == '.') e.erase(0, 1);
    if (e == "*" || e == host) return true;
    if (!e.empty() && host.size() > e.size() && host.compare(host.size() - e.size(), e.size(), e) == 0 &&
        host[host.size() - e.size() - 1] == '.')
      return true;
    start = end + 1;
  }
  return false;
}

void apply_proxy(httplib::Client& client, const std::string& origin) {
  const char* proxy = proxy_env(origin.rfind("https://", 0) == 0);
  if (proxy == nullptr || bypass_proxy(host_of(origin))) return;
  std::string p = proxy;
  if (auto s = p.find("://"); s != std::string::npos) p = p.substr(s + 3);
  if (auto at = p.rfind('@'); at != std::string::npos) p = p.substr(at + 1);
  if (auto slash = p.find('/'); slash != std::string::npos) p = p.substr(0, slash);
  const auto colon = p.rfind(':');
  if (colon == std::string::npos) {
    client.set_proxy(p, 80);
  } else {
    client.set_proxy(p.substr(0, colon), std::stoi(p.substr(colon + 1)));
  }
}

} // namespace

HttpResponse HttpTransport::send(const HttpRequest& request) {
  const auto parts = split_url(request.url);
  const std::string endpoint = request.endpoint.empty() ? request.url : request.endpoint;
  httplib::Client client(parts.origin);
  client.set_follow_location(true);
  const auto timeout = std::chrono::milliseconds(request.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  apply_proxy(client, parts.origin);

  httplib::Headers headers;
  std::string content_type = "application/x-www-form-urlencoded";
  for (const auto& [k, v] : request.headers) {
    if (k == "Content-Type")
      content_type = v;
    else
      headers.emplace(k, v);
  }

  const auto start = std::chrono::steady_clock::now();
  auto result = request.method == "POST" ? client.Post(parts.path, headers, request.body, content_type)
                                         : client.Get(parts.path, headers);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (!result) throw TransportError(endpoint, 0, httplib::to_string(result.error()));

  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  response.content_type = result->get_header_value("Content-Type");
  response.elapsed_ms = static_cast<long>(elapsed);
  return response;
}

} // namespace voidext
