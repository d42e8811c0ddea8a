#pragma once

#include "voidext/catalog.hpp"
#include "voidext/rdf.hpp"

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voidext {

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::string body;
  std::map<std::string, std::string> headers;
  long timeout_ms = 30000;
  // The SPARQL endpoint and query text this request carries.
  std::string endpoint;
  std::string query;
};

struct HttpResponse {
  int status = 0;
  std::string content_type;
  std::string body;
  long elapsed_ms = 0;
};

class TransportError : public std::runtime_error {
public:
  TransportError(std::string endpoint, int status, const std::string& message)
      : std::runtime_error(endpoint + (status > 0 ? " (HTTP " + std::to_string(status) + ")" : "") + ": " + message),
        endpoint_(std::move(endpoint)),
        status_(status) {}
  const std::string& endpoint() const { return endpoint_; }
  int status() const { return status_; }

private:
  std::string endpoint_;
  int status_;
};

/// Send a request, get a response. Implementations must be safe to call
/// from several threads at once.
class Transport {
public:
  virtual ~Transport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// HTTP(S) via cpp-httplib. Honours https_proxy / http_proxy and no_proxy.
class HttpTransport : public Transport {
public:
  HttpResponse send(const HttpRequest& request) override;
};

/// Replays recorded exchanges. A recorded request matches on method, URL
/// and body, or on endpoint plus whitespace-normalised query text.
class TranscriptTransport : public Transport {
public:
  static TranscriptTransport from_json(std::string_view json);
  static TranscriptTransport load(const std::string& path);

  void add(HttpRequest request, HttpResponse response);
  HttpResponse send(const HttpRequest& request) override;
  std::size_t size() const { return exchanges_.size(); }

private:
  std::vector<std::pair<HttpRequest, HttpResponse>> exchanges_;
};

/// Passes requests through and keeps every exchange for later replay.
class RecordingTransport : public Transport {
public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}
  HttpResponse send(const HttpRequest& request) override;
  /// Exchanges sorted by (endpoint, query, url, body).
  std::string to_json() const;
  void save(const std::string& path) const;

private:
  Transport& inner_;
  mutable std::mutex mutex_;
  std::vector<std::pair<HttpRequest, HttpResponse>> exchanges_;
};

/// Retries transport failures and 5xx responses with exponential backoff.
class RetryingTransport : public Transport {
public:
  RetryingTransport(Transport& inner, int retries, long base_delay_ms = 200)
      : inner_(inner), retries_(retries), base_delay_ms_(base_delay_ms) {}
  HttpResponse send(const HttpRequest& request) override;

private:
  Transport& inner_;
  int retries_;
  long base_delay_ms_;
};

std::string url_encode(std::string_view s);
std::string url_decode(std::string_view s);

struct SparqlResult {
  std::vector<std::string> variables;
  std::vector<Binding> rows;

  friend bool operator==(const SparqlResult&, const SparqlResult&) = default;
};

/// Parses an application/sparql-results+json document.
SparqlResult parse_sparql_results(std::string_view json, const std::string& endpoint = {});

/// GET when the encoded query fits in 2000 bytes, POST form otherwise.
HttpRequest select_request(const std::string& endpoint, const std::string& query, long timeout_ms);

/// Single attempt; never retries.
SparqlResult execute_select(Transport& transport, const std::string& endpoint, const std::string& query,
                            long timeout_ms = 30000);

/// SPARQL syntax for a term (VALUES blocks).
std::string sparql_term(const Term& term);

struct ProbeOptions {
  std::size_t sample_limit = 100;
  std::size_t batch_size = 50;
  std::size_t parallel = 4;
  long timeout_ms = 30000;
  PrefixMap prefixes;
};

// coverage is matched / sampled: the share of sampled source resources
// whose mapped counterpart exists in the target dataset. It is a lower
// bound proxy for recall, not a precision/recall measurement.
struct ProbeReport {
  std::string link_set;
  std::string source_endpoint;
  std::string target_endpoint;
  std::size_t sampled = 0;
  std::size_t matched = 0;
  std::optional<double> coverage;
  long elapsed_ms = 0;
  std::vector<std::string> errors;
};

std::string probe_report_json(const ProbeReport& report, int indent = 2);

/// The source-side sampling query and the target-side VALUES query for one
/// batch, as sent by probe_link_set.
std::string probe_source_query(const VirtualLinkTuple& tuple, const ProbeOptions& options);
std::string probe_target_query(const VirtualLinkTuple& tuple, const std::vector<Term>& values,
                               const ProbeOptions& options);

ProbeReport probe_link_set(Transport& transport, const VirtualLinkTuple& tuple, const ProbeOptions& options = {});

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  std::string to_string() const;
  friend auto operator<=>(const Date&, const Date&) = default;
};

/// YYYY, YYYY-MM or YYYY-MM-DD (a time part is ignored). Missing month or
/// day count as the first.
std::optional<Date> parse_date(std::string_view s);

class StalenessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct StalenessVerdict {
  std::string link_set;
  Date metadata_date;
  Date reference_date;
  bool stale = false;
};

StalenessVerdict assess_staleness(const std::string& link_set, const std::optional<std::string>& issued,
                                  const std::optional<std::string>& modified, const std::string& reference_date);

class PerformanceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Adds `ls voidext:hasPerformanceMeasure _:m . _:m rdfs:label name ;
/// rdf:value value^^xsd:decimal`.
Graph attach_performance(Graph graph, const std::string& link_set, const std::string& name, double value);
Graph attach_performance(Graph graph, const std::string& link_set, const std::string& name,
                         const std::string& decimal_lexical);

/// (name, lexical value) pairs sorted by name.
std::vector<std::pair<std::string, std::string>> read_performance(const Graph& graph, const std::string& link_set);

} // namespace voidext
