#include "voidext/endpoint.hpp"

#include "voidext/scaffold.hpp"
#include "voidext/sparql_lexer.hpp"
#include "voidext/vocab.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace voidext {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string query_param(std::string_view encoded_pairs) {
  std::size_t pos = 0;
  while (pos <= encoded_pairs.size()) {
    auto end = encoded_pairs.find('&', pos);
    if (end == std::string_view::npos) end = encoded_pairs.size();
    const auto pair = encoded_pairs.substr(pos, end - pos);
    if (pair.rfind("query=", 0) == 0) return url_decode(pair.substr(6));
    pos = end + 1;
  }
  return {};
}

// Endpoint and query text recovered from a raw request when the caller did
// not fill them in.
std::pair<std::string, std::string> logical(const HttpRequest& r) {
  if (!r.endpoint.empty() || !r.query.empty()) return {r.endpoint, r.query};
  const auto q = r.url.find('?');
  if (r.method == "GET" && q != std::string::npos) return {r.url.substr(0, q), query_param(r.url.substr(q + 1))};
  return {r.url, query_param(r.body)};
}

ordered_json exchange_json(const HttpRequest& req, const HttpResponse& resp) {
  const auto [endpoint, query] = logical(req);
  return {{"request", {{"method", req.method}, {"url", req.url}, {"body", req.body}, {"endpoint", endpoint}, {"query", query}}},
          {"response",
           {{"status", resp.status}, {"content_type", resp.content_type}, {"body", resp.body}, {"elapsed_ms", resp.elapsed_ms}}}};
}

std::string format_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc()) throw PerformanceError("cannot format " + std::to_string(v));
  std::string s(buf, end);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

bool is_decimal_lexical(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  bool digits = false;
  bool dot = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i])))
      digits = true;
    else if (s[i] == '.' && !dot)
      dot = true;
    else
      return false;
  }
  return digits;
}

} // namespace

// ---------------------------------------------------------------------------
// Transports

TranscriptTransport TranscriptTransport::from_json(std::string_view text) {
  TranscriptTransport t;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw TransportError("transcript", 0, std::string("malformed transcript: ") + e.what());
  }
  for (const auto& ex : doc.at("exchanges")) {
    HttpRequest req;
    const auto& r = ex.at("request");
    req.method = r.value("method", "GET");
    req.url = r.value("url", "");
    req.body = r.value("body", "");
    req.endpoint = r.value("endpoint", "");
    req.query = r.value("query", "");
    HttpResponse resp;
    const auto& s = ex.at("response");
    resp.status = s.value("status", 200);
    resp.content_type = s.value("content_type", "application/sparql-results+json");
    const auto& body = s.at("body");
    resp.body = body.is_string() ? body.get<std::string>() : body.dump();
    resp.elapsed_ms = s.value("elapsed_ms", 0L);
    t.add(std::move(req), std::move(resp));
  }
  return t;
}

TranscriptTransport TranscriptTransport::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TransportError(path, 0, "cannot read transcript");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void TranscriptTransport::add(HttpRequest request, HttpResponse response) {
  exchanges_.emplace_back(std::move(request), std::move(response));
}

HttpResponse TranscriptTransport::send(const HttpRequest& request) {
  const auto [endpoint, query] = logical(request);
  const auto normalized = normalize_sparql(query);
  for (const auto& [req, resp] : exchanges_) {
    if (!req.url.empty() && req.method == request.method && req.url == request.url && req.body == request.body)
      return resp;
    if (req.url.empty() && req.endpoint == endpoint && normalize_sparql(req.query) == normalized) return resp;
  }
  throw TransportError(endpoint, 0, "no recorded response for this request");
}

HttpResponse RecordingTransport::send(const HttpRequest& request) {
  auto response = inner_.send(request);
  std::lock_guard lock(mutex_);
  exchanges_.emplace_back(request, response);
  return response;
}

std::string RecordingTransport::to_json() const {
  std::vector<std::pair<HttpRequest, HttpResponse>> sorted;
  {
    std::lock_guard lock(mutex_);
    sorted = exchanges_;
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.endpoint, a.first.query, a.first.url, a.first.body) <
           std::tie(b.first.endpoint, b.first.query, b.first.url, b.first.body);
  });
  ordered_json doc;
  doc["exchanges"] = ordered_json::array();
  for (const auto& [req, resp] : sorted) doc["exchanges"].push_back(exchange_json(req, resp));
  return doc.dump(2) + "\n";
}

void RecordingTransport::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TransportError(path, 0, "cannot write transcript");
  out << to_json();
}

HttpResponse RetryingTransport::send(const HttpRequest& request) {
  for (int attempt = 0;; ++attempt) {
    try {
      auto response = inner_.send(request);
      if (response.status < 500 || attempt >= retries_) return response;
    } catch (const TransportError&) {
      if (attempt >= retries_) throw;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(base_delay_ms_ << attempt));
  }
}

// ---------------------------------------------------------------------------
// SPARQL protocol

std::string url_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out += ' ';
    } else if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
               std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

SparqlResult parse_sparql_results(std::string_view text, const std::string& endpoint) {
  SparqlResult r;
  try {
    const auto doc = json::parse(text);
    for (const auto& v : doc.at("head").value("vars", json::array())) r.variables.push_back(v.get<std::string>());
    for (const auto& row : doc.at("results").at("bindings")) {
      Binding b;
      for (const auto& [name, cell] : row.items()) {
        const auto type = cell.at("type").get<std::string>();
        const auto value = cell.at("value").get<std::string>();
        if (type == "uri")
          b[name] = Term::iri(value);
        else if (type == "bnode")
          b[name] = Term::blank(value);
        else if (type == "literal" || type == "typed-literal")
          b[name] = Term::literal(value, cell.value("datatype", ""), cell.value("xml:lang", ""));
        else
          throw TransportError(endpoint, 0, "unknown term type " + type);
      }
      r.rows.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    throw TransportError(endpoint, 0, std::string("malformed results document: ") + e.what());
  } catch (const RdfError& e) {
    throw TransportError(endpoint, 0, std::string("malformed results document: ") + e.what());
  }
  return r;
}

HttpRequest select_request(const std::string& endpoint, const std::string& query, long timeout_ms) {
  HttpRequest req;
  req.endpoint = endpoint;
  req.query = query;
  req.timeout_ms = timeout_ms;
  req.headers["Accept"] = "application/sparql-results+json";
  const auto encoded = url_encode(query);
  if (encoded.size() <= 2000) {
    req.method = "GET";
    req.url = endpoint + (endpoint.find('?') == std::string::npos ? "?" : "&") + "query=" + encoded;
  } else {
    req.method = "POST";
    req.url = endpoint;
    req.body = "query=" + encoded;
    req.headers["Content-Type"] = "application/x-www-form-urlencoded";
  }
  return req;
}

SparqlResult execute_select(Transport& transport, const std::string& endpoint, const std::string& query,
                            long timeout_ms) {
  if (endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0)
    throw TransportError(endpoint, 0, "endpoint must be an http(s) IRI");
  const auto response = transport.send(select_request(endpoint, query, timeout_ms));
  if (response.status >= 400) throw TransportError(endpoint, response.status, "request failed");
  return parse_sparql_results(response.body, endpoint);
}

std::string sparql_term(const Term& t) {
  if (t.is_iri()) return "<" + t.value() + ">";
  if (t.is_blank()) return "_:" + t.value();
  std::string out = "\"";
  for (char c : t.value()) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
  out += '"';
  if (!t.lang().empty())
    out += "@" + t.lang();
  else if (t.datatype() != xsd::string_)
    out += "^^<" + t.datatype() + ">";
  return out;
}

// ---------------------------------------------------------------------------
// Probing

namespace {

struct ProbePlan {
  int source = 1;
  int target = 2;
  std::string in_var;
  std::string out_var;
};

ProbePlan plan(const VirtualLinkTuple& t) {
  ProbePlan p;
  if (t.f_m) {
    p.source = t.holder_side == 0 ? 1 : t.holder_side;
    p.in_var = t.f_m->input_var;
    p.out_var = t.f_m->output_var;
  } else {
    p.in_var = p.out_var = "vlj_0";
  }
  p.target = 3 - p.source;
  return p;
}

PrefixMap probe_prefixes(const ProbeOptions& o) {
  PrefixMap p = vocab::standard_prefixes();
  p.merge(o.prefixes);
  return p;
}

const std::string& endpoint_of(const VirtualLinkTuple& t, int side) {
  const auto& e = t.dataset(side).endpoint;
  if (!e) throw TransportError(t.vl, 0, "dataset on side " + std::to_string(side) + " has no endpoint");
  return *e;
}

} // namespace

std::string probe_source_query(const VirtualLinkTuple& t, const ProbeOptions& o) {
  const auto p = plan(t);
  const auto prefixes = probe_prefixes(o);
  std::size_t fresh = 1;
  std::string body = side_pattern(t, p.source, p.in_var, prefixes, fresh);
  if (t.f_m) body += "\n" + t.f_m->snippet;
  std::string q = "SELECT DISTINCT ?" + p.in_var;
  if (p.out_var != p.in_var) q += " ?" + p.out_var;
  q += " WHERE {\n" + body + "\n}\nORDER BY ?" + p.in_var + "\nLIMIT " + std::to_string(o.sample_limit) + "\n";
  return prologue_for(q, prefixes) + q;
}

std::string probe_target_query(const VirtualLinkTuple& t, const std::vector<Term>& values, const ProbeOptions& o) {
  const auto p = plan(t);
  const auto prefixes = probe_prefixes(o);
  std::size_t fresh = 1;
  std::string q = "SELECT DISTINCT ?" + p.out_var + " WHERE {\nVALUES ?" + p.out_var + " {";
  for (const auto& v : values) q += " " + sparql_term(v);
  q += " }\n" + side_pattern(t, p.target, p.out_var, prefixes, fresh) + "\n}\n";
  return prologue_for(q, prefixes) + q;
}

ProbeReport probe_link_set(Transport& transport, const VirtualLinkTuple& t, const ProbeOptions& o) {
  if (o.sample_limit < 1) throw std::invalid_argument("sample_limit must be at least 1");
  if (o.batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  const auto p = plan(t);
  ProbeReport report;
  report.link_set = t.vl;
  report.source_endpoint = endpoint_of(t, p.source);
  report.target_endpoint = endpoint_of(t, p.target);

  auto timed = [&](const std::string& endpoint, const std::string& query) {
    const auto response = transport.send(select_request(endpoint, query, o.timeout_ms));
    if (response.status >= 400) throw TransportError(endpoint, response.status, "request failed");
    return std::make_pair(parse_sparql_results(response.body, endpoint), response.elapsed_ms);
  };

  std::map<Term, std::set<Term>> mapped;
  try {
    auto [result, ms] = timed(report.source_endpoint, probe_source_query(t, o));
    report.elapsed_ms += ms;
    for (const auto& row : result.rows) {
      auto in = row.find(p.in_var);
      if (in == row.end()) continue;
      auto& outs = mapped[in->second];
      auto out = row.find(p.out_var);
      if (out != row.end()) outs.insert(out->second);
    }
  } catch (const TransportError& e) {
    report.errors.push_back(std::string("source query: ") + e.what());
    return report;
  }
  report.sampled = mapped.size();
  if (report.sampled == 0) return report;

  std::set<Term> candidates;
  for (const auto& [_, outs] : mapped) candidates.insert(outs.begin(), outs.end());
  std::vector<std::vector<Term>> batches;
  for (const auto& c : candidates) {
    if (batches.empty() || batches.back().size() == o.batch_size) batches.emplace_back();
    batches.back().push_back(c);
  }

  struct BatchResult {
    std::set<Term> found;
    long elapsed_ms = 0;
    std::optional<std::string> error;
  };
  std::vector<BatchResult> results(batches.size());
  auto run_batch = [&](std::size_t i) {
    BatchResult r;
    try {
      auto [result, ms] = timed(report.target_endpoint, probe_target_query(t, batches[i], o));
      r.elapsed_ms = ms;
      for (const auto& row : result.rows) {
        auto it = row.find(p.out_var);
        if (it != row.end()) r.found.insert(it->second);
      }
    } catch (const TransportError& e) {
      r.error = "batch " + std::to_string(i + 1) + ": " + e.what();
    }
    return r;
  };
  const std::size_t width = std::max<std::size_t>(1, o.parallel);
  for (std::size_t start = 0; start < batches.size(); start += width) {
    std::vector<std::future<BatchResult>> wave;
    for (std::size_t i = start; i < std::min(batches.size(), start + width); ++i)
      wave.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, run_batch, i));
    for (std::size_t k = 0; k < wave.size(); ++k) results[start + k] = wave[k].get();
  }

  std::set<Term> found;
  for (const auto& r : results) {
    report.elapsed_ms += r.elapsed_ms;
    found.insert(r.found.begin(), r.found.end());
    if (r.error) report.errors.push_back(*r.error);
  }
  for (const auto& [_, outs] : mapped)
    if (std::any_of(outs.begin(), outs.end(), [&](const Term& x) { return found.contains(x); })) ++report.matched;
  report.coverage = static_cast<double>(report.matched) / static_cast<double>(report.sampled);
  return report;
}

std::string probe_report_json(const ProbeReport& r, int indent) {
  ordered_json j;
  j["link_set"] = r.link_set;
  j["source_endpoint"] = r.source_endpoint;
  j["target_endpoint"] = r.target_endpoint;
  j["sampled"] = r.sampled;
  j["matched"] = r.matched;
  j["coverage"] = r.coverage ? ordered_json(*r.coverage) : ordered_json(nullptr);
  j["measure"] = "directional coverage (lower-bound proxy)";
  j["elapsed_ms"] = r.elapsed_ms;
  j["errors"] = r.errors;
  return j.dump(indent);
}

// ---------------------------------------------------------------------------
// Maintenance

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::optional<Date> parse_date(std::string_view s) {
  if (!is_iso8601_date(s)) return std::nullopt;
  Date d;
  d.year = std::stoi(std::string(s.substr(0, 4)));
  if (s.size() >= 7) d.month = std::stoi(std::string(s.substr(5, 2)));
  if (s.size() >= 10) d.day = std::stoi(std::string(s.substr(8, 2)));
  return d;
}

StalenessVerdict assess_staleness(const std::string& link_set, const std::optional<std::string>& issued,
                                  const std::optional<std::string>& modified, const std::string& reference_date) {
  std::optional<Date> latest;
  for (const auto* v : {&issued, &modified}) {
    if (!*v) continue;
    const auto d = parse_date(**v);
    if (!d) throw StalenessError(link_set + ": unparseable date " + **v);
    if (!latest || *d > *latest) latest = d;
  }
  if (!latest) throw StalenessError(link_set + ": no issued or modified date");
  const auto reference = parse_date(reference_date);
  if (!reference) throw StalenessError("unparseable reference date " + reference_date);
  return {link_set, *latest, *reference, *latest < *reference};
}

Graph attach_performance(Graph graph, const std::string& link_set, const std::string& name, double value) {
  return attach_performance(std::move(graph), link_set, name, format_decimal(value));
}

Graph attach_performance(Graph graph, const std::string& link_set, const std::string& name,
                         const std::string& decimal_lexical) {
  const Term ls = node_term(link_set);
  bool typed = false;
  for (const auto* cls : {&vocab::VirtualLinkSet, &vocab::ComplexLinkSet, &vocab::SimpleLinkSet})
    typed = typed || graph.has_type(ls, Term::iri(*cls));
  if (!typed) throw PerformanceError(link_set + " is not typed as a virtual link set");
  if (!is_decimal_lexical(decimal_lexical)) throw PerformanceError("not a decimal: " + decimal_lexical);
  const Term m = graph.fresh_blank();
  graph.insert(ls, Term::iri(vocab::hasPerformanceMeasure), m);
  graph.insert(m, Term::iri(vocab::label), Term::literal(name));
  graph.insert(m, Term::iri(rdf::value), Term::literal(decimal_lexical, xsd::decimal));
  return graph;
}

std::vector<std::pair<std::string, std::string>> read_performance(const Graph& graph, const std::string& link_set) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& m : graph.objects(node_term(link_set), Term::iri(vocab::hasPerformanceMeasure))) {
    const auto labels = graph.objects(m, Term::iri(vocab::label));
    const auto values = graph.objects(m, Term::iri(rdf::value));
    if (labels.empty() || values.empty()) continue;
    out.emplace_back(labels.front().value(), values.front().value());
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace voidext
