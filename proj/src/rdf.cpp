#include "voidext/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace voidext {

bool is_absolute_iri(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    const auto c = static_cast<unsigned char>(iri[i]);
    if (c == ':') return true;
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

Term Term::iri(std::string iri) {
  if (!is_absolute_iri(iri)) throw RdfError("not an absolute IRI: <" + iri + ">");
  Term t;
  t.kind_ = Kind::Iri;
  t.value_ = std::move(iri);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype, std::string lang) {
  Term t;
  t.kind_ = Kind::Literal;
  t.value_ = std::move(lexical);
  if (!lang.empty()) {
    if (!datatype.empty() && datatype != rdf::langString)
      throw RdfError("language-tagged literal with datatype <" + datatype + ">");
    t.datatype_ = rdf::langString;
    t.lang_ = std::move(lang);
  } else if (datatype.empty()) {
    t.datatype_ = xsd::string_;
  } else {
    if (datatype == rdf::langString) throw RdfError("rdf:langString literal without a language tag");
    if (!is_absolute_iri(datatype)) throw RdfError("datatype is not an absolute IRI: <" + datatype + ">");
    t.datatype_ = std::move(datatype);
  }
  return t;
}

Term Term::blank(std::string label) {
  if (label.empty()) throw RdfError("empty blank node label");
  Term t;
  t.kind_ = Kind::Blank;
  t.value_ = std::move(label);
  return t;
}

namespace {

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
}

} // namespace

std::string Term::to_string() const {
  std::string out;
  switch (kind_) {
  case Kind::Iri:
    out = "<" + value_ + ">";
    break;
  case Kind::Blank:
    out = "_:" + value_;
    break;
  case Kind::Literal:
    out = "\"";
    escape_into(out, value_);
    out += '"';
    if (!lang_.empty())
      out += "@" + lang_;
    else if (datatype_ != xsd::string_)
      out += "^^<" + datatype_ + ">";
    break;
  }
  return out;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.value_ <=> b.value_; c != 0) return c;
  if (auto c = a.datatype_ <=> b.datatype_; c != 0) return c;
  return a.lang_ <=> b.lang_;
}

void Triple::check() const {
  if (subject.is_literal()) throw RdfError("literal in subject position: " + subject.to_string());
  if (!predicate.is_iri()) throw RdfError("predicate must be an IRI: " + predicate.to_string());
}

// ---------------------------------------------------------------------------
// PrefixMap

std::optional<std::string> PrefixMap::find(const std::string& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string PrefixMap::expand(std::string_view pname) const {
  const auto colon = pname.find(':');
  if (colon == std::string_view::npos) throw RdfError("not a prefixed name: " + std::string(pname));
  const std::string label(pname.substr(0, colon));
  auto it = entries_.find(label);
  if (it == entries_.end()) throw RdfError("undefined prefix '" + label + ":'");
  return it->second + std::string(pname.substr(colon + 1));
}

bool is_valid_local_name(std::string_view local) {
  if (local.empty()) return true;
  auto ok_inner = [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c >= 0x80;
  };
  const auto first = static_cast<unsigned char>(local.front());
  if (!(std::isalnum(first) || first == '_' || first >= 0x80)) return false;
  if (local.back() == '.') return false;
  return std::all_of(local.begin(), local.end(),
                     [&](char c) { return ok_inner(static_cast<unsigned char>(c)); });
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : entries_) {
    const auto& ns = entry.second;
    if (ns.empty() || ns.size() > iri.size() || iri.substr(0, ns.size()) != ns) continue;
    if (!is_valid_local_name(iri.substr(ns.size()))) continue;
    if (best == nullptr || ns.size() > best->second.size()) best = &entry;
  }
  if (best == nullptr) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

void PrefixMap::merge(const PrefixMap& other) {
  for (const auto& [label, ns] : other.entries_) entries_.try_emplace(label, ns);
}

// ---------------------------------------------------------------------------
// Graph

namespace {

void note_blank(const Term& t, std::size_t& next) {
  if (!t.is_blank()) return;
  const auto& v = t.value();
  if (v.size() > 1 && v[0] == 'b' &&
      std::all_of(v.begin() + 1, v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    const auto n = std::stoull(v.substr(1));
    if (n >= next) next = n + 1;
  }
}

} // namespace

bool Graph::insert(Triple t) {
  t.check();
  note_blank(t.subject, next_blank_);
  note_blank(t.object, next_blank_);
  return triples_.insert(std::move(t)).second;
}

std::vector<Triple> Graph::about(const Term& subject) const {
  std::vector<Triple> out;
  for (auto it = triples_.lower_bound(Triple{subject, Term{}, Term{}});
       it != triples_.end() && it->subject == subject; ++it)
    out.push_back(*it);
  return out;
}

std::vector<Term> Graph::objects(const Term& subject, const Term& predicate) const {
  std::vector<Term> out;
  for (auto it = triples_.lower_bound(Triple{subject, predicate, Term{}});
       it != triples_.end() && it->subject == subject && it->predicate == predicate; ++it)
    out.push_back(it->object);
  return out;
}

std::vector<Term> Graph::subjects(const Term& predicate, const Term& object) const {
  std::vector<Term> out;
  for (const auto& t : triples_)
    if (t.predicate == predicate && t.object == object) out.push_back(t.subject);
  return out;
}

bool Graph::has_type(const Term& node, const Term& cls) const {
  return contains(Triple{node, Term::iri(rdf::type), cls});
}

std::vector<Triple> Graph::referencing(const Term& object) const {
  std::vector<Triple> out;
  for (const auto& t : triples_)
    if (t.object == object) out.push_back(t);
  return out;
}

Term Graph::fresh_blank() { return Term::blank("b" + std::to_string(next_blank_++)); }

void Graph::merge(const Graph& other) {
  std::map<std::string, Term> renamed;
  auto rename = [&](const Term& t) {
    if (!t.is_blank()) return t;
    auto [it, fresh] = renamed.try_emplace(t.value());
    if (fresh) it->second = fresh_blank();
    return it->second;
  };
  for (const auto& t : other.triples_) insert(rename(t.subject), t.predicate, rename(t.object));
  prefixes_.merge(other.prefixes_);
}

Graph graph_insert(Graph graph, Triple triple) {
  graph.insert(std::move(triple));
  return graph;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool position_matches(const PatternTerm& p, const Term& t) {
  if (const auto* term = std::get_if<Term>(&p)) return *term == t;
  return true;
}

// Binds variables of `pattern` against `t`, extending `b`. Fails on conflict.
bool unify(const TriplePattern& pattern, const Triple& t, Binding& b) {
  auto bind = [&](const PatternTerm& p, const Term& value) {
    const auto* var = std::get_if<Variable>(&p);
    if (var == nullptr) return std::get<Term>(p) == value;
    auto [it, inserted] = b.try_emplace(var->name, value);
    return inserted || it->second == value;
  };
  return bind(pattern.subject, t.subject) && bind(pattern.predicate, t.predicate) &&
         bind(pattern.object, t.object);
}

PatternTerm substitute(const PatternTerm& p, const Binding& b) {
  if (const auto* var = std::get_if<Variable>(&p)) {
    if (auto it = b.find(var->name); it != b.end()) return it->second;
  }
  return p;
}

} // namespace

std::vector<Triple> graph_match(const Graph& graph, const TriplePattern& pattern) {
  std::vector<Triple> out;
  auto consider = [&](const Triple& t) {
    if (position_matches(pattern.subject, t.subject) && position_matches(pattern.predicate, t.predicate) &&
        position_matches(pattern.object, t.object))
      out.push_back(t);
  };
  if (const auto* s = std::get_if<Term>(&pattern.subject)) {
    for (const auto& t : graph.about(*s)) consider(t);
  } else {
    for (const auto& t : graph) consider(t);
  }
  return out;
}

std::vector<Binding> bgp_solve(const Graph& graph, const std::vector<TriplePattern>& patterns) {
  std::vector<std::pair<std::size_t, const TriplePattern*>> ordered;
  ordered.reserve(patterns.size());
  for (const auto& p : patterns) ordered.emplace_back(graph_match(graph, p).size(), &p);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::set<Binding> solutions;
  std::function<void(std::size_t, const Binding&)> join = [&](std::size_t i, const Binding& b) {
    if (i == ordered.size()) {
      solutions.insert(b);
      return;
    }
    const auto& p = *ordered[i].second;
    const TriplePattern bound{substitute(p.subject, b), substitute(p.predicate, b), substitute(p.object, b)};
    for (const auto& t : graph_match(graph, bound)) {
      Binding next = b;
      if (unify(bound, t, next)) join(i + 1, next);
    }
  };
  join(0, Binding{});
  return {solutions.begin(), solutions.end()};
}

// ---------------------------------------------------------------------------
// Collections

std::vector<Term> parse_rdf_list(const Graph& graph, const Term& head) {
  const Term nil = Term::iri(rdf::nil);
  const Term first = Term::iri(rdf::first);
  const Term rest = Term::iri(rdf::rest);
  std::vector<Term> items;
  std::set<Term> visited;
  Term node = head;
  while (node != nil) {
    if (node.is_literal()) throw RdfError("malformed list: literal " + node.to_string() + " in list spine");
    if (!visited.insert(node).second) throw RdfError("malformed list: cycle at " + node.to_string());
    const auto firsts = graph.objects(node, first);
    const auto rests = graph.objects(node, rest);
    if (firsts.size() != 1)
      throw RdfError("malformed list: " + node.to_string() + " has " + std::to_string(firsts.size()) +
                     " rdf:first values");
    if (rests.size() != 1)
      throw RdfError("malformed list: " + node.to_string() + " has " + std::to_string(rests.size()) +
                     " rdf:rest values");
    items.push_back(firsts.front());
    node = rests.front();
  }
  return items;
}

Term make_rdf_list(Graph& graph, const std::vector<Term>& items) {
  Term head = Term::iri(rdf::nil);
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    Term cell = graph.fresh_blank();
    graph.insert(cell, Term::iri(rdf::first), *it);
    graph.insert(cell, Term::iri(rdf::rest), head);
    head = cell;
  }
  return head;
}

} // namespace voidext
