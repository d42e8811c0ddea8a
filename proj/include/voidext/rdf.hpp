#pragma once

// In-memory RDF model: terms, triples, graphs, prefix maps and a small
// basic-graph-pattern matcher.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace voidext {

/// Raised for structurally invalid RDF (literal subjects, relative IRIs,
/// malformed collections).
class RdfError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace xsd {
inline constexpr std::string_view ns = "http://www.w3.org/2001/XMLSchema#";
inline const std::string string_ = std::string(ns) + "string";
inline const std::string integer = std::string(ns) + "integer";
inline const std::string decimal = std::string(ns) + "decimal";
inline const std::string double_ = std::string(ns) + "double";
inline const std::string boolean = std::string(ns) + "boolean";
inline const std::string date = std::string(ns) + "date";
} // namespace xsd

namespace rdf {
inline constexpr std::string_view ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string type = std::string(ns) + "type";
inline const std::string first = std::string(ns) + "first";
inline const std::string rest = std::string(ns) + "rest";
inline const std::string nil = std::string(ns) + "nil";
inline const std::string value = std::string(ns) + "value";
inline const std::string langString = std::string(ns) + "langString";
} // namespace rdf

/// True when `iri` starts with a URI scheme followed by ':'.
bool is_absolute_iri(std::string_view iri);

/// An RDF term. Ordering: IRIs < literals < blank nodes, then by lexical
/// content (value, datatype, language).
class Term {
public:
  enum class Kind : std::uint8_t { Iri = 0, Literal = 1, Blank = 2 };

  Term() = default;

  static Term iri(std::string iri);
  /// A literal; an empty `datatype` means xsd:string unless `lang` is set.
  static Term literal(std::string lexical, std::string datatype = {},
                      std::string lang = {});
  static Term blank(std::string label);

  Kind kind() const { return kind_; }
  bool is_iri() const { return kind_ == Kind::Iri; }
  bool is_literal() const { return kind_ == Kind::Literal; }
  bool is_blank() const { return kind_ == Kind::Blank; }

  /// IRI string, literal lexical form or blank node label.
  const std::string& value() const { return value_; }
  const std::string& datatype() const { return datatype_; }
  const std::string& lang() const { return lang_; }

  /// N-Triples rendering.
  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
  Kind kind_ = Kind::Iri;
  std::string value_;
  std::string datatype_;
  std::string lang_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  /// Throws RdfError unless the subject is an IRI/blank and the predicate an IRI.
  void check() const;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Prefix label to namespace IRI.
class PrefixMap {
public:
  PrefixMap() = default;
  PrefixMap(std::initializer_list<std::pair<const std::string, std::string>> init)
      : entries_(init) {}

  void set(std::string label, std::string ns) { entries_[std::move(label)] = std::move(ns); }
  bool contains(const std::string& label) const { return entries_.contains(label); }
  std::optional<std::string> find(const std::string& label) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// Expands `label:local`; throws RdfError on an unknown label.
  std::string expand(std::string_view pname) const;
  /// Compacts an IRI against the longest matching namespace whose remainder
  /// is a valid local name.
  std::optional<std::string> compact(std::string_view iri) const;
  /// Entries of `other` are added where this map has no binding for the label.
  void merge(const PrefixMap& other);

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

private:
  std::map<std::string, std::string> entries_;
};

/// True for a string usable as the local part of a prefixed name.
bool is_valid_local_name(std::string_view local);

/// A set of triples plus the prefixes it was read with.
class Graph {
public:
  using const_iterator = std::set<Triple>::const_iterator;

  Graph() = default;

  /// Returns false if the triple was already present.
  bool insert(Triple t);
  bool insert(Term s, Term p, Term o) { return insert(Triple{std::move(s), std::move(p), std::move(o)}); }
  bool erase(const Triple& t) { return triples_.erase(t) > 0; }
  bool contains(const Triple& t) const { return triples_.contains(t); }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }
  const std::set<Triple>& triples() const { return triples_; }

  PrefixMap& prefixes() { return prefixes_; }
  const PrefixMap& prefixes() const { return prefixes_; }

  /// Triples with the given subject, in order.
  std::vector<Triple> about(const Term& subject) const;
  std::vector<Term> objects(const Term& subject, const Term& predicate) const;
  std::vector<Term> subjects(const Term& predicate, const Term& object) const;
  /// Triples whose object is `object` (linear scan).
  std::vector<Triple> referencing(const Term& object) const;
  bool has(const Term& s, const Term& p, const Term& o) const { return contains({s, p, o}); }
  bool has_type(const Term& node, const Term& cls) const;

  /// A blank node label not yet used in this graph.
  Term fresh_blank();
  /// Adds every triple of `other`, renaming its blank nodes apart from ours.
  void merge(const Graph& other);

  friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

private:
  std::set<Triple> triples_;
  PrefixMap prefixes_;
  std::size_t next_blank_ = 1;
};

Graph graph_insert(Graph graph, Triple triple);

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

/// Variable name to bound term.
using Binding = std::map<std::string, Term>;

std::vector<Triple> graph_match(const Graph& graph, const TriplePattern& pattern);

/// Solutions of a conjunction of triple patterns, duplicate-free and sorted.
std::vector<Binding> bgp_solve(const Graph& graph, const std::vector<TriplePattern>& patterns);

/// Members of the RDF collection starting at `head`.
std::vector<Term> parse_rdf_list(const Graph& graph, const Term& head);
/// Writes an RDF collection into `graph` and returns its head.
Term make_rdf_list(Graph& graph, const std::vector<Term>& items);

/// Label-insensitive canonical N-Triples rendering; equal iff isomorphic.
std::string canonical_form(const Graph& graph);
bool isomorphic(const Graph& a, const Graph& b);
/// Blank node label -> canonical index, stable under relabeling.
std::map<std::string, std::size_t> canonical_blank_labels(const Graph& graph);

} // namespace voidext
