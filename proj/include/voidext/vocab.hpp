#pragma once

// VoID / VoIDext term registry and extraction of typed descriptors from a
// parsed metadata graph.

#include "voidext/rdf.hpp"

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace voidext {

namespace vocab {

inline const std::string void_ns = "http://rdfs.org/ns/void#";
inline const std::string voidext_ns = "http://purl.org/query/voidext#";
inline const std::string owl_ns = "http://www.w3.org/2002/07/owl#";
inline const std::string rdfs_ns = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string dcterms_ns = "http://purl.org/dc/terms/";

inline const std::string Dataset = void_ns + "Dataset";
inline const std::string Linkset = void_ns + "Linkset";
inline const std::string target = void_ns + "target";
inline const std::string objectsTarget = void_ns + "objectsTarget";
inline const std::string subjectsTarget = void_ns + "subjectsTarget";
inline const std::string linkPredicate = void_ns + "linkPredicate";
inline const std::string subset = void_ns + "subset";
inline const std::string propertyPartition = void_ns + "propertyPartition";
inline const std::string classPartition = void_ns + "classPartition";
inline const std::string class_ = void_ns + "class";
inline const std::string property = void_ns + "property";
inline const std::string sparqlEndpoint = void_ns + "sparqlEndpoint";

inline const std::string VirtualLinkSet = voidext_ns + "VirtualLinkSet";
inline const std::string ComplexLinkSet = voidext_ns + "ComplexLinkSet";
inline const std::string SimpleLinkSet = voidext_ns + "SimpleLinkSet";
inline const std::string SharedInstanceSet = voidext_ns + "SharedInstanceSet";
inline const std::string intersectAt = voidext_ns + "intersectAt";
inline const std::string intersectionType = voidext_ns + "intersectionType";
inline const std::string linkPredicateDomain = voidext_ns + "linkPredicateDomain";
inline const std::string linkPredicateRange = voidext_ns + "linkPredicateRange";
inline const std::string resourceMapping = voidext_ns + "resourceMapping";
inline const std::string recommendedMapping = voidext_ns + "recommendedMapping";
inline const std::string sharedInstanceType = voidext_ns + "sharedInstanceType";
inline const std::string hasPerformanceMeasure = voidext_ns + "hasPerformanceMeasure";
inline const std::string queryLinkset = voidext_ns + "queryLinkset";
inline const std::string querySharedInstanceSet = voidext_ns + "querySharedInstanceSet";

inline const std::string SUBJECT_SUBJECT = voidext_ns + "SUBJECT_SUBJECT";
inline const std::string SUBJECT_OBJECT = voidext_ns + "SUBJECT_OBJECT";
inline const std::string OBJECT_OBJECT = voidext_ns + "OBJECT_OBJECT";

inline const std::string unionOf = owl_ns + "unionOf";
inline const std::string intersectionOf = owl_ns + "intersectionOf";

inline const std::string issued = dcterms_ns + "issued";
inline const std::string modified = dcterms_ns + "modified";
inline const std::string title = dcterms_ns + "title";

inline const std::string Literal = rdfs_ns + "Literal";
inline const std::string label = rdfs_ns + "label";

/// The namespace bindings used throughout the VoIDext examples.
const PrefixMap& standard_prefixes();

} // namespace vocab

/// Raised when a node cannot be turned into a descriptor.
class ExtractionError : public std::runtime_error {
public:
  ExtractionError(std::string node, const std::string& message)
      : std::runtime_error(node + ": " + message), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

private:
  std::string node_;
};

class MappingSyntaxError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Domain, range or shared-instance type of a link set.
struct ClassExpression {
  enum class Kind { Named, Union, Intersection, LiteralRange };

  Kind kind = Kind::Named;
  std::string iri;                        // Named / LiteralRange
  std::vector<ClassExpression> operands;  // Union / Intersection

  static ClassExpression named(std::string iri) { return {Kind::Named, std::move(iri), {}}; }
  static ClassExpression literal_range(std::string datatype) { return {Kind::LiteralRange, std::move(datatype), {}}; }
  static ClassExpression union_of(std::vector<ClassExpression> ops) { return {Kind::Union, {}, std::move(ops)}; }
  static ClassExpression intersection_of(std::vector<ClassExpression> ops) {
    return {Kind::Intersection, {}, std::move(ops)};
  }

  /// Operands of unions/intersections sorted and flattened.
  ClassExpression normalized() const;
  /// `prefix:Name`, `(A ∪ B)`, `(A ∩ B)`.
  std::string to_string(const PrefixMap& prefixes) const;

  friend bool operator==(const ClassExpression&, const ClassExpression&) = default;
  friend std::strong_ordering operator<=>(const ClassExpression& a, const ClassExpression& b);
};

/// Writes the expression into `graph` (owl:unionOf / owl:intersectionOf
/// collections on fresh blank nodes) and returns its node.
Term emit_class_expression(Graph& graph, const ClassExpression& expr);

/// Parses the flattened notation produced by ClassExpression::to_string.
ClassExpression parse_class_expression_text(std::string_view text, const PrefixMap& prefixes);

/// A resource-mapping snippet with the variables it consumes and produces.
struct MappingFunction {
  std::string snippet;
  std::string input_var;
  std::string output_var;

  friend bool operator==(const MappingFunction&, const MappingFunction&) = default;
};

/// Finds the input/output variables of a SPARQL mapping snippet. The last
/// top-level BIND(... AS ?v) names the output; the first other variable is
/// the input. A snippet without BIND is an identity mapping over its first
/// variable.
MappingFunction parse_mapping(const std::string& snippet);
MappingFunction parse_mapping(const Term& literal);

enum class IntersectionType { SubjectSubject, SubjectObject, ObjectObject };

/// "subject-subject", "subject-object", "object-object".
std::string to_string(IntersectionType t);
std::optional<IntersectionType> intersection_type_from_string(std::string_view s);
const std::string& intersection_type_iri(IntersectionType t);

/// Maps intersection-type individuals to the enum. The canonical voidext
/// individuals are always present; aliases may be added.
class IntersectionAliases {
public:
  IntersectionAliases();
  void add(std::string iri, IntersectionType t) { table_[std::move(iri)] = t; }
  std::optional<IntersectionType> find(const std::string& iri) const;

private:
  std::map<std::string, IntersectionType> table_;
};

struct DatasetDescriptor {
  std::string iri;
  std::optional<std::string> title;
  std::optional<std::string> endpoint;
  std::optional<std::string> issued;
  std::optional<std::string> modified;

  friend bool operator==(const DatasetDescriptor&, const DatasetDescriptor&) = default;
};

struct LinkSetDescriptor {
  std::string iri;
  std::optional<std::string> host_dataset;
  std::string link_predicate;
  std::optional<ClassExpression> domain;
  std::optional<ClassExpression> range;
  std::optional<std::string> objects_target;
  std::optional<std::string> subjects_target;
  std::optional<std::string> target;
  std::optional<MappingFunction> mapping;
  bool simple = false;
  std::optional<std::string> issued;
  std::optional<std::string> modified;

  friend bool operator==(const LinkSetDescriptor&, const LinkSetDescriptor&) = default;
};

struct SharedInstanceSetDescriptor {
  std::string iri;
  /// Datasets named by void:target, sorted. One for a complex-set member,
  /// two for a simple shared instance set.
  std::vector<std::string> targets;
  ClassExpression shared_instance_type;
  std::optional<MappingFunction> mapping;
  bool simple = false;
  std::optional<std::string> issued;
  std::optional<std::string> modified;

  const std::string& target_dataset() const { return targets.front(); }

  friend bool operator==(const SharedInstanceSetDescriptor&, const SharedInstanceSetDescriptor&) = default;
};

enum class MemberKind { LinkSet, SharedInstanceSet, Mixed, Unknown };

struct ComplexLinkSetDescriptor {
  std::string iri;
  MemberKind member_kind = MemberKind::Unknown;
  /// Distinct intersectAt values, sorted. Anything other than two is a fault
  /// left for the validator.
  std::vector<std::string> members;
  /// Members that are not typed as a link set or shared instance set.
  std::vector<std::string> dangling_members;
  std::optional<IntersectionType> intersection_type;
  /// True when intersection_type came from voidext:intersectionType rather
  /// than from the members' target assertions.
  bool intersection_type_explicit = false;
  /// An intersectionType value missing from the alias table.
  std::optional<std::string> unknown_intersection_type;
  std::optional<std::string> recommended_mapping;
  std::optional<std::string> performance;
  std::optional<std::string> issued;
  std::optional<std::string> modified;

  bool well_formed() const {
    return members.size() == 2 && dangling_members.empty() &&
           (member_kind == MemberKind::LinkSet || member_kind == MemberKind::SharedInstanceSet);
  }

  friend bool operator==(const ComplexLinkSetDescriptor&, const ComplexLinkSetDescriptor&) = default;
};

/// Descriptor identifiers: the IRI, or `_:label` for blank nodes.
std::string node_id(const Term& t);
Term node_term(const std::string& id);

std::vector<DatasetDescriptor> extract_datasets(const Graph& graph);
ClassExpression extract_class_expression(const Graph& graph, const Term& node);
std::vector<LinkSetDescriptor> extract_link_sets(const Graph& graph);
std::vector<SharedInstanceSetDescriptor> extract_shared_instance_sets(const Graph& graph);
std::vector<ComplexLinkSetDescriptor> extract_complex_link_sets(const Graph& graph,
                                                                const IntersectionAliases& aliases = {});

/// Intersection type implied by the two members' objectsTarget /
/// subjectsTarget assertions towards each other, if both assert one.
std::optional<IntersectionType> derive_intersection_type(const Graph& graph, const std::string& member_a,
                                                         const std::string& member_b);

/// Everything extractable from one graph.
struct DescriptorSet {
  std::vector<DatasetDescriptor> datasets;
  std::vector<LinkSetDescriptor> link_sets;
  std::vector<SharedInstanceSetDescriptor> shared_instance_sets;
  std::vector<ComplexLinkSetDescriptor> complex_link_sets;

  friend bool operator==(const DescriptorSet&, const DescriptorSet&) = default;
};

DescriptorSet extract_all(const Graph& graph, const IntersectionAliases& aliases = {});

/// True for rdfs:Literal, rdf:langString and XML Schema datatypes.
bool is_literal_datatype(const std::string& iri);

/// Syntactic ISO-8601 check: YYYY, YYYY-MM, YYYY-MM-DD, optionally with a
/// time part.
bool is_iso8601_date(std::string_view s);

} // namespace voidext
