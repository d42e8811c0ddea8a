#pragma once

#include "voidext/rdf.hpp"
#include "voidext/vocab.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voidext {

enum class VirtualLinkKind { ComplexOfLinkSets, ComplexOfSharedInstanceSets, SimpleLinkSet, SimpleSharedInstanceSet };

std::string to_string(VirtualLinkKind k);

class ClassificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::map<std::string, VirtualLinkKind> classify(const Graph& graph);

struct DatasetRef {
  std::optional<std::string> iri;
  std::optional<std::string> title;
  std::optional<std::string> endpoint;

  friend bool operator==(const DatasetRef&, const DatasetRef&) = default;
};

struct VirtualLinkTuple {
  std::string vl;
  VirtualLinkKind kind = VirtualLinkKind::ComplexOfLinkSets;
  // Member link sets / shared instance sets in IRI order. A simple link set
  // names itself twice.
  std::string member1;
  std::string member2;
  DatasetRef ds1;
  DatasetRef ds2;
  std::optional<ClassExpression> it1;
  std::optional<ClassExpression> it2;
  std::optional<MappingFunction> f_m;
  // 1 or 2: the side whose member holds f_m; 0 without a mapping.
  int holder_side = 0;
  IntersectionType join = IntersectionType::SubjectSubject;
  std::optional<std::pair<std::string, std::string>> link_predicates;
  std::optional<std::string> issued;
  std::optional<std::string> modified;

  const DatasetRef& dataset(int side) const { return side == 1 ? ds1 : ds2; }
  const std::optional<ClassExpression>& instance_type(int side) const { return side == 1 ? it1 : it2; }

  friend bool operator==(const VirtualLinkTuple&, const VirtualLinkTuple&) = default;
};

struct MappingChoice {
  std::optional<MappingFunction> mapping;
  std::optional<std::string> holder;
  std::optional<std::string> warning;
};

/// Recommended member's mapping, else the only one defined, else none.
MappingChoice select_mapping(const ComplexLinkSetDescriptor& cls,
                             const std::vector<std::pair<std::string, std::optional<MappingFunction>>>& members);

/// One tuple per virtual link set, sorted by IRI. Missing datasets or
/// endpoints are reported through `warnings`.
std::vector<VirtualLinkTuple> emit_tuples(const Graph& graph, std::vector<std::string>* warnings = nullptr);

/// The same tuples assembled from basic graph pattern queries over the
/// graph rather than from extracted descriptors.
std::vector<VirtualLinkTuple> retrieve_tuples(const Graph& graph);

/// `{"virtual_link_sets": [...]}` with class expressions compacted through
/// `prefixes`.
std::string catalog_json(const std::vector<VirtualLinkTuple>& tuples, const PrefixMap& prefixes, int indent = 2);

} // namespace voidext
