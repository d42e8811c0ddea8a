#pragma once

// Rewrites VoID-only virtual link encodings into the VoIDext complex link
// set shape, and turns descriptors back into triples.

#include "voidext/rdf.hpp"
#include "voidext/vocab.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voidext {

enum class LegacyPattern { VL_m1, VL_m2, Canonical, Unknown };

std::string to_string(LegacyPattern p);

class CanonError : public std::runtime_error {
public:
  CanonError(std::string node, const std::string& message)
      : std::runtime_error(node + ": " + message), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

private:
  std::string node_;
};

struct CanonRewrite {
  std::string node;
  LegacyPattern pattern = LegacyPattern::Unknown;
  std::string notes;

  friend bool operator==(const CanonRewrite&, const CanonRewrite&) = default;
};

struct CanonReport {
  std::vector<CanonRewrite> rewrites;
  std::vector<std::string> warnings;
};

struct CanonOptions {
  std::string mint_base = "http://example.org/voidext";
};

/// Throws CanonError when a VL_m2 target carries several property partitions.
LegacyPattern detect_legacy_pattern(const Graph& graph, const Term& node);

std::pair<Graph, CanonReport> import_legacy(const Graph& graph, const CanonOptions& options = {});

Graph serialize_descriptors(const DescriptorSet& descriptors, const PrefixMap& prefixes);

} // namespace voidext
