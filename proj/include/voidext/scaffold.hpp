#pragma once

// Federated SPARQL query drafting from a catalog tuple plus optional
// per-dataset pattern fragments. Variables named ?vlj_<k> are reserved for
// generated names.

#include "voidext/catalog.hpp"
#include "voidext/rdf.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voidext {

class ScaffoldError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct QueryFragment {
  std::string dataset_endpoint;
  std::string pattern_text;
  std::vector<std::string> exposed_vars;  // without sigil
};

/// Fragment file text: `# endpoint: <IRI>` and `# vars: ?a ?b` header lines
/// followed by a group graph pattern body.
QueryFragment parse_fragment(std::string_view text);
QueryFragment read_fragment_file(const std::string& path);

enum class BridgeSide { Holder, Local, Remote };

struct ScaffoldOptions {
  std::optional<std::string> at;  // execution endpoint; defaults to ds1's
  BridgeSide bridge_side = BridgeSide::Holder;
  PrefixMap prefixes;  // added to (and overriding) the standard bindings
};

struct FederatedQuerySkeleton {
  PrefixMap prologue;
  std::vector<std::string> projection;  // empty means *
  std::optional<QueryFragment> local_block;
  std::string local_body;
  std::vector<std::pair<std::string, std::string>> service_blocks;  // endpoint, body
  std::string bridge;
  std::map<std::string, std::string> renaming;  // snippet variable -> fresh name

  std::string to_string() const;
};

FederatedQuerySkeleton build_skeleton(const VirtualLinkTuple& tuple, const std::optional<QueryFragment>& local,
                                      const std::optional<QueryFragment>& remote, const ScaffoldOptions& options = {});

std::string scaffold(const VirtualLinkTuple& tuple, const std::optional<QueryFragment>& local,
                     const std::optional<QueryFragment>& remote, const ScaffoldOptions& options = {});

/// Renames ?old / $old variable tokens, leaving strings and IRIs alone.
std::string rename_vars(std::string_view snippet, const std::map<std::string, std::string>& renaming);

struct WellformedFinding {
  std::size_t offset = 0;
  std::string message;

  friend bool operator==(const WellformedFinding&, const WellformedFinding&) = default;
};

/// Empty when the query is well formed.
std::vector<WellformedFinding> check_wellformed(std::string_view query);

/// Minimal triple patterns locating `var` on one side of a tuple, built from
/// its instance type and link predicate. `fresh` numbers generated
/// ?vlj_<k> variables.
std::string side_pattern(const VirtualLinkTuple& tuple, int side, const std::string& var, const PrefixMap& prefixes,
                         std::size_t& fresh);

/// PREFIX lines for every prefixed name used in `body`.
std::string prologue_for(std::string_view body, const PrefixMap& available);

} // namespace voidext
