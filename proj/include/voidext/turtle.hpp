#pragma once

#include "voidext/rdf.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace voidext {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };

  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in code points
  std::string message;
  Severity severity = Severity::Error;

  std::string to_string() const;
};

class TurtleError : public std::runtime_error {
public:
  explicit TurtleError(ParseDiagnostic d);
  const ParseDiagnostic& diagnostic() const { return diagnostic_; }

private:
  ParseDiagnostic diagnostic_;
};

/// Parses a Turtle document. Blank nodes get fresh labels b1, b2, ... in
/// document order. Throws TurtleError on malformed input.
Graph parse_turtle(std::string_view text);
Graph parse_turtle_file(const std::string& path);

/// Deterministic Turtle: prefixes sorted by label, subjects in term order,
/// blank nodes relabeled canonically and inlined where referenced once.
std::string serialize_turtle(const Graph& graph, const PrefixMap& prefixes);
inline std::string serialize_turtle(const Graph& graph) { return serialize_turtle(graph, graph.prefixes()); }

/// Renders a single term as Turtle, compacting IRIs through `prefixes`.
std::string turtle_term(const Term& term, const PrefixMap& prefixes);

} // namespace voidext
