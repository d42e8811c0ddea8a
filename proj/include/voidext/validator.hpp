#pragma once

#include "voidext/rdf.hpp"
#include "voidext/vocab.hpp"

#include <string>
#include <vector>

namespace voidext {

enum class DiagnosticCode { C1 = 1, C2, C3, C4, C5, C6, C7, C8, C9 };
enum class Severity { Error, Warning };

struct Diagnostic {
  DiagnosticCode code;
  std::string subject;
  Severity severity = Severity::Error;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string to_string(DiagnosticCode c);
std::string to_string(Severity s);
Severity severity_of(DiagnosticCode c);

// C1 cardinality, C2 homogeneity, C3 dataset disjointness, C4 simplicity,
// C5 recommendation, C6 intersection consistency, C7 mapping syntax,
// C8 range and class-expression obligations, C9 provenance dates (warning).
// Sorted by (code, subject).
std::vector<Diagnostic> validate(const Graph& graph, const IntersectionAliases& aliases = {});

bool has_errors(const std::vector<Diagnostic>& diagnostics);

} // namespace voidext
