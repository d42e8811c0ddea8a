#pragma once

// Token-level view of SPARQL text: enough to find variables, prefixed names,
// IRIs and string constants without parsing the grammar.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace voidext {

struct SparqlToken {
  enum class Kind { Variable, IriRef, PrefixedName, String, Number, Word, LangTag, Punct };

  Kind kind;
  std::string_view text;  // exact source slice
  std::size_t offset = 0;
  bool terminated = true;  // false for strings/IRIs that run off the end

  /// Variable name without the ?/$ sigil.
  std::string_view variable_name() const { return text.substr(1); }
  /// Prefix label of a prefixed name (text before the first ':').
  std::string_view prefix_label() const { return text.substr(0, text.find(':')); }
  bool is_punct(std::string_view p) const { return kind == Kind::Punct && text == p; }
  /// Case-insensitive keyword comparison for Word tokens.
  bool is_keyword(std::string_view kw) const;
};

std::vector<SparqlToken> tokenize_sparql(std::string_view text);

/// Tokens joined by single spaces; used for whitespace-insensitive comparison.
std::string normalize_sparql(std::string_view text);

} // namespace voidext
