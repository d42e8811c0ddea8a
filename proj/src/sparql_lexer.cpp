#include "voidext/sparql_lexer.hpp"

#include <cctype>

namespace voidext {

namespace {

bool name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80; }
bool iri_forbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`' ||
         c == '\\';
}

} // namespace

bool SparqlToken::is_keyword(std::string_view kw) const {
  if (kind != Kind::Word || text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(text[i])) != std::toupper(static_cast<unsigned char>(kw[i])))
      return false;
  return true;
}

std::vector<SparqlToken> tokenize_sparql(std::string_view s) {
  std::vector<SparqlToken> out;
  std::size_t i = 0;
  auto at = [&](std::size_t k) -> unsigned char { return k < s.size() ? static_cast<unsigned char>(s[k]) : 0; };
  auto emit = [&](SparqlToken::Kind kind, std::size_t start, std::size_t end, bool terminated = true) {
    out.push_back({kind, s.substr(start, end - start), start, terminated});
  };

  while (i < s.size()) {
    const unsigned char c = at(i);
    const std::size_t start = i;
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if ((c == '?' || c == '$') && name_char(at(i + 1))) {
      i += 1;
      while (name_char(at(i))) ++i;
      emit(SparqlToken::Kind::Variable, start, i);
      continue;
    }
    if (c == '<') {
      std::size_t k = i + 1;
      while (k < s.size() && s[k] != '>' && !iri_forbidden(at(k))) ++k;
      if (k < s.size() && s[k] == '>') {
        i = k + 1;
        emit(SparqlToken::Kind::IriRef, start, i);
        continue;
      }
      i += (at(i + 1) == '=') ? 2 : 1;
      emit(SparqlToken::Kind::Punct, start, i);
      continue;
    }
    if (c == '"' || c == '\'') {
      const bool long_form = at(i + 1) == c && at(i + 2) == c;
      i += long_form ? 3 : 1;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\') {
          i += 2;
          continue;
        }
        if (long_form) {
          if (at(i) == c && at(i + 1) == c && at(i + 2) == c) {
            i += 3;
            closed = true;
            break;
          }
        } else if (at(i) == c) {
          ++i;
          closed = true;
          break;
        } else if (s[i] == '\n') {
          break;
        }
        ++i;
      }
      if (i > s.size()) i = s.size();
      emit(SparqlToken::Kind::String, start, i, closed);
      continue;
    }
    if (c == '@' && std::isalpha(at(i + 1))) {
      ++i;
      while (std::isalnum(at(i)) || at(i) == '-') ++i;
      emit(SparqlToken::Kind::LangTag, start, i);
      continue;
    }
    if (std::isdigit(c) || ((c == '.' || c == '+' || c == '-') && std::isdigit(at(i + 1)) &&
                            (out.empty() || out.back().kind == SparqlToken::Kind::Punct))) {
      ++i;
      while (std::isdigit(at(i)) || at(i) == '.' || at(i) == 'e' || at(i) == 'E') {
        if (at(i) == '.' && !std::isdigit(at(i + 1))) break;
        ++i;
      }
      emit(SparqlToken::Kind::Number, start, i);
      continue;
    }
    if (name_start(c) || c == ':') {
      bool pname = false;
      while (i < s.size()) {
        const unsigned char d = at(i);
        if (name_char(d)) {
          ++i;
        } else if (d == ':') {
          pname = true;
          ++i;
        } else if (d == '.' && (name_char(at(i + 1)) || at(i + 1) == ':')) {
          ++i;
        } else if (pname && d == '%' && std::isxdigit(at(i + 1)) && std::isxdigit(at(i + 2))) {
          i += 3;
        } else {
          break;
        }
      }
      emit(pname ? SparqlToken::Kind::PrefixedName : SparqlToken::Kind::Word, start, i);
      continue;
    }
    static constexpr std::string_view two_char[] = {"^^", "&&", "||", "!=", ">="};
    bool matched = false;
    for (auto op : two_char) {
      if (s.substr(i, 2) == op) {
        i += 2;
        emit(SparqlToken::Kind::Punct, start, i);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    ++i;
    emit(SparqlToken::Kind::Punct, start, i);
  }
  return out;
}

std::string normalize_sparql(std::string_view text) {
  std::string out;
  for (const auto& t : tokenize_sparql(text)) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

} // namespace voidext
