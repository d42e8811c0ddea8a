#include "voidext/turtle.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace voidext {

std::string ParseDiagnostic::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " +
         (severity == Severity::Error ? "error: " : "warning: ") + message;
}

TurtleError::TurtleError(ParseDiagnostic d) : std::runtime_error(d.to_string()), diagnostic_(std::move(d)) {}

namespace {

bool is_pn_chars_base(unsigned char c) { return std::isalpha(c) || c >= 0x80; }
bool is_pn_chars(unsigned char c) { return is_pn_chars_base(c) || std::isdigit(c) || c == '_' || c == '-'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class TurtleReader {
public:
  explicit TurtleReader(std::string_view src) : src_(src) {}

  Graph run() {
    try {
      skip_ws();
      while (!at_end()) {
        statement();
        skip_ws();
      }
    } catch (const RdfError& e) {
      fail(pos_, e.what());
    }
    return std::move(graph_);
  }

private:
  // -- diagnostics ----------------------------------------------------------

  [[noreturn]] void fail(std::size_t offset, const std::string& message) const {
    ParseDiagnostic d;
    d.message = message;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      const auto c = static_cast<unsigned char>(src_[i]);
      if (c == '\n') {
        ++d.line;
        d.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++d.column;
      }
    }
    throw TurtleError(std::move(d));
  }
  [[noreturn]] void fail(const std::string& message) const { fail(pos_, message); }

  // -- lexical helpers ------------------------------------------------------

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void skip_ws() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c) fail(std::string("expected ") + what);
    ++pos_;
  }

  bool keyword_ahead(std::string_view kw, bool case_insensitive) const {
    if (src_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      const char a = src_[pos_ + i];
      const char b = kw[i];
      if (case_insensitive ? std::toupper(static_cast<unsigned char>(a)) != b : a != b) return false;
    }
    const char after = pos_ + kw.size() < src_.size() ? src_[pos_ + kw.size()] : ' ';
    return !is_pn_chars(static_cast<unsigned char>(after)) && after != ':';
  }

  std::uint32_t read_hex(std::size_t digits) {
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = peek();
      if (!std::isxdigit(static_cast<unsigned char>(c))) fail("invalid hex digit in escape sequence");
      cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(c))
                                                     ? c - '0'
                                                     : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
      ++pos_;
    }
    return cp;
  }

  // -- statements -----------------------------------------------------------

  void statement() {
    const char c = peek();
    if (c == '@') {
      if (keyword_ahead("@prefix", false)) {
        pos_ += 7;
        prefix_decl();
        expect('.', "'.' after @prefix directive");
        return;
      }
      if (keyword_ahead("@base", false)) {
        pos_ += 5;
        base_decl();
        expect('.', "'.' after @base directive");
        return;
      }
      fail("unknown directive");
    }
    if (keyword_ahead("PREFIX", true)) {
      pos_ += 6;
      prefix_decl();
      return;
    }
    if (keyword_ahead("BASE", true)) {
      pos_ += 4;
      base_decl();
      return;
    }
    triples();
    expect('.', "'.' at end of statement");
  }

  void prefix_decl() {
    skip_ws();
    const std::size_t start = pos_;
    std::string label;
    while (!at_end() && peek() != ':') {
      const auto ch = static_cast<unsigned char>(peek());
      if (!(is_pn_chars(ch) || ch == '.')) fail("invalid prefix label");
      label += peek();
      ++pos_;
    }
    if (at_end()) fail(start, "expected prefix label ending in ':'");
    if (!label.empty() && (label.back() == '.' || !is_pn_chars_base(static_cast<unsigned char>(label[0]))))
      fail(start, "invalid prefix label '" + label + "'");
    ++pos_;
    skip_ws();
    if (peek() != '<') fail("expected IRI in prefix declaration");
    graph_.prefixes().set(label, iriref());
  }

  void base_decl() {
    skip_ws();
    if (peek() != '<') fail("expected IRI in base declaration");
    base_ = iriref();
  }

  void triples() {
    skip_ws();
    if (peek() == '[') {
      const Term subject = blank_property_list();
      skip_ws();
      if (peek() != '.') predicate_object_list(subject);
      return;
    }
    const Term subject = subject_term();
    predicate_object_list(subject);
  }

  Term subject_term() {
    skip_ws();
    const char c = peek();
    if (c == '<') return Term::iri(iriref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '(') return collection();
    if (c == '"' || c == '\'' || c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)))
      fail("literal in subject position");
    if (at_end()) fail("unexpected end of input, expected subject");
    return name_term(false);
  }

  void predicate_object_list(const Term& subject) {
    for (;;) {
      skip_ws();
      const Term predicate = verb();
      object_list(subject, predicate);
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      if (peek() == '.' || peek() == ']' || at_end()) return;
    }
  }

  Term verb() {
    skip_ws();
    if (peek() == 'a' && keyword_ahead("a", false)) {
      ++pos_;
      return Term::iri(rdf::type);
    }
    if (peek() == '<') return Term::iri(iriref());
    if (at_end()) fail("unexpected end of input, expected predicate");
    const char c = peek();
    if (c == '"' || c == '\'' || c == '[' || c == '(' || c == '_' || c == '.' || c == ';' || c == ',')
      fail("expected predicate");
    return name_term(false);
  }

  void object_list(const Term& subject, const Term& predicate) {
    for (;;) {
      const Term obj = object();
      graph_.insert(subject, predicate, obj);
      skip_ws();
      if (peek() != ',') return;
      ++pos_;
    }
  }

  Term object() {
    skip_ws();
    const char c = peek();
    if (at_end()) fail("unexpected end of input, expected object");
    if (c == '<') return Term::iri(iriref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '[') return blank_property_list();
    if (c == '(') return collection();
    if (c == '"' || c == '\'') return literal();
    if (c == '.' && !std::isdigit(static_cast<unsigned char>(peek(1)))) fail("expected object");
    if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) return number();
    return name_term(true);
  }

  // -- terms ----------------------------------------------------------------

  std::string iriref() {
    const std::size_t start = pos_;
    ++pos_;  // '<'
    std::string iri;
    for (;;) {
      if (at_end()) fail(start, "unterminated IRI");
      const char c = peek();
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        if (peek() == 'u') {
          ++pos_;
          append_utf8(iri, read_hex(4));
        } else if (peek() == 'U') {
          ++pos_;
          append_utf8(iri, read_hex(8));
        } else {
          fail("invalid escape in IRI");
        }
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`')
        fail("invalid character in IRI");
      iri += c;
      ++pos_;
    }
    return resolve(iri, start);
  }

  std::string resolve(const std::string& ref, std::size_t at) const {
    if (is_absolute_iri(ref)) return ref;
    if (base_.empty()) fail(at, "relative IRI <" + ref + "> with no base");
    std::size_t seg_start = 0;
    for (std::size_t i = 0; i <= ref.size(); ++i) {
      if (i == ref.size() || ref[i] == '/' || ref[i] == '?' || ref[i] == '#') {
        const auto seg = std::string_view(ref).substr(seg_start, i - seg_start);
        if (seg == "." || seg == "..") fail(at, "relative IRI <" + ref + "> with dot segments is not supported");
        if (i < ref.size() && ref[i] != '/') break;
        seg_start = i + 1;
      }
    }
    return base_ + ref;
  }

  Term blank_label() {
    pos_ += 2;
    std::string label;
    while (!at_end()) {
      const auto c = static_cast<unsigned char>(peek());
      if (is_pn_chars(c) || (c == '.' && is_pn_chars(static_cast<unsigned char>(peek(1))))) {
        label += static_cast<char>(c);
        ++pos_;
      } else {
        break;
      }
    }
    if (label.empty()) fail("empty blank node label");
    auto [it, fresh] = blank_labels_.try_emplace(label);
    if (fresh) it->second = graph_.fresh_blank();
    return it->second;
  }

  Term blank_property_list() {
    ++pos_;  // '['
    Term node = graph_.fresh_blank();
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return node;
    }
    predicate_object_list(node);
    expect(']', "']' to close blank node property list");
    return node;
  }

  Term collection() {
    const std::size_t start = pos_;
    ++pos_;  // '('
    std::vector<Term> cells;
    Term head = Term::iri(rdf::nil);
    std::optional<Term> prev;
    for (;;) {
      skip_ws();
      if (at_end()) fail(start, "unterminated collection");
      if (peek() == ')') {
        ++pos_;
        break;
      }
      Term cell = graph_.fresh_blank();
      if (prev)
        graph_.insert(*prev, Term::iri(rdf::rest), cell);
      else
        head = cell;
      graph_.insert(cell, Term::iri(rdf::first), object());
      prev = cell;
    }
    if (prev) graph_.insert(*prev, Term::iri(rdf::rest), Term::iri(rdf::nil));
    return head;
  }

  // Prefixed name or bare keyword (true/false) at the current position.
  Term name_term(bool allow_boolean) {
    const std::size_t start = pos_;
    std::string prefix;
    while (!at_end()) {
      const auto c = static_cast<unsigned char>(peek());
      if (is_pn_chars(c) || (c == '.' && !prefix.empty() && is_pn_chars(static_cast<unsigned char>(peek(1))))) {
        prefix += static_cast<char>(c);
        ++pos_;
      } else {
        break;
      }
    }
    if (peek() != ':') {
      if (allow_boolean && (prefix == "true" || prefix == "false")) return Term::literal(prefix, xsd::boolean);
      if (prefix.empty()) fail(start, std::string("unexpected character '") + peek() + "'");
      fail(start, "unexpected word '" + prefix + "'");
    }
    if (!prefix.empty() && !is_pn_chars_base(static_cast<unsigned char>(prefix[0])))
      fail(start, "invalid prefix label '" + prefix + "'");
    ++pos_;  // ':'
    std::string local;
    while (!at_end()) {
      const auto c = static_cast<unsigned char>(peek());
      if (c == '\\') {
        const char esc = peek(1);
        if (std::string_view("_~.-!$&'()*+,;=/?#@%").find(esc) == std::string_view::npos)
          fail("invalid escape in local name");
        local += esc;
        pos_ += 2;
      } else if (c == '%') {
        if (!std::isxdigit(static_cast<unsigned char>(peek(1))) || !std::isxdigit(static_cast<unsigned char>(peek(2))))
          fail("invalid percent escape in local name");
        local += src_.substr(pos_, 3);
        pos_ += 3;
      } else if (is_pn_chars(c) || c == ':' ||
                 (c == '.' && (is_pn_chars(static_cast<unsigned char>(peek(1))) || peek(1) == ':'))) {
        local += static_cast<char>(c);
        ++pos_;
      } else {
        break;
      }
    }
    const auto ns = graph_.prefixes().find(prefix);
    if (!ns) fail(start, "undefined prefix '" + prefix + ":'");
    return Term::iri(*ns + local);
  }

  Term literal() {
    const std::size_t start = pos_;
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    pos_ += long_form ? 3 : 1;
    std::string lexical;
    for (;;) {
      if (at_end()) fail(start, "unterminated string literal");
      const char c = peek();
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          break;
        }
      } else if (c == quote) {
        ++pos_;
        break;
      } else if (c == '\n' || c == '\r') {
        fail(start, "unterminated string literal");
      }
      if (c == '\\') {
        ++pos_;
        const char e = peek();
        ++pos_;
        switch (e) {
        case 't': lexical += '\t'; break;
        case 'b': lexical += '\b'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 'f': lexical += '\f'; break;
        case '"': lexical += '"'; break;
        case '\'': lexical += '\''; break;
        case '\\': lexical += '\\'; break;
        case 'u': append_utf8(lexical, read_hex(4)); break;
        case 'U': append_utf8(lexical, read_hex(8)); break;
        default: fail(pos_ - 2, "invalid escape sequence in string literal");
        }
        continue;
      }
      lexical += c;
      ++pos_;
    }
    if (peek() == '@') {
      ++pos_;
      const std::size_t lang_start = pos_;
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || (peek() == '-' && !lang.empty())) {
        lang += peek();
        ++pos_;
      }
      if (lang.empty() || !std::isalpha(static_cast<unsigned char>(lang[0])) || lang.back() == '-')
        fail(lang_start, "invalid language tag");
      return Term::literal(std::move(lexical), {}, std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      std::string datatype;
      if (peek() == '<')
        datatype = iriref();
      else
        datatype = name_term(false).value();
      return Term::literal(std::move(lexical), std::move(datatype));
    }
    return Term::literal(std::move(lexical));
  }

  Term number() {
    const std::size_t start = pos_;
    std::string text;
    if (peek() == '+' || peek() == '-') text += src_[pos_++];
    while (std::isdigit(static_cast<unsigned char>(peek()))) text += src_[pos_++];
    bool decimal = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      decimal = true;
      text += src_[pos_++];
      while (std::isdigit(static_cast<unsigned char>(peek()))) text += src_[pos_++];
    }
    bool exponent = false;
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      exponent = true;
      text += src_[pos_++];
      if (peek() == '+' || peek() == '-') text += src_[pos_++];
      while (std::isdigit(static_cast<unsigned char>(peek()))) text += src_[pos_++];
    }
    const bool has_digit = text.find_first_of("0123456789") != std::string::npos;
    if (!has_digit) fail(start, "invalid numeric literal");
    if (exponent) return Term::literal(text, xsd::double_);
    return Term::literal(text, decimal ? xsd::decimal : xsd::integer);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::string base_;
  Graph graph_;
  std::map<std::string, Term> blank_labels_;
};

} // namespace

Graph parse_turtle(std::string_view text) { return TurtleReader(text).run(); }

Graph parse_turtle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_turtle(buf.str());
}

} // namespace voidext
