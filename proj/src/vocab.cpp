#include "voidext/vocab.hpp"

#include "voidext/sparql_lexer.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace voidext {

namespace vocab {

const PrefixMap& standard_prefixes() {
  static const PrefixMap prefixes{
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"orth", "http://purl.org/net/orth#"},
      {"up", "http://purl.uniprot.org/core/"},
      {"oboowl", "http://www.geneontology.org/formats/oboInOwl#"},
      {"cco", "http://rdf.ebi.ac.uk/terms/chembl#"},
      {"chembl", "http://rdf.ebi.ac.uk/resource/chembl/molecule/"},
      {"ex", "http://example.org/voidext#"},
      {"dbo", "http://dbpedia.org/ontology/"},
      {"skos", "http://www.w3.org/2004/02/skos/core#"},
      {"dbr", "http://dbpedia.org/resource/"},
      {"dbrc", "http://dbpedia.org/resource/Category:"},
      {"dbp", "http://dbpedia.org/property/"},
      {"lindas", "https://gont.ch/"},
      {"dcterms", "http://purl.org/dc/terms/"},
      {"biopax", "http://www.biopax.org/release/biopax-level3.owl#"},
      {"lscr", "http://purl.org/lscr#"},
      {"void", "http://rdfs.org/ns/void#"},
      {"voidext", "http://purl.org/query/voidext#"},
      {"bioquery", "http://purl.org/query/bioquery#"},
      {"owl", "http://www.w3.org/2002/07/owl#"},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
  };
  return prefixes;
}

} // namespace vocab

namespace {

Term iri(const std::string& s) { return Term::iri(s); }

std::optional<std::string> literal_value(const Graph& g, const Term& node, const std::string& predicate) {
  const auto values = g.objects(node, iri(predicate));
  for (const auto& v : values)
    if (v.is_literal() && (v.lang().empty() || v.lang() == "en")) return v.value();
  for (const auto& v : values)
    if (v.is_literal()) return v.value();
  return std::nullopt;
}

std::optional<std::string> single_node(const Graph& g, const Term& node, const std::string& predicate) {
  const auto values = g.objects(node, iri(predicate));
  if (values.empty()) return std::nullopt;
  if (values.size() > 1) throw ExtractionError(node_id(node), "more than one <" + predicate + "> value");
  if (values.front().is_literal())
    throw ExtractionError(node_id(node), "<" + predicate + "> must point to a resource");
  return node_id(values.front());
}

std::vector<Term> typed(const Graph& g, const std::string& cls) {
  return g.subjects(iri(rdf::type), iri(cls));
}

bool is_virtual_link_set_class_member(const Graph& g, const Term& node) {
  for (const auto* cls : {&vocab::VirtualLinkSet, &vocab::ComplexLinkSet, &vocab::SimpleLinkSet,
                          &vocab::SharedInstanceSet})
    if (g.has_type(node, iri(*cls))) return true;
  return false;
}

std::optional<MappingFunction> read_mapping(const Graph& g, const Term& node) {
  const auto values = g.objects(node, iri(vocab::resourceMapping));
  if (values.empty()) return std::nullopt;
  if (values.size() > 1) throw ExtractionError(node_id(node), "more than one resource mapping");
  try {
    return parse_mapping(values.front());
  } catch (const MappingSyntaxError& e) {
    throw ExtractionError(node_id(node), e.what());
  }
}

std::optional<ClassExpression> read_expression(const Graph& g, const Term& node, const std::string& predicate) {
  const auto values = g.objects(node, iri(predicate));
  if (values.empty()) return std::nullopt;
  if (values.size() > 1) throw ExtractionError(node_id(node), "more than one <" + predicate + "> value");
  return extract_class_expression(g, values.front());
}

ClassExpression extract_expression_rec(const Graph& g, const Term& node, std::set<Term>& active) {
  if (node.is_literal()) throw ExtractionError(node.to_string(), "a literal is not a class expression");
  if (!active.insert(node).second) throw ExtractionError(node_id(node), "cyclic class expression");
  const auto unions = g.objects(node, iri(vocab::unionOf));
  const auto inters = g.objects(node, iri(vocab::intersectionOf));
  if (unions.size() + inters.size() > 1)
    throw ExtractionError(node_id(node), "class expression has more than one union/intersection operand list");

  ClassExpression out;
  if (!unions.empty() || !inters.empty()) {
    const bool is_union = !unions.empty();
    std::vector<Term> items;
    try {
      items = parse_rdf_list(g, is_union ? unions.front() : inters.front());
    } catch (const RdfError& e) {
      throw ExtractionError(node_id(node), e.what());
    }
    if (items.size() < 2)
      throw ExtractionError(node_id(node), std::string(is_union ? "union" : "intersection") +
                                               " needs at least two operands");
    std::vector<ClassExpression> ops;
    for (const auto& item : items) ops.push_back(extract_expression_rec(g, item, active));
    out = is_union ? ClassExpression::union_of(std::move(ops)) : ClassExpression::intersection_of(std::move(ops));
  } else if (node.is_iri()) {
    out = is_literal_datatype(node.value()) ? ClassExpression::literal_range(node.value())
                                            : ClassExpression::named(node.value());
  } else {
    throw ExtractionError(node_id(node), "blank node is not a class expression");
  }
  active.erase(node);
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Small helpers

std::string node_id(const Term& t) { return t.is_blank() ? "_:" + t.value() : t.value(); }

Term node_term(const std::string& id) {
  return id.rfind("_:", 0) == 0 ? Term::blank(id.substr(2)) : Term::iri(id);
}

bool is_literal_datatype(const std::string& s) {
  return s == vocab::Literal || s == rdf::langString || s.rfind(std::string(xsd::ns), 0) == 0;
}

bool is_iso8601_date(std::string_view s) {
  auto digits = [&](std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) return false;
    for (std::size_t i = pos; i < pos + n; ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!digits(0, 4)) return false;
  if (s.size() == 4) return true;
  if (s[4] != '-' || !digits(5, 2)) return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  if (month < 1 || month > 12) return false;
  if (s.size() == 7) return true;
  if (s[7] != '-' || !digits(8, 2)) return false;
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  if (day < 1 || day > 31) return false;
  if (s.size() == 10) return true;
  return s[10] == 'T' && digits(11, 2) && s.size() >= 16 && s[13] == ':' && digits(14, 2);
}

std::string to_string(IntersectionType t) {
  switch (t) {
  case IntersectionType::SubjectSubject: return "subject-subject";
  case IntersectionType::SubjectObject: return "subject-object";
  case IntersectionType::ObjectObject: return "object-object";
  }
  return {};
}

std::optional<IntersectionType> intersection_type_from_string(std::string_view s) {
  if (s == "subject-subject") return IntersectionType::SubjectSubject;
  if (s == "subject-object") return IntersectionType::SubjectObject;
  if (s == "object-object") return IntersectionType::ObjectObject;
  return std::nullopt;
}

const std::string& intersection_type_iri(IntersectionType t) {
  switch (t) {
  case IntersectionType::SubjectSubject: return vocab::SUBJECT_SUBJECT;
  case IntersectionType::SubjectObject: return vocab::SUBJECT_OBJECT;
  case IntersectionType::ObjectObject: break;
  }
  return vocab::OBJECT_OBJECT;
}

IntersectionAliases::IntersectionAliases() {
  table_[vocab::SUBJECT_SUBJECT] = IntersectionType::SubjectSubject;
  table_[vocab::SUBJECT_OBJECT] = IntersectionType::SubjectObject;
  table_[vocab::OBJECT_OBJECT] = IntersectionType::ObjectObject;
}

std::optional<IntersectionType> IntersectionAliases::find(const std::string& iri) const {
  auto it = table_.find(iri);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Class expressions

std::strong_ordering operator<=>(const ClassExpression& a, const ClassExpression& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.iri <=> b.iri; c != 0) return c;
  return std::lexicographical_compare_three_way(a.operands.begin(), a.operands.end(), b.operands.begin(),
                                                b.operands.end());
}

ClassExpression ClassExpression::normalized() const {
  if (kind == Kind::Named || kind == Kind::LiteralRange) return *this;
  std::vector<ClassExpression> ops;
  for (const auto& op : operands) {
    auto n = op.normalized();
    if (n.kind == kind)
      ops.insert(ops.end(), n.operands.begin(), n.operands.end());
    else
      ops.push_back(std::move(n));
  }
  std::sort(ops.begin(), ops.end());
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  if (ops.size() == 1) return ops.front();
  return {kind, {}, std::move(ops)};
}

std::string ClassExpression::to_string(const PrefixMap& prefixes) const {
  if (kind == Kind::Named || kind == Kind::LiteralRange) {
    if (auto p = prefixes.compact(iri)) return *p;
    return "<" + iri + ">";
  }
  const char* op = kind == Kind::Union ? " ∪ " : " ∩ ";
  std::string out = "(";
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (i > 0) out += op;
    out += operands[i].to_string(prefixes);
  }
  return out + ")";
}

namespace {

class ExpressionTextParser {
public:
  ExpressionTextParser(std::string_view s, const PrefixMap& p) : s_(s), prefixes_(p) {}

  ClassExpression run() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) error("trailing text");
    return e;
  }

private:
  [[noreturn]] void error(const std::string& what) const {
    throw ExtractionError(std::string(s_), "bad class expression text: " + what);
  }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  bool consume(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  ClassExpression expr() {
    skip();
    if (consume("(")) {
      std::vector<ClassExpression> ops{expr()};
      std::optional<ClassExpression::Kind> kind;
      for (;;) {
        if (consume(")")) break;
        ClassExpression::Kind k;
        if (consume("∪"))
          k = ClassExpression::Kind::Union;
        else if (consume("∩"))
          k = ClassExpression::Kind::Intersection;
        else
          error("expected operator or ')'");
        if (kind && *kind != k) error("mixed operators without parentheses");
        kind = k;
        ops.push_back(expr());
      }
      if (!kind) error("parenthesised expression needs an operator");
      return {*kind, {}, std::move(ops)};
    }
    std::string name;
    if (consume("<")) {
      const auto end = s_.find('>', pos_);
      if (end == std::string_view::npos) error("unterminated IRI");
      name = std::string(s_.substr(pos_, end - pos_));
      pos_ = end + 1;
    } else {
      const auto start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != ')' && s_[pos_] != '(') ++pos_;
      if (start == pos_) error("expected a class");
      try {
        name = prefixes_.expand(s_.substr(start, pos_ - start));
      } catch (const RdfError& e) {
        error(e.what());
      }
    }
    return is_literal_datatype(name) ? ClassExpression::literal_range(name) : ClassExpression::named(name);
  }

  std::string_view s_;
  const PrefixMap& prefixes_;
  std::size_t pos_ = 0;
};

} // namespace

ClassExpression parse_class_expression_text(std::string_view text, const PrefixMap& prefixes) {
  return ExpressionTextParser(text, prefixes).run();
}

Term emit_class_expression(Graph& graph, const ClassExpression& expr) {
  if (expr.kind == ClassExpression::Kind::Named || expr.kind == ClassExpression::Kind::LiteralRange)
    return Term::iri(expr.iri);
  std::vector<Term> items;
  for (const auto& op : expr.operands) items.push_back(emit_class_expression(graph, op));
  const Term node = graph.fresh_blank();
  const Term list = make_rdf_list(graph, items);
  graph.insert(node, Term::iri(expr.kind == ClassExpression::Kind::Union ? vocab::unionOf : vocab::intersectionOf),
               list);
  return node;
}

ClassExpression extract_class_expression(const Graph& graph, const Term& node) {
  std::set<Term> active;
  return extract_expression_rec(graph, node, active);
}

// ---------------------------------------------------------------------------
// Mappings

MappingFunction parse_mapping(const std::string& snippet) {
  const auto tokens = tokenize_sparql(snippet);
  std::vector<char> stack;
  for (const auto& t : tokens) {
    if (t.kind == SparqlToken::Kind::String && !t.terminated)
      throw MappingSyntaxError("unterminated string constant in mapping");
    if (t.kind == SparqlToken::Kind::IriRef && !t.terminated) throw MappingSyntaxError("unterminated IRI in mapping");
    if (t.kind != SparqlToken::Kind::Punct) continue;
    const char c = t.text.front();
    if (c == '(' || c == '{' || c == '[') {
      stack.push_back(c);
    } else if (c == ')' || c == '}' || c == ']') {
      const char open = c == ')' ? '(' : c == '}' ? '{' : '[';
      if (stack.empty() || stack.back() != open)
        throw MappingSyntaxError(std::string("unbalanced '") + c + "' in mapping");
      stack.pop_back();
    } else if (c == '"' || c == '\'') {
      throw MappingSyntaxError("unterminated string constant in mapping");
    }
  }
  if (!stack.empty()) throw MappingSyntaxError(std::string("unclosed '") + stack.back() + "' in mapping");

  std::vector<std::string> vars;
  std::set<std::string> assigned;
  std::optional<std::string> output;
  int depth = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == SparqlToken::Kind::Variable) {
      std::string name(t.variable_name());
      if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
    }
    if (t.kind == SparqlToken::Kind::Punct && (t.text == "(" || t.text == "{")) ++depth;
    if (t.kind == SparqlToken::Kind::Punct && (t.text == ")" || t.text == "}")) --depth;
    if (!t.is_keyword("BIND")) continue;
    if (i + 1 >= tokens.size() || !tokens[i + 1].is_punct("(")) continue;
    // Find the AS ?v at the BIND's own parenthesis level.
    int level = 0;
    std::optional<std::string> bound;
    for (std::size_t k = i + 1; k < tokens.size(); ++k) {
      const auto& u = tokens[k];
      if (u.is_punct("(")) ++level;
      if (u.is_punct(")") && --level == 0) break;
      if (level == 1 && u.is_keyword("AS") && k + 1 < tokens.size() &&
          tokens[k + 1].kind == SparqlToken::Kind::Variable)
        bound = std::string(tokens[k + 1].variable_name());
    }
    if (!bound) throw MappingSyntaxError("BIND without AS ?variable");
    assigned.insert(*bound);
    if (depth == 0) output = bound;
  }
  if (vars.empty()) throw MappingSyntaxError("mapping mentions no variables");

  MappingFunction m;
  m.snippet = snippet;
  if (!output) {
    m.input_var = m.output_var = vars.front();
    return m;
  }
  m.output_var = *output;
  for (const auto& v : vars) {
    if (!assigned.contains(v)) {
      m.input_var = v;
      return m;
    }
  }
  throw MappingSyntaxError("mapping has no input variable");
}

MappingFunction parse_mapping(const Term& literal) {
  if (!literal.is_literal()) throw MappingSyntaxError("resource mapping must be a literal, got " + literal.to_string());
  return parse_mapping(literal.value());
}

// ---------------------------------------------------------------------------
// Descriptors

std::vector<DatasetDescriptor> extract_datasets(const Graph& graph) {
  std::vector<DatasetDescriptor> out;
  for (const auto& node : typed(graph, vocab::Dataset)) {
    if (is_virtual_link_set_class_member(graph, node)) continue;
    DatasetDescriptor d;
    d.iri = node_id(node);
    d.title = literal_value(graph, node, vocab::title);
    for (const auto& e : graph.objects(node, iri(vocab::sparqlEndpoint))) {
      if (e.is_iri()) {
        d.endpoint = e.value();
        break;
      }
    }
    d.issued = literal_value(graph, node, vocab::issued);
    d.modified = literal_value(graph, node, vocab::modified);
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

LinkSetDescriptor read_link_set(const Graph& g, const Term& node) {
  LinkSetDescriptor d;
  d.iri = node_id(node);
  const auto preds = g.objects(node, iri(vocab::linkPredicate));
  if (preds.size() != 1)
    throw ExtractionError(d.iri, "a link set needs exactly one link predicate, found " + std::to_string(preds.size()));
  if (!preds.front().is_iri()) throw ExtractionError(d.iri, "link predicate must be an IRI");
  d.link_predicate = preds.front().value();

  const auto hosts = g.subjects(iri(vocab::subset), node);
  d.objects_target = single_node(g, node, vocab::objectsTarget);
  d.subjects_target = single_node(g, node, vocab::subjectsTarget);
  if (!hosts.empty()) {
    d.host_dataset = node_id(hosts.front());
  } else if (d.subjects_target) {
    const Term st = node_term(*d.subjects_target);
    if (!g.has_type(st, iri(vocab::Linkset)) && !g.has_type(st, iri(vocab::SharedInstanceSet)))
      d.host_dataset = d.subjects_target;
  }
  const auto targets = g.objects(node, iri(vocab::target));
  if (!targets.empty()) d.target = node_id(*std::min_element(targets.begin(), targets.end()));
  d.domain = read_expression(g, node, vocab::linkPredicateDomain);
  d.range = read_expression(g, node, vocab::linkPredicateRange);
  d.mapping = read_mapping(g, node);
  d.issued = literal_value(g, node, vocab::issued);
  d.modified = literal_value(g, node, vocab::modified);
  d.simple = g.has_type(node, iri(vocab::SimpleLinkSet));
  return d;
}

SharedInstanceSetDescriptor read_shared_instance_set(const Graph& g, const Term& node) {
  SharedInstanceSetDescriptor d;
  d.iri = node_id(node);
  for (const auto& t : g.objects(node, iri(vocab::target))) {
    if (t.is_literal()) throw ExtractionError(d.iri, "void:target must point to a dataset");
    d.targets.push_back(node_id(t));
  }
  if (d.targets.empty()) throw ExtractionError(d.iri, "shared instance set without void:target");
  std::sort(d.targets.begin(), d.targets.end());
  auto type = read_expression(g, node, vocab::sharedInstanceType);
  if (!type) throw ExtractionError(d.iri, "shared instance set without voidext:sharedInstanceType");
  d.shared_instance_type = std::move(*type);
  d.mapping = read_mapping(g, node);
  d.issued = literal_value(g, node, vocab::issued);
  d.modified = literal_value(g, node, vocab::modified);
  d.simple = g.has_type(node, iri(vocab::SimpleLinkSet));
  return d;
}

} // namespace

std::vector<LinkSetDescriptor> extract_link_sets(const Graph& graph) {
  std::vector<LinkSetDescriptor> out;
  for (const auto& node : typed(graph, vocab::Linkset)) out.push_back(read_link_set(graph, node));
  return out;
}

std::vector<SharedInstanceSetDescriptor> extract_shared_instance_sets(const Graph& graph) {
  std::vector<SharedInstanceSetDescriptor> out;
  for (const auto& node : typed(graph, vocab::SharedInstanceSet))
    out.push_back(read_shared_instance_set(graph, node));
  return out;
}

std::optional<IntersectionType> derive_intersection_type(const Graph& graph, const std::string& a,
                                                         const std::string& b) {
  auto side = [&](const std::string& from, const std::string& to) -> std::optional<char> {
    const Term f = node_term(from);
    const Term t = node_term(to);
    if (graph.has(f, iri(vocab::objectsTarget), t)) return 'o';
    if (graph.has(f, iri(vocab::subjectsTarget), t)) return 's';
    return std::nullopt;
  };
  const auto x = side(a, b);
  const auto y = side(b, a);
  if (!x || !y) return std::nullopt;
  if (*x == 'o' && *y == 'o') return IntersectionType::ObjectObject;
  if (*x == 's' && *y == 's') return IntersectionType::SubjectSubject;
  return IntersectionType::SubjectObject;
}

std::vector<ComplexLinkSetDescriptor> extract_complex_link_sets(const Graph& graph,
                                                                const IntersectionAliases& aliases) {
  std::vector<ComplexLinkSetDescriptor> out;
  for (const auto& node : typed(graph, vocab::ComplexLinkSet)) {
    ComplexLinkSetDescriptor d;
    d.iri = node_id(node);
    bool any_ls = false;
    bool any_sis = false;
    for (const auto& m : graph.objects(node, iri(vocab::intersectAt))) {
      if (m.is_literal()) {
        d.dangling_members.push_back(m.to_string());
        continue;
      }
      d.members.push_back(node_id(m));
      const bool ls = graph.has_type(m, iri(vocab::Linkset));
      const bool sis = graph.has_type(m, iri(vocab::SharedInstanceSet));
      any_ls |= ls;
      any_sis |= sis;
      if (!ls && !sis) d.dangling_members.push_back(node_id(m));
    }
    std::sort(d.members.begin(), d.members.end());
    d.members.erase(std::unique(d.members.begin(), d.members.end()), d.members.end());
    if (any_ls && any_sis)
      d.member_kind = MemberKind::Mixed;
    else if (any_ls)
      d.member_kind = MemberKind::LinkSet;
    else if (any_sis)
      d.member_kind = MemberKind::SharedInstanceSet;

    const auto types = graph.objects(node, iri(vocab::intersectionType));
    if (!types.empty()) {
      const auto& t = types.front();
      if (auto known = t.is_iri() ? aliases.find(t.value()) : std::nullopt) {
        d.intersection_type = known;
        d.intersection_type_explicit = true;
      } else {
        d.unknown_intersection_type = t.is_literal() ? t.value() : node_id(t);
      }
    } else if (d.members.size() == 2) {
      d.intersection_type = derive_intersection_type(graph, d.members[0], d.members[1]);
    }
    const auto rec = graph.objects(node, iri(vocab::recommendedMapping));
    if (!rec.empty()) d.recommended_mapping = node_id(rec.front());
    const auto perf = graph.objects(node, iri(vocab::hasPerformanceMeasure));
    if (!perf.empty()) d.performance = node_id(perf.front());
    d.issued = literal_value(graph, node, vocab::issued);
    d.modified = literal_value(graph, node, vocab::modified);
    out.push_back(std::move(d));
  }
  return out;
}

DescriptorSet extract_all(const Graph& graph, const IntersectionAliases& aliases) {
  return {extract_datasets(graph), extract_link_sets(graph), extract_shared_instance_sets(graph),
          extract_complex_link_sets(graph, aliases)};
}

} // namespace voidext
