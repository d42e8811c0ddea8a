#include "voidext/turtle.hpp"

#include <algorithm>
#include <functional>

namespace voidext {

namespace {

std::string short_literal(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
    case '\\': out += "\\\\"; break;
    case '\r': out += "\\r"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
  return out + "\"";
}

// Raw newlines and quotes are kept; a quote is escaped only where it would
// otherwise close the literal.
std::string long_literal(std::string_view s) {
  std::string out = "\"\"\"";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\r') {
      out += "\\r";
    } else if (c == '"' && (i + 1 == s.size() || s[i + 1] == '"')) {
      out += "\\\"";
    } else {
      out += c;
    }
  }
  return out + "\"\"\"";
}

std::string iri_ref(const std::string& iri, const PrefixMap& prefixes) {
  if (auto pname = prefixes.compact(iri)) return *pname;
  return "<" + iri + ">";
}

std::string render_term(const Term& t, const PrefixMap& prefixes) {
  switch (t.kind()) {
  case Term::Kind::Iri:
    return iri_ref(t.value(), prefixes);
  case Term::Kind::Blank:
    return "_:" + t.value();
  case Term::Kind::Literal:
    break;
  }
  const bool needs_long = t.value().find_first_of("\n\"") != std::string::npos;
  std::string out = needs_long ? long_literal(t.value()) : short_literal(t.value());
  if (!t.lang().empty())
    out += "@" + t.lang();
  else if (t.datatype() != xsd::string_)
    out += "^^" + iri_ref(t.datatype(), prefixes);
  return out;
}

class TurtleWriter {
public:
  TurtleWriter(const Graph& g, const PrefixMap& prefixes) : prefixes_(prefixes) {
    const auto labels = canonical_blank_labels(g);
    auto relabel = [&](const Term& t) {
      return t.is_blank() ? Term::blank("b" + std::to_string(labels.at(t.value()))) : t;
    };
    for (const auto& t : g) graph_.insert(relabel(t.subject), t.predicate, relabel(t.object));
    for (const auto& t : graph_)
      if (t.object.is_blank()) ++refs_[t.object];
  }

  std::string run() {
    std::string out;
    for (const auto& [label, ns] : prefixes_.entries()) out += "@prefix " + label + ": <" + ns + "> .\n";

    std::vector<Term> subjects;
    for (const auto& t : graph_)
      if (subjects.empty() || subjects.back() != t.subject) subjects.push_back(t.subject);

    choose_inlined(subjects);

    bool first = true;
    for (const auto& s : subjects) {
      if (inlined_.contains(s)) continue;
      out += first && prefixes_.empty() ? "" : "\n";
      first = false;
      out += term(s) + " " + predicate_objects(s, 1) + " .\n";
    }
    return out;
  }

private:
  bool inlinable(const Term& t) const {
    if (!t.is_blank()) return false;
    auto it = refs_.find(t);
    return it != refs_.end() && it->second == 1 && !demoted_.contains(t);
  }

  // Blank nodes referenced exactly once are written in place unless they sit
  // on a cycle unreachable from any labeled root.
  void choose_inlined(const std::vector<Term>& subjects) {
    for (;;) {
      inlined_.clear();
      std::function<void(const Term&)> visit = [&](const Term& node) {
        for (const auto& t : graph_.about(node)) {
          if (inlinable(t.object) && inlined_.insert(t.object).second) visit(t.object);
        }
      };
      for (const auto& s : subjects)
        if (!inlinable(s)) visit(s);
      const Term* stranded = nullptr;
      for (const auto& s : subjects)
        if (inlinable(s) && !inlined_.contains(s)) {
          stranded = &s;
          break;
        }
      if (stranded == nullptr) return;
      demoted_.insert(*stranded);
    }
  }

  // Items of a well-formed collection whose cells are all inlined and carry
  // nothing but rdf:first/rdf:rest.
  std::optional<std::vector<Term>> as_list(const Term& head) const {
    const Term nil = Term::iri(rdf::nil);
    std::vector<Term> items;
    Term node = head;
    std::set<Term> seen;
    while (node != nil) {
      if (!node.is_blank() || !seen.insert(node).second) return std::nullopt;
      if (node != head && !inlinable(node)) return std::nullopt;
      const auto about = graph_.about(node);
      if (about.size() != 2) return std::nullopt;
      const auto firsts = graph_.objects(node, Term::iri(rdf::first));
      const auto rests = graph_.objects(node, Term::iri(rdf::rest));
      if (firsts.size() != 1 || rests.size() != 1) return std::nullopt;
      items.push_back(firsts.front());
      node = rests.front();
    }
    return items;
  }

  std::string term(const Term& t) const { return render_term(t, prefixes_); }

  std::string object(const Term& o, int depth) const {
    if (!inlined_.contains(o)) return term(o);
    if (auto items = as_list(o)) {
      std::string out = "(";
      for (const auto& item : *items) out += " " + object(item, depth + 1);
      return out + " )";
    }
    if (graph_.about(o).empty()) return "[]";
    const std::string indent(4 * static_cast<std::size_t>(depth), ' ');
    return "[\n" + indent + "    " + predicate_objects(o, depth + 1) + "\n" + indent + "]";
  }

  std::string predicate_objects(const Term& s, int depth) const {
    std::vector<std::pair<Term, std::vector<Term>>> groups;
    for (const auto& t : graph_.about(s)) {
      if (groups.empty() || groups.back().first != t.predicate) groups.emplace_back(t.predicate, std::vector<Term>{});
      groups.back().second.push_back(t.object);
    }
    const Term type = Term::iri(rdf::type);
    std::stable_partition(groups.begin(), groups.end(), [&](const auto& g) { return g.first == type; });

    const std::string sep = " ;\n" + std::string(4 * static_cast<std::size_t>(depth), ' ');
    std::string out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (i > 0) out += sep;
      out += groups[i].first == type ? "a" : term(groups[i].first);
      for (std::size_t j = 0; j < groups[i].second.size(); ++j)
        out += (j == 0 ? " " : " , ") + object(groups[i].second[j], depth);
    }
    return out;
  }

  const PrefixMap& prefixes_;
  Graph graph_;
  std::map<Term, std::size_t> refs_;
  std::set<Term> inlined_;
  std::set<Term> demoted_;
};

} // namespace

std::string turtle_term(const Term& t, const PrefixMap& prefixes) { return render_term(t, prefixes); }

std::string serialize_turtle(const Graph& graph, const PrefixMap& prefixes) {
  return TurtleWriter(graph, prefixes).run();
}

} // namespace voidext
