#include "voidext/validator.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace voidext {

namespace {

Term iri(const std::string& s) { return Term::iri(s); }

class Validator {
public:
  Validator(const Graph& g, const IntersectionAliases& aliases) : g_(g), aliases_(aliases) {}

  std::vector<Diagnostic> run() {
    for (const auto& n : typed(vocab::ComplexLinkSet)) complex_link_set(n);
    for (const auto& n : typed(vocab::SimpleLinkSet)) simple_link_set(n);
    for (const auto& n : typed(vocab::Linkset)) link_set(n);
    for (const auto& n : typed(vocab::SharedInstanceSet)) shared_instance_set(n);
    mappings();
    provenance();

    std::sort(out_.begin(), out_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return std::tie(a.code, a.subject, a.message) < std::tie(b.code, b.subject, b.message);
    });
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return out_;
  }

private:
  std::vector<Term> typed(const std::string& cls) const { return g_.subjects(iri(rdf::type), iri(cls)); }
  bool is(const Term& n, const std::string& cls) const { return g_.has_type(n, iri(cls)); }

  void report(DiagnosticCode code, const Term& node, std::string message) {
    out_.push_back({code, node.is_literal() ? node.to_string() : node_id(node), severity_of(code), std::move(message)});
  }

  void complex_link_set(const Term& n) {
    const auto members = g_.objects(n, iri(vocab::intersectAt));
    if (members.size() != 2)
      report(DiagnosticCode::C1, n,
             "complex link set needs exactly two intersectAt members, found " + std::to_string(members.size()));

    bool any_ls = false;
    bool any_sis = false;
    for (const auto& m : members) {
      const bool ls = !m.is_literal() && is(m, vocab::Linkset);
      const bool sis = !m.is_literal() && is(m, vocab::SharedInstanceSet);
      if (!ls && !sis) report(DiagnosticCode::C2, n, "member " + m.to_string() + " is neither a link set nor a shared instance set");
      if (ls && sis) report(DiagnosticCode::C2, n, "member " + m.to_string() + " is typed both link set and shared instance set");
      any_ls |= ls;
      any_sis |= sis;
    }
    if (any_ls && any_sis) report(DiagnosticCode::C2, n, "members mix link sets and shared instance sets");

    if (is(n, vocab::Dataset) || !g_.objects(n, iri(vocab::propertyPartition)).empty())
      report(DiagnosticCode::C3, n, "complex link set must not be a void:Dataset or carry property partitions");

    recommendation(n, members);
    intersection(n, members);
  }

  void recommendation(const Term& n, const std::vector<Term>& members) {
    const auto recs = g_.objects(n, iri(vocab::recommendedMapping));
    auto mapped = [&](const Term& m) { return !g_.objects(m, iri(vocab::resourceMapping)).empty(); };
    if (recs.empty()) {
      if (members.size() == 2 && mapped(members[0]) && mapped(members[1]))
        report(DiagnosticCode::C5, n, "both members define a resource mapping but none is recommended");
      return;
    }
    if (recs.size() > 1) report(DiagnosticCode::C5, n, "more than one recommended mapping");
    for (const auto& r : recs) {
      if (std::find(members.begin(), members.end(), r) == members.end())
        report(DiagnosticCode::C5, n, "recommended mapping " + r.to_string() + " is not a member");
      else if (!mapped(r))
        report(DiagnosticCode::C5, n, "recommended member " + r.to_string() + " has no resource mapping");
    }
  }

  void intersection(const Term& n, const std::vector<Term>& members) {
    const auto types = g_.objects(n, iri(vocab::intersectionType));
    if (types.size() > 1) report(DiagnosticCode::C6, n, "more than one intersection type");
    for (const auto& t : types) {
      const auto known = t.is_iri() ? aliases_.find(t.value()) : std::nullopt;
      if (!known) {
        report(DiagnosticCode::C6, n, "unknown intersection type " + t.to_string());
        continue;
      }
      if (members.size() != 2 || !is(members[0], vocab::Linkset) || !is(members[1], vocab::Linkset)) continue;
      const auto derived = derive_intersection_type(g_, node_id(members[0]), node_id(members[1]));
      if (derived && *derived != *known)
        report(DiagnosticCode::C6, n,
               "declared " + to_string(*known) + " but member targets imply " + to_string(*derived));
    }
  }

  std::optional<ClassExpression> shared_type(const Term& n) const {
    if (!is(n, vocab::SharedInstanceSet)) return std::nullopt;
    const auto v = g_.objects(n, iri(vocab::sharedInstanceType));
    if (v.size() != 1) return std::nullopt;
    try {
      return extract_class_expression(g_, v.front()).normalized();
    } catch (const ExtractionError&) {
      return std::nullopt;
    }
  }

  // Two shared instance sets over exactly the same type may point at each
  // other and still be simple.
  bool same_type_sharing(const Term& a, const Term& b) const {
    const auto ta = shared_type(a);
    const auto tb = shared_type(b);
    return ta && tb && *ta == *tb;
  }

  void simple_link_set(const Term& n) {
    if (is(n, vocab::ComplexLinkSet)) report(DiagnosticCode::C4, n, "typed both simple and complex link set");
    if (!g_.subjects(iri(vocab::intersectAt), n).empty())
      report(DiagnosticCode::C4, n, "simple link set is a member of a complex link set");
    const auto is_link_set = [&](const Term& t) {
      return !t.is_literal() && (is(t, vocab::Linkset) || is(t, vocab::SharedInstanceSet));
    };
    for (const auto* p : {&vocab::objectsTarget, &vocab::subjectsTarget, &vocab::target}) {
      for (const auto& t : g_.objects(n, iri(*p)))
        if (is_link_set(t) && !same_type_sharing(n, t))
          report(DiagnosticCode::C4, n, "simple link set targets link set " + t.to_string());
      for (const auto& s : g_.subjects(iri(*p), n))
        if (is_link_set(s) && !same_type_sharing(n, s))
          report(DiagnosticCode::C4, n, "simple link set is the target of " + s.to_string());
    }
  }

  void link_set(const Term& n) {
    const auto preds = g_.objects(n, iri(vocab::linkPredicate));
    if (preds.size() != 1)
      report(DiagnosticCode::C4, n, "link set needs exactly one link predicate, found " + std::to_string(preds.size()));
    expression(n, vocab::linkPredicateDomain);
    const bool has_range = expression(n, vocab::linkPredicateRange);
    const bool in_complex = !g_.subjects(iri(vocab::intersectAt), n).empty();
    if (!in_complex && !has_range && !g_.objects(n, iri(vocab::objectsTarget)).empty())
      report(DiagnosticCode::C8, n, "link set connecting through the object position needs a link predicate range");
  }

  void shared_instance_set(const Term& n) {
    if (!expression(n, vocab::sharedInstanceType))
      report(DiagnosticCode::C8, n, "shared instance set needs a shared instance type");
  }

  // Reports malformed expressions; true when a well-formed one is present.
  bool expression(const Term& n, const std::string& predicate) {
    const auto values = g_.objects(n, iri(predicate));
    if (values.size() > 1) {
      report(DiagnosticCode::C8, n, "more than one <" + predicate + "> value");
      return false;
    }
    if (values.empty()) return false;
    try {
      extract_class_expression(g_, values.front());
      return true;
    } catch (const ExtractionError& e) {
      report(DiagnosticCode::C8, n, std::string("malformed class expression: ") + e.what());
      return false;
    }
  }

  void mappings() {
    std::set<Term> holders;
    for (const auto& t : g_) {
      if (t.predicate != iri(vocab::resourceMapping)) continue;
      holders.insert(t.subject);
      try {
        parse_mapping(t.object);
      } catch (const MappingSyntaxError& e) {
        report(DiagnosticCode::C7, t.subject, e.what());
      }
    }
    for (const auto& h : holders)
      if (g_.objects(h, iri(vocab::resourceMapping)).size() > 1)
        report(DiagnosticCode::C7, h, "more than one resource mapping");
  }

  void provenance() {
    std::set<Term> nodes;
    for (const auto* cls : {&vocab::ComplexLinkSet, &vocab::SimpleLinkSet, &vocab::VirtualLinkSet})
      for (const auto& n : typed(*cls)) nodes.insert(n);
    for (const auto& n : nodes) {
      bool any = false;
      for (const auto* p : {&vocab::issued, &vocab::modified}) {
        for (const auto& v : g_.objects(n, iri(*p))) {
          any = true;
          if (!v.is_literal() || !is_iso8601_date(v.value()))
            report(DiagnosticCode::C9, n, "unparseable date " + v.to_string());
        }
      }
      if (!any) report(DiagnosticCode::C9, n, "virtual link set has no dcterms:issued or dcterms:modified date");
    }
  }

  const Graph& g_;
  const IntersectionAliases& aliases_;
  std::vector<Diagnostic> out_;
};

} // namespace

std::string to_string(DiagnosticCode c) { return "C" + std::to_string(static_cast<int>(c)); }

std::string to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

Severity severity_of(DiagnosticCode c) { return c == DiagnosticCode::C9 ? Severity::Warning : Severity::Error; }

std::vector<Diagnostic> validate(const Graph& graph, const IntersectionAliases& aliases) {
  return Validator(graph, aliases).run();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

} // namespace voidext
