#include "voidext/canon.hpp"

#include <algorithm>
#include <set>

namespace voidext {

namespace {

Term iri(const std::string& s) { return Term::iri(s); }

const Term& type_p() {
  static const Term t = Term::iri(rdf::type);
  return t;
}

bool is_member(const Graph& g, const Term& node) { return !g.subjects(iri(vocab::intersectAt), node).empty(); }

std::vector<Term> property_partitions(const Graph& g, const Term& dataset) {
  std::vector<Term> out;
  for (const auto& pp : g.objects(dataset, iri(vocab::propertyPartition)))
    if (!g.objects(pp, iri(vocab::property)).empty()) out.push_back(pp);
  return out;
}

std::vector<Term> targets_of(const Graph& g, const Term& node) {
  auto out = g.objects(node, iri(vocab::objectsTarget));
  for (const auto& t : g.objects(node, iri(vocab::subjectsTarget))) out.push_back(t);
  return out;
}

bool targets_back(const Graph& g, const Term& from, const Term& to) {
  return g.has(from, iri(vocab::objectsTarget), to) || g.has(from, iri(vocab::subjectsTarget), to);
}

void remove_about(Graph& g, const Term& node) {
  for (const auto& t : g.about(node)) g.erase(t);
}

// Removes a blank-node expression tree that nothing else points to.
void remove_blank_tree(Graph& g, const Term& node) {
  if (!node.is_blank() || !g.referencing(node).empty()) return;
  const auto about = g.about(node);
  for (const auto& t : about) g.erase(t);
  for (const auto& t : about) remove_blank_tree(g, t.object);
}

class Importer {
public:
  Importer(const Graph& in, const CanonOptions& options) : in_(in), out_(in), options_(options) {}

  std::pair<Graph, CanonReport> run() {
    std::set<Term> handled;
    for (const auto& node : in_.subjects(type_p(), iri(vocab::Linkset))) {
      if (handled.contains(node)) continue;
      switch (detect_legacy_pattern(in_, node)) {
      case LegacyPattern::Canonical:
        handled.insert(node);
        report_.rewrites.push_back({node_id(node), LegacyPattern::Canonical, ""});
        break;
      case LegacyPattern::VL_m1: {
        const Term partner = m1_partner(node);
        handled.insert(node);
        handled.insert(partner);
        rewrite_m1(node, partner);
        break;
      }
      case LegacyPattern::VL_m2: {
        const Term target = m2_target(node);
        handled.insert(node);
        handled.insert(target);
        rewrite_m2(node, target);
        break;
      }
      case LegacyPattern::Unknown:
        break;
      }
    }
    return {std::move(out_), std::move(report_)};
  }

private:
  Term m1_partner(const Term& node) const {
    for (const auto& t : targets_of(in_, node))
      if (in_.has_type(t, iri(vocab::Linkset)) && targets_back(in_, t, node)) return t;
    throw CanonError(node_id(node), "no mutual link set target");
  }

  Term m2_target(const Term& node) const {
    for (const auto& t : targets_of(in_, node))
      if (!in_.has_type(t, iri(vocab::Linkset)) && in_.has_type(t, iri(vocab::Dataset)) &&
          property_partitions(in_, t).size() == 1)
        return t;
    throw CanonError(node_id(node), "no dataset target with a property partition");
  }

  // Class partitions on the node and on its subsets become the domain.
  std::string migrate_domain(const Term& node) {
    std::vector<ClassExpression> classes;
    auto take_partitions = [&](const Term& holder) {
      for (const auto& cp : out_.objects(holder, iri(vocab::classPartition))) {
        const auto cls = out_.objects(cp, iri(vocab::class_));
        for (const auto& c : cls)
          if (c.is_iri()) classes.push_back(ClassExpression::named(c.value()));
        out_.erase({holder, iri(vocab::classPartition), cp});
        if (out_.referencing(cp).empty()) remove_about(out_, cp);
      }
    };
    take_partitions(node);
    for (const auto& sub : out_.objects(node, iri(vocab::subset))) {
      if (out_.objects(sub, iri(vocab::classPartition)).empty()) continue;
      take_partitions(sub);
      const auto rest = out_.about(sub);
      const bool only_types =
          std::all_of(rest.begin(), rest.end(), [](const Triple& t) { return t.predicate == type_p(); });
      out_.erase({node, iri(vocab::subset), sub});
      if (only_types && out_.referencing(sub).empty()) remove_about(out_, sub);
    }
    if (classes.empty()) return {};

    std::string notes;
    const auto existing = out_.objects(node, iri(vocab::linkPredicateDomain));
    for (const auto& e : existing) {
      classes.push_back(extract_class_expression(out_, e));
      out_.erase({node, iri(vocab::linkPredicateDomain), e});
      remove_blank_tree(out_, e);
      notes = "class partitions unioned with an existing domain expression";
    }
    ClassExpression domain =
        classes.size() == 1 ? classes.front() : ClassExpression::union_of(std::move(classes)).normalized();
    out_.insert(node, iri(vocab::linkPredicateDomain), emit_class_expression(out_, domain));
    return notes;
  }

  void drop_dataset_type(const Term& node) {
    out_.erase({node, type_p(), iri(vocab::Dataset)});
    out_.insert(node, type_p(), iri(vocab::Linkset));
  }

  void rewrite_m1(const Term& a, const Term& b) {
    drop_dataset_type(a);
    drop_dataset_type(b);
    const auto na = migrate_domain(a);
    const auto nb = migrate_domain(b);
    mint(a, b);
    report_.rewrites.push_back({node_id(a), LegacyPattern::VL_m1, join_notes("paired with " + node_id(b), na)});
    report_.rewrites.push_back({node_id(b), LegacyPattern::VL_m1, join_notes("paired with " + node_id(a), nb)});
  }

  void rewrite_m2(const Term& source, const Term& target) {
    const auto pp = property_partitions(in_, target).front();
    const auto predicate = in_.objects(pp, iri(vocab::property)).front();
    out_.erase({target, iri(vocab::propertyPartition), pp});
    if (out_.referencing(pp).empty()) remove_about(out_, pp);
    drop_dataset_type(target);
    out_.insert(target, iri(vocab::linkPredicate), predicate);
    if (in_.has(source, iri(vocab::objectsTarget), target)) out_.insert(target, iri(vocab::objectsTarget), source);
    if (in_.has(source, iri(vocab::subjectsTarget), target)) out_.insert(target, iri(vocab::subjectsTarget), source);
    drop_dataset_type(source);
    const auto ns = migrate_domain(source);
    const auto nt = migrate_domain(target);
    mint(source, target);
    report_.rewrites.push_back({node_id(source), LegacyPattern::VL_m2, join_notes("target promoted to link set", ns)});
    report_.rewrites.push_back(
        {node_id(target), LegacyPattern::VL_m2, join_notes("property partition became link predicate", nt)});
  }

  static std::string join_notes(std::string a, const std::string& b) { return b.empty() ? a : a + "; " + b; }

  void mint(const Term& a, const Term& b) {
    Term cls;
    do {
      cls = iri(options_.mint_base + "#vls-" + std::to_string(++minted_));
    } while (!out_.about(cls).empty() || !out_.referencing(cls).empty());
    out_.insert(cls, type_p(), iri(vocab::ComplexLinkSet));
    out_.insert(cls, iri(vocab::intersectAt), a);
    out_.insert(cls, iri(vocab::intersectAt), b);
    if (auto type = derive_intersection_type(out_, node_id(a), node_id(b)))
      out_.insert(cls, iri(vocab::intersectionType), iri(intersection_type_iri(*type)));
    const bool ma = !out_.objects(a, iri(vocab::resourceMapping)).empty();
    const bool mb = !out_.objects(b, iri(vocab::resourceMapping)).empty();
    if (ma && mb)
      report_.warnings.push_back(node_id(cls) + ": both members carry a resource mapping; no recommendation emitted");
  }

  const Graph& in_;
  Graph out_;
  const CanonOptions& options_;
  CanonReport report_;
  std::size_t minted_ = 0;
};

} // namespace

std::string to_string(LegacyPattern p) {
  switch (p) {
  case LegacyPattern::VL_m1: return "VL_m1";
  case LegacyPattern::VL_m2: return "VL_m2";
  case LegacyPattern::Canonical: return "already-canonical";
  case LegacyPattern::Unknown: break;
  }
  return "unknown";
}

LegacyPattern detect_legacy_pattern(const Graph& graph, const Term& node) {
  if (is_member(graph, node)) return LegacyPattern::Canonical;
  auto m2_check = [&](const Term& dataset) {
    const auto n = property_partitions(graph, dataset).size();
    if (n >= 2)
      throw CanonError(node_id(dataset), std::to_string(n) + " property partitions; cannot tell which is the link");
    return n == 1;
  };
  if (graph.has_type(node, iri(vocab::Linkset))) {
    for (const auto& t : targets_of(graph, node)) {
      if (graph.has_type(t, iri(vocab::Linkset))) {
        if (targets_back(graph, t, node)) return LegacyPattern::VL_m1;
      } else if (graph.has_type(t, iri(vocab::Dataset)) && m2_check(t)) {
        return LegacyPattern::VL_m2;
      }
    }
    return LegacyPattern::Unknown;
  }
  if (graph.has_type(node, iri(vocab::Dataset))) {
    auto sources = graph.subjects(iri(vocab::objectsTarget), node);
    for (const auto& s : graph.subjects(iri(vocab::subjectsTarget), node)) sources.push_back(s);
    for (const auto& s : sources)
      if (graph.has_type(s, iri(vocab::Linkset)) && m2_check(node)) return LegacyPattern::VL_m2;
  }
  return LegacyPattern::Unknown;
}

std::pair<Graph, CanonReport> import_legacy(const Graph& graph, const CanonOptions& options) {
  return Importer(graph, options).run();
}

Graph serialize_descriptors(const DescriptorSet& d, const PrefixMap& prefixes) {
  Graph g;
  g.prefixes() = prefixes;
  auto lit = [](const std::string& s) { return Term::literal(s); };
  auto dates = [&](const Term& node, const std::optional<std::string>& issued,
                   const std::optional<std::string>& modified) {
    if (issued) g.insert(node, iri(vocab::issued), lit(*issued));
    if (modified) g.insert(node, iri(vocab::modified), lit(*modified));
  };
  auto opt_node = [&](const Term& node, const std::string& p, const std::optional<std::string>& v) {
    if (v) g.insert(node, iri(p), node_term(*v));
  };

  for (const auto& ds : d.datasets) {
    const Term n = node_term(ds.iri);
    g.insert(n, type_p(), iri(vocab::Dataset));
    if (ds.title) g.insert(n, iri(vocab::title), lit(*ds.title));
    if (ds.endpoint) g.insert(n, iri(vocab::sparqlEndpoint), iri(*ds.endpoint));
    dates(n, ds.issued, ds.modified);
  }
  for (const auto& ls : d.link_sets) {
    const Term n = node_term(ls.iri);
    g.insert(n, type_p(), iri(vocab::Linkset));
    if (ls.simple) g.insert(n, type_p(), iri(vocab::SimpleLinkSet));
    g.insert(n, iri(vocab::linkPredicate), iri(ls.link_predicate));
    if (ls.host_dataset && ls.host_dataset != ls.subjects_target)
      g.insert(node_term(*ls.host_dataset), iri(vocab::subset), n);
    opt_node(n, vocab::objectsTarget, ls.objects_target);
    opt_node(n, vocab::subjectsTarget, ls.subjects_target);
    opt_node(n, vocab::target, ls.target);
    if (ls.domain) g.insert(n, iri(vocab::linkPredicateDomain), emit_class_expression(g, *ls.domain));
    if (ls.range) g.insert(n, iri(vocab::linkPredicateRange), emit_class_expression(g, *ls.range));
    if (ls.mapping) g.insert(n, iri(vocab::resourceMapping), lit(ls.mapping->snippet));
    dates(n, ls.issued, ls.modified);
  }
  for (const auto& sis : d.shared_instance_sets) {
    const Term n = node_term(sis.iri);
    g.insert(n, type_p(), iri(vocab::SharedInstanceSet));
    if (sis.simple) g.insert(n, type_p(), iri(vocab::SimpleLinkSet));
    for (const auto& t : sis.targets) g.insert(n, iri(vocab::target), node_term(t));
    g.insert(n, iri(vocab::sharedInstanceType), emit_class_expression(g, sis.shared_instance_type));
    if (sis.mapping) g.insert(n, iri(vocab::resourceMapping), lit(sis.mapping->snippet));
    dates(n, sis.issued, sis.modified);
  }
  for (const auto& cls : d.complex_link_sets) {
    const Term n = node_term(cls.iri);
    g.insert(n, type_p(), iri(vocab::ComplexLinkSet));
    for (const auto& m : cls.members) g.insert(n, iri(vocab::intersectAt), node_term(m));
    if (cls.intersection_type && cls.intersection_type_explicit)
      g.insert(n, iri(vocab::intersectionType), iri(intersection_type_iri(*cls.intersection_type)));
    opt_node(n, vocab::recommendedMapping, cls.recommended_mapping);
    opt_node(n, vocab::hasPerformanceMeasure, cls.performance);
    dates(n, cls.issued, cls.modified);
  }
  return g;
}

} // namespace voidext
