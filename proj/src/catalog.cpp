#include "voidext/catalog.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace voidext {

namespace {

Term iri(const std::string& s) { return Term::iri(s); }

std::optional<std::string> preferred_literal(const std::vector<Term>& values) {
  for (const auto& v : values)
    if (v.is_literal() && (v.lang().empty() || v.lang() == "en")) return v.value();
  for (const auto& v : values)
    if (v.is_literal()) return v.value();
  return std::nullopt;
}

std::optional<std::string> first_iri(const std::vector<Term>& values) {
  for (const auto& v : values)
    if (v.is_iri()) return v.value();
  return std::nullopt;
}

// Walks up void:subset until a title and an endpoint have been found.
DatasetRef resolve_dataset(const Graph& g, const std::optional<std::string>& start) {
  DatasetRef r;
  if (!start) return r;
  r.iri = start;
  std::set<Term> seen;
  Term n = node_term(*start);
  while (seen.insert(n).second) {
    if (!r.title) r.title = preferred_literal(g.objects(n, iri(vocab::title)));
    if (!r.endpoint) r.endpoint = first_iri(g.objects(n, iri(vocab::sparqlEndpoint)));
    const auto parents = g.subjects(iri(vocab::subset), n);
    if (parents.empty()) break;
    n = parents.front();
  }
  return r;
}

void warn_missing(const VirtualLinkTuple& t, std::vector<std::string>* warnings) {
  if (warnings == nullptr) return;
  for (int side : {1, 2}) {
    const auto& ds = t.dataset(side);
    if (!ds.iri)
      warnings->push_back(t.vl + ": no dataset found for side " + std::to_string(side));
    else if (!ds.endpoint)
      warnings->push_back(t.vl + ": dataset " + *ds.iri + " has no SPARQL endpoint");
  }
}

std::optional<ClassExpression> domain_or_range(const LinkSetDescriptor& ls) { return ls.domain ? ls.domain : ls.range; }

} // namespace

std::string to_string(VirtualLinkKind k) {
  switch (k) {
  case VirtualLinkKind::ComplexOfLinkSets: return "ComplexOfLinkSets";
  case VirtualLinkKind::ComplexOfSharedInstanceSets: return "ComplexOfSharedInstanceSets";
  case VirtualLinkKind::SimpleLinkSet: return "SimpleLinkSet";
  case VirtualLinkKind::SimpleSharedInstanceSet: break;
  }
  return "SimpleSharedInstanceSet";
}

std::map<std::string, VirtualLinkKind> classify(const Graph& graph) {
  std::map<std::string, VirtualLinkKind> out;
  for (const auto& cls : extract_complex_link_sets(graph)) {
    if (cls.member_kind == MemberKind::LinkSet)
      out[cls.iri] = VirtualLinkKind::ComplexOfLinkSets;
    else if (cls.member_kind == MemberKind::SharedInstanceSet)
      out[cls.iri] = VirtualLinkKind::ComplexOfSharedInstanceSets;
    else
      throw ClassificationError(cls.iri + ": complex link set members are mixed or untyped");
  }
  for (const auto& n : graph.subjects(iri(rdf::type), iri(vocab::SimpleLinkSet))) {
    const auto id = node_id(n);
    if (out.contains(id)) continue;
    if (graph.has_type(n, iri(vocab::Linkset)))
      out[id] = VirtualLinkKind::SimpleLinkSet;
    else if (graph.has_type(n, iri(vocab::SharedInstanceSet)))
      out[id] = VirtualLinkKind::SimpleSharedInstanceSet;
    else
      throw ClassificationError(id + ": simple link set is neither a void:Linkset nor a shared instance set");
  }
  for (const auto& n : graph.subjects(iri(rdf::type), iri(vocab::VirtualLinkSet)))
    if (!out.contains(node_id(n)))
      throw ClassificationError(node_id(n) + ": virtual link set of no known kind");
  return out;
}

MappingChoice select_mapping(const ComplexLinkSetDescriptor& cls,
                             const std::vector<std::pair<std::string, std::optional<MappingFunction>>>& members) {
  MappingChoice choice;
  if (cls.recommended_mapping) {
    for (const auto& [member, mapping] : members) {
      if (member == *cls.recommended_mapping && mapping) {
        choice.mapping = mapping;
        choice.holder = member;
        return choice;
      }
    }
  }
  std::vector<const std::pair<std::string, std::optional<MappingFunction>>*> mapped;
  for (const auto& m : members)
    if (m.second) mapped.push_back(&m);
  if (mapped.size() == 1) {
    choice.mapping = mapped.front()->second;
    choice.holder = mapped.front()->first;
  } else if (mapped.size() > 1) {
    choice.warning = cls.iri + ": several members define a mapping and none is recommended";
  }
  return choice;
}

std::vector<VirtualLinkTuple> emit_tuples(const Graph& graph, std::vector<std::string>* warnings) {
  const auto kinds = classify(graph);
  const auto d = extract_all(graph);
  std::map<std::string, const LinkSetDescriptor*> link_sets;
  std::map<std::string, const SharedInstanceSetDescriptor*> shared;
  std::map<std::string, const ComplexLinkSetDescriptor*> complex;
  for (const auto& x : d.link_sets) link_sets[x.iri] = &x;
  for (const auto& x : d.shared_instance_sets) shared[x.iri] = &x;
  for (const auto& x : d.complex_link_sets) complex[x.iri] = &x;

  std::vector<VirtualLinkTuple> out;
  for (const auto& [vl, kind] : kinds) {
    VirtualLinkTuple t;
    t.vl = vl;
    t.kind = kind;
    if (kind == VirtualLinkKind::ComplexOfLinkSets || kind == VirtualLinkKind::ComplexOfSharedInstanceSets) {
      const auto& cls = *complex.at(vl);
      if (cls.members.size() != 2) throw ClassificationError(vl + ": complex link set without two members");
      t.member1 = cls.members[0];
      t.member2 = cls.members[1];
      std::vector<std::pair<std::string, std::optional<MappingFunction>>> mappings;
      if (kind == VirtualLinkKind::ComplexOfLinkSets) {
        const auto& a = *link_sets.at(t.member1);
        const auto& b = *link_sets.at(t.member2);
        t.ds1 = resolve_dataset(graph, a.host_dataset);
        t.ds2 = resolve_dataset(graph, b.host_dataset);
        t.it1 = domain_or_range(a);
        t.it2 = domain_or_range(b);
        t.link_predicates = std::make_pair(a.link_predicate, b.link_predicate);
        mappings = {{a.iri, a.mapping}, {b.iri, b.mapping}};
      } else {
        const auto& a = *shared.at(t.member1);
        const auto& b = *shared.at(t.member2);
        t.ds1 = resolve_dataset(graph, a.target_dataset());
        t.ds2 = resolve_dataset(graph, b.target_dataset());
        t.it1 = a.shared_instance_type;
        t.it2 = b.shared_instance_type;
        mappings = {{a.iri, a.mapping}, {b.iri, b.mapping}};
      }
      if (cls.intersection_type) {
        t.join = *cls.intersection_type;
      } else if (kind == VirtualLinkKind::ComplexOfLinkSets && warnings != nullptr) {
        warnings->push_back(vl + ": intersection type neither declared nor derivable; assuming subject-subject");
      }
      const auto choice = select_mapping(cls, mappings);
      t.f_m = choice.mapping;
      if (choice.holder) t.holder_side = *choice.holder == t.member1 ? 1 : 2;
      if (choice.warning && warnings != nullptr) warnings->push_back(*choice.warning);
      t.issued = cls.issued;
      t.modified = cls.modified;
    } else if (kind == VirtualLinkKind::SimpleLinkSet) {
      const auto& ls = *link_sets.at(vl);
      t.member1 = t.member2 = vl;
      t.ds1 = resolve_dataset(graph, ls.host_dataset);
      t.ds2 = resolve_dataset(graph, ls.objects_target ? ls.objects_target : ls.target);
      t.it1 = ls.domain;
      t.it2 = ls.range;
      t.join = IntersectionType::SubjectObject;
      t.link_predicates = std::make_pair(ls.link_predicate, ls.link_predicate);
      t.f_m = ls.mapping;
      t.holder_side = ls.mapping ? 1 : 0;
      t.issued = ls.issued;
      t.modified = ls.modified;
    } else {
      const auto& sis = *shared.at(vl);
      t.member1 = t.member2 = vl;
      t.ds1 = resolve_dataset(graph, sis.targets.front());
      t.ds2 = resolve_dataset(graph, sis.targets.back());
      t.it1 = t.it2 = sis.shared_instance_type;
      t.f_m = sis.mapping;
      t.holder_side = sis.mapping ? 1 : 0;
      t.issued = sis.issued;
      t.modified = sis.modified;
    }
    warn_missing(t, warnings);
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pattern-based retrieval

namespace {

class Retriever {
public:
  explicit Retriever(const Graph& g) : g_(g) {}

  std::vector<VirtualLinkTuple> run() {
    std::map<std::string, VirtualLinkTuple> out;
    for (const auto& b : solve({{v("vl"), a(), c(vocab::ComplexLinkSet)}})) complex(b.at("vl"), out);
    for (const auto& b : solve({{v("vl"), a(), c(vocab::SimpleLinkSet)}, {v("vl"), a(), c(vocab::Linkset)}})) {
      const auto id = node_id(b.at("vl"));
      if (!out.contains(id)) out[id] = simple_link_set(b.at("vl"));
    }
    for (const auto& b :
         solve({{v("vl"), a(), c(vocab::SimpleLinkSet)}, {v("vl"), a(), c(vocab::SharedInstanceSet)}})) {
      const auto id = node_id(b.at("vl"));
      if (!out.contains(id)) out[id] = simple_shared(b.at("vl"));
    }
    std::vector<VirtualLinkTuple> tuples;
    for (auto& [_, t] : out) tuples.push_back(std::move(t));
    return tuples;
  }

private:
  static PatternTerm v(const char* name) { return Variable{name}; }
  static PatternTerm c(const std::string& s) { return Term::iri(s); }
  static PatternTerm a() { return Term::iri(rdf::type); }

  std::vector<Binding> solve(std::vector<TriplePattern> patterns) const { return bgp_solve(g_, patterns); }

  std::vector<Term> values(const Term& s, const std::string& p) const {
    std::vector<Term> out;
    for (const auto& b : solve({{s, c(p), v("o")}})) out.push_back(b.at("o"));
    return out;
  }

  bool typed(const Term& n, const std::string& cls) const { return !solve({{n, a(), c(cls)}}).empty(); }

  std::optional<ClassExpression> expression(const Term& n, const std::string& p) const {
    const auto vs = values(n, p);
    if (vs.empty()) return std::nullopt;
    return extract_class_expression(g_, vs.front());
  }

  std::optional<MappingFunction> mapping(const Term& n) const {
    const auto vs = values(n, vocab::resourceMapping);
    if (vs.empty()) return std::nullopt;
    return parse_mapping(vs.front());
  }

  DatasetRef dataset(const std::optional<Term>& start) const {
    DatasetRef r;
    if (!start) return r;
    r.iri = node_id(*start);
    std::set<Term> seen;
    Term n = *start;
    while (seen.insert(n).second) {
      if (!r.title) r.title = preferred_literal(values(n, vocab::title));
      if (!r.endpoint) r.endpoint = first_iri(values(n, vocab::sparqlEndpoint));
      const auto up = solve({{v("parent"), c(vocab::subset), n}});
      if (up.empty()) break;
      n = up.front().at("parent");
    }
    return r;
  }

  std::optional<Term> host(const Term& ls) const {
    const auto up = solve({{v("h"), c(vocab::subset), ls}});
    if (!up.empty()) return up.front().at("h");
    const auto st = values(ls, vocab::subjectsTarget);
    if (!st.empty() && !typed(st.front(), vocab::Linkset) && !typed(st.front(), vocab::SharedInstanceSet))
      return st.front();
    return std::nullopt;
  }

  std::optional<std::string> literal(const Term& n, const std::string& p) const {
    return preferred_literal(values(n, p));
  }

  void complex(const Term& vl, std::map<std::string, VirtualLinkTuple>& out) const {
    VirtualLinkTuple t;
    t.vl = node_id(vl);
    const auto ls_members =
        solve({{vl, c(vocab::intersectAt), v("m")}, {v("m"), a(), c(vocab::Linkset)}});
    const auto sis_members =
        solve({{vl, c(vocab::intersectAt), v("m")}, {v("m"), a(), c(vocab::SharedInstanceSet)}});
    const bool of_link_sets = ls_members.size() == 2 && sis_members.empty();
    if (!of_link_sets && !(sis_members.size() == 2 && ls_members.empty())) return;
    t.kind = of_link_sets ? VirtualLinkKind::ComplexOfLinkSets : VirtualLinkKind::ComplexOfSharedInstanceSets;
    const auto& members = of_link_sets ? ls_members : sis_members;
    const Term m1 = members[0].at("m");
    const Term m2 = members[1].at("m");
    t.member1 = node_id(m1);
    t.member2 = node_id(m2);
    if (of_link_sets) {
      t.ds1 = dataset(host(m1));
      t.ds2 = dataset(host(m2));
      auto dom_or_range = [&](const Term& m) {
        auto e = expression(m, vocab::linkPredicateDomain);
        return e ? e : expression(m, vocab::linkPredicateRange);
      };
      t.it1 = dom_or_range(m1);
      t.it2 = dom_or_range(m2);
      t.link_predicates = std::make_pair(values(m1, vocab::linkPredicate).front().value(),
                                         values(m2, vocab::linkPredicate).front().value());
    } else {
      t.ds1 = dataset(values(m1, vocab::target).front());
      t.ds2 = dataset(values(m2, vocab::target).front());
      t.it1 = expression(m1, vocab::sharedInstanceType);
      t.it2 = expression(m2, vocab::sharedInstanceType);
    }

    const auto declared = values(vl, vocab::intersectionType);
    if (!declared.empty()) {
      if (auto k = IntersectionAliases{}.find(declared.front().value())) t.join = *k;
    } else {
      const auto o12 = !solve({{m1, c(vocab::objectsTarget), m2}}).empty();
      const auto s12 = !solve({{m1, c(vocab::subjectsTarget), m2}}).empty();
      const auto o21 = !solve({{m2, c(vocab::objectsTarget), m1}}).empty();
      const auto s21 = !solve({{m2, c(vocab::subjectsTarget), m1}}).empty();
      if ((o12 || s12) && (o21 || s21))
        t.join = o12 && o21   ? IntersectionType::ObjectObject
                 : s12 && s21 ? IntersectionType::SubjectSubject
                              : IntersectionType::SubjectObject;
    }

    const auto f1 = mapping(m1);
    const auto f2 = mapping(m2);
    const auto rec = values(vl, vocab::recommendedMapping);
    if (!rec.empty() && rec.front() == m1 && f1) {
      t.f_m = f1;
      t.holder_side = 1;
    } else if (!rec.empty() && rec.front() == m2 && f2) {
      t.f_m = f2;
      t.holder_side = 2;
    } else if (f1 && !f2) {
      t.f_m = f1;
      t.holder_side = 1;
    } else if (f2 && !f1) {
      t.f_m = f2;
      t.holder_side = 2;
    }
    t.issued = literal(vl, vocab::issued);
    t.modified = literal(vl, vocab::modified);
    out[t.vl] = std::move(t);
  }

  VirtualLinkTuple simple_link_set(const Term& vl) const {
    VirtualLinkTuple t;
    t.vl = t.member1 = t.member2 = node_id(vl);
    t.kind = VirtualLinkKind::SimpleLinkSet;
    t.ds1 = dataset(host(vl));
    auto target = values(vl, vocab::objectsTarget);
    if (target.empty()) target = values(vl, vocab::target);
    if (!target.empty()) t.ds2 = dataset(target.front());
    t.it1 = expression(vl, vocab::linkPredicateDomain);
    t.it2 = expression(vl, vocab::linkPredicateRange);
    t.join = IntersectionType::SubjectObject;
    const auto p = values(vl, vocab::linkPredicate).front().value();
    t.link_predicates = std::make_pair(p, p);
    t.f_m = mapping(vl);
    t.holder_side = t.f_m ? 1 : 0;
    t.issued = literal(vl, vocab::issued);
    t.modified = literal(vl, vocab::modified);
    return t;
  }

  VirtualLinkTuple simple_shared(const Term& vl) const {
    VirtualLinkTuple t;
    t.vl = t.member1 = t.member2 = node_id(vl);
    t.kind = VirtualLinkKind::SimpleSharedInstanceSet;
    const auto targets = values(vl, vocab::target);
    t.ds1 = dataset(targets.front());
    t.ds2 = dataset(targets.back());
    t.it1 = t.it2 = expression(vl, vocab::sharedInstanceType);
    t.f_m = mapping(vl);
    t.holder_side = t.f_m ? 1 : 0;
    t.issued = literal(vl, vocab::issued);
    t.modified = literal(vl, vocab::modified);
    return t;
  }

  const Graph& g_;
};

} // namespace

std::vector<VirtualLinkTuple> retrieve_tuples(const Graph& graph) { return Retriever(graph).run(); }

std::string catalog_json(const std::vector<VirtualLinkTuple>& tuples, const PrefixMap& prefixes, int indent) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<std::string>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); };
  auto type = [&](const std::optional<ClassExpression>& e) {
    return e ? ordered_json(e->to_string(prefixes)) : ordered_json(nullptr);
  };

  std::vector<const VirtualLinkTuple*> sorted;
  for (const auto& t : tuples) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->vl < b->vl; });

  ordered_json sets = ordered_json::array();
  for (const auto* t : sorted) {
    ordered_json j;
    j["iri"] = t->vl;
    j["kind"] = to_string(t->kind);
    j["datasets"] = ordered_json::array({{{"title", opt(t->ds1.title)}, {"endpoint", opt(t->ds1.endpoint)}},
                                         {{"title", opt(t->ds2.title)}, {"endpoint", opt(t->ds2.endpoint)}}});
    j["types"] = ordered_json::array({type(t->it1), type(t->it2)});
    j["join"] = to_string(t->join);
    if (t->link_predicates)
      j["link_predicates"] = ordered_json::array({t->link_predicates->first, t->link_predicates->second});
    if (t->f_m)
      j["mapping"] = {{"snippet", t->f_m->snippet}, {"input_var", t->f_m->input_var}, {"output_var", t->f_m->output_var}};
    if (t->issued) j["issued"] = *t->issued;
    if (t->modified) j["modified"] = *t->modified;
    sets.push_back(std::move(j));
  }
  ordered_json doc;
  doc["virtual_link_sets"] = std::move(sets);
  return doc.dump(indent);
}

} // namespace voidext
