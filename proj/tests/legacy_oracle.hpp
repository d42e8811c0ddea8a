#pragma once

#include "voidext/rdf.hpp"
#include "voidext/vocab.hpp"

#include <optional>
#include <set>
#include <string>
#include <tuple>

namespace oracle {

using namespace voidext;

using Fact = std::tuple<std::string, std::set<std::string>, std::set<std::string>, std::string>;

inline Term t(const std::string& s) { return Term::iri(s); }

inline std::set<std::string> partition_classes(const Graph& g, const Term& node) {
  std::set<std::string> out;
  std::vector<Term> holders{node};
  for (const auto& s : g.objects(node, t(vocab::subset))) holders.push_back(s);
  for (const auto& h : holders)
    for (const auto& cp : g.objects(h, t(vocab::classPartition)))
      for (const auto& c : g.objects(cp, t(vocab::class_))) out.insert(c.value());
  return out;
}

inline std::string mapping_of(const Graph& g, const Term& node) {
  const auto m = g.objects(node, t(vocab::resourceMapping));
  return m.empty() ? "" : m.front().value();
}

// Facts read straight off a VoID-only encoding.
inline std::multiset<Fact> legacy_facts(const Graph& g) {
  std::multiset<Fact> out;
  std::set<Term> seen;
  for (const auto& ls : g.subjects(t(rdf::type), t(vocab::Linkset))) {
    seen.insert(ls);
    out.insert({g.objects(ls, t(vocab::linkPredicate)).front().value(), partition_classes(g, ls), {}, mapping_of(g, ls)});
  }
  for (const auto& ls : g.subjects(t(rdf::type), t(vocab::Linkset)))
    for (const auto& target : g.objects(ls, t(vocab::objectsTarget))) {
      if (seen.contains(target)) continue;
      const auto pp = g.objects(target, t(vocab::propertyPartition));
      if (pp.size() != 1) continue;
      seen.insert(target);
      out.insert({g.objects(pp.front(), t(vocab::property)).front().value(), partition_classes(g, target), {},
                  mapping_of(g, target)});
    }
  return out;
}

inline std::set<std::string> flatten(const std::optional<ClassExpression>& e) {
  std::set<std::string> out;
  if (!e) return out;
  if (e->kind == ClassExpression::Kind::Union) {
    for (const auto& op : e->operands) out.insert(op.iri);
  } else {
    out.insert(e->iri);
  }
  return out;
}

inline std::multiset<Fact> canonical_facts(const Graph& g) {
  std::multiset<Fact> out;
  for (const auto& ls : extract_link_sets(g))
    out.insert({ls.link_predicate, flatten(ls.domain), flatten(ls.range), ls.mapping ? ls.mapping->snippet : ""});
  return out;
}

} // namespace oracle
