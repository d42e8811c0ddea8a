#pragma once

#include "voidext/rdf.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using voidext::Binding;
using voidext::Graph;
using voidext::PatternTerm;
using voidext::Term;
using voidext::Triple;
using voidext::TriplePattern;
using voidext::Variable;

struct Case {
  Graph graph;
  std::vector<TriplePattern> patterns;
};

inline Case random_case(std::mt19937& rng) {
  std::vector<Term> nodes;
  for (int i = 0; i < 6; ++i) nodes.push_back(Term::iri("http://x.org/n" + std::to_string(i)));
  nodes.push_back(Term::blank("b1"));
  nodes.push_back(Term::blank("b2"));
  std::vector<Term> preds;
  for (int i = 0; i < 3; ++i) preds.push_back(Term::iri("http://x.org/p" + std::to_string(i)));
  std::vector<Term> objects = nodes;
  objects.push_back(Term::literal("a"));
  objects.push_back(Term::literal("a", "", "en"));
  objects.push_back(Term::literal("1", "http://www.w3.org/2001/XMLSchema#integer"));

  auto pick = [&](const std::vector<Term>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
  Case c;
  const int n = std::uniform_int_distribution<int>(0, 40)(rng);
  for (int i = 0; i < n; ++i) c.graph.insert(pick(nodes), pick(preds), pick(objects));

  const char* vars[] = {"a", "b", "c", "d"};
  auto var_or = [&](const std::vector<Term>& v) -> PatternTerm {
    if (std::bernoulli_distribution(0.55)(rng)) return Variable{vars[std::uniform_int_distribution<int>(0, 3)(rng)]};
    return pick(v);
  };
  const int k = std::uniform_int_distribution<int>(0, 4)(rng);
  for (int i = 0; i < k; ++i) c.patterns.push_back({var_or(nodes), var_or(preds), var_or(objects)});
  return c;
}

// Every assignment of the pattern variables to terms of the graph, kept
// when all instantiated patterns are triples of the graph.
inline std::set<Binding> brute_force(const Graph& g, const std::vector<TriplePattern>& patterns) {
  std::set<std::string> names;
  for (const auto& p : patterns)
    for (const auto* pos : {&p.subject, &p.predicate, &p.object})
      if (const auto* v = std::get_if<Variable>(pos)) names.insert(v->name);
  std::set<Term> universe;
  for (const auto& t : g) {
    universe.insert(t.subject);
    universe.insert(t.predicate);
    universe.insert(t.object);
  }
  const std::vector<std::string> vars(names.begin(), names.end());
  const std::vector<Term> terms(universe.begin(), universe.end());
  std::set<Binding> out;
  if (!vars.empty() && terms.empty()) return out;

  auto value = [](const PatternTerm& p, const Binding& b) {
    if (const auto* v = std::get_if<Variable>(&p)) return b.at(v->name);
    return std::get<Term>(p);
  };
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Binding b;
    for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = terms[idx[i]];
    bool ok = true;
    for (const auto& p : patterns) {
      const Term s = value(p.subject, b);
      const Term pr = value(p.predicate, b);
      if (s.is_literal() || !pr.is_iri() || !g.contains({s, pr, value(p.object, b)})) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(b);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == terms.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

} // namespace oracle
