#include "support.hpp"

#include "voidext/turtle.hpp"
#include "voidext/vocab.hpp"

#include <doctest.h>

#include <random>

using namespace voidext;

TEST_CASE("parse basics") {
  const auto g = parse_turtle(
      "@prefix voidext: <http://purl.org/query/voidext#> . voidext:x a voidext:ComplexLinkSet .");
  REQUIRE(g.size() == 1);
  const auto& t = *g.begin();
  CHECK(t.subject == Term::iri("http://purl.org/query/voidext#x"));
  CHECK(t.predicate == Term::iri(rdf::type));
  CHECK(t.object == Term::iri(vocab::ComplexLinkSet));
  CHECK(g.prefixes().find("voidext") == "http://purl.org/query/voidext#");

  const auto empty = parse_turtle("");
  CHECK(empty.empty());
  CHECK(empty.prefixes().empty());

  const auto lang = parse_turtle("<http://x.org/a> <http://x.org/b> \"Grisons\"@en .");
  REQUIRE(lang.size() == 1);
  const auto& lit = lang.begin()->object;
  CHECK(lit.value() == "Grisons");
  CHECK(lit.datatype() == rdf::langString);
  CHECK(lit.lang() == "en");
}

TEST_CASE("syntax coverage") {
  const auto g = parse_turtle(R"(
PREFIX ex: <http://example.org/>
BASE <http://example.org/base/>
@prefix x: <http://x.org/> .
# a comment
ex:s ex:p ex:o1 , ex:o2 ;
     ex:q [ ex:r "nested" ; ex:t ( 1 2.5 true ) ] ;
     ex:n -7 , 1.0e3 , false ;
     ex:rel <child> ;
     ex:esc "tab\tquote\" back\\ unié \U0001F600" ;
     ex:long """line one
"quoted" line two""" ;
     ex:single 'single' ;
     ex:typed "2019-06"^^x:gYearMonth .
_:b1 ex:p _:b1 .
)");
  auto objects = [&](const std::string& p) {
    return g.objects(Term::iri("http://example.org/s"), Term::iri("http://example.org/" + p));
  };
  CHECK(objects("p").size() == 2);
  REQUIRE(objects("rel").size() == 1);
  CHECK(objects("rel")[0].value() == "http://example.org/base/child");
  REQUIRE(objects("esc").size() == 1);
  CHECK(objects("esc")[0].value() == "tab\tquote\" back\\ uni\xc3\xa9 \xf0\x9f\x98\x80");
  CHECK(objects("long")[0].value() == "line one\n\"quoted\" line two");
  CHECK(objects("single")[0].value() == "single");
  CHECK(objects("typed")[0].datatype() == "http://x.org/gYearMonth");

  std::set<std::string> numeric;
  for (const auto& o : objects("n")) numeric.insert(o.datatype());
  CHECK(numeric == std::set<std::string>{xsd::integer, xsd::double_, xsd::boolean});

  const auto bnode = objects("q");
  REQUIRE(bnode.size() == 1);
  CHECK(bnode[0].is_blank());
  const auto list = g.objects(bnode[0], Term::iri("http://example.org/t"));
  REQUIRE(list.size() == 1);
  const auto items = parse_rdf_list(g, list[0]);
  REQUIRE(items.size() == 3);
  CHECK(items[0] == Term::literal("1", xsd::integer));
  CHECK(items[1] == Term::literal("2.5", xsd::decimal));
  CHECK(items[2] == Term::literal("true", xsd::boolean));
}

TEST_CASE("blank node labels are fresh per document") {
  const auto g = parse_turtle("_:x <http://x.org/p> _:y . _:y <http://x.org/p> [] .");
  std::set<std::string> labels;
  for (const auto& t : g) {
    if (t.subject.is_blank()) labels.insert(t.subject.value());
    if (t.object.is_blank()) labels.insert(t.object.value());
  }
  CHECK(labels == std::set<std::string>{"b1", "b2", "b3"});
}

TEST_CASE("malformed corpus positions") {
  const auto cases = fx::manifest("malformed/manifest.json");
  CHECK(cases.size() >= 15);
  for (const auto& c : cases) {
    const std::string file = c.at("file");
    CAPTURE(file);
    try {
      parse_turtle(fx::read("malformed/" + file));
      FAIL("parsed without error");
    } catch (const TurtleError& e) {
      const auto& d = e.diagnostic();
      CHECK(d.severity == ParseDiagnostic::Severity::Error);
      CHECK(d.line == c.at("line").get<std::size_t>());
      CHECK(d.column == c.at("column").get<std::size_t>());
      CHECK_FALSE(d.message.empty());
    }
  }
}

TEST_CASE("serializer output shape") {
  CHECK(serialize_turtle(Graph{}, PrefixMap{}).empty());
  const auto only_prefixes = serialize_turtle(Graph{}, PrefixMap{{"ex", "http://example.org/"}});
  CHECK(only_prefixes == "@prefix ex: <http://example.org/> .\n");

  Graph g;
  g.insert(Term::iri("http://example.org/b"), Term::iri("http://example.org/p"), Term::literal("1", xsd::integer));
  g.insert(Term::iri("http://example.org/a"), Term::iri("http://example.org/p"), Term::literal("x\ny"));
  const auto text = serialize_turtle(g, PrefixMap{{"z", "http://z.org/"}, {"ex", "http://example.org/"}});
  CHECK(text.find("@prefix ex:") < text.find("@prefix z:"));
  CHECK(text.find("ex:a") < text.find("ex:b"));
  CHECK(text.find("\"1\"^^<http://www.w3.org/2001/XMLSchema#integer>") != std::string::npos);
  CHECK(text.find("\"\"\"x\ny\"\"\"") != std::string::npos);
}

TEST_CASE("round trip over every fixture") {
  for (const auto& f : fx::all_turtle_fixtures()) {
    CAPTURE(f);
    const auto g = fx::load(f);
    const auto text = serialize_turtle(g);
    const auto again = parse_turtle(text);
    CHECK(isomorphic(g, again));
    CHECK(serialize_turtle(again) == text);
  }
}

TEST_CASE("mapping snippets keep their lexical form") {
  const auto g = fx::load("ebi_uniprot.ttl");
  const auto m = g.objects(fx::iri(fx::EX + "ebi_taxon_set"), fx::iri(vocab::resourceMapping));
  REQUIRE(m.size() == 1);
  const auto again = parse_turtle(serialize_turtle(g));
  const auto m2 = again.objects(fx::iri(fx::EX + "ebi_taxon_set"), fx::iri(vocab::resourceMapping));
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].value() == m[0].value());
  CHECK(m[0].value().find('\n') != std::string::npos);
}

TEST_CASE("round trip on random graphs") {
  std::mt19937 rng(42);
  const std::vector<std::string> nasty{"plain", "with \"quotes\"", "multi\nline", "back\\slash", "tab\there",
                                       "ends with quote\"", "\"\"\"", "caf\xc3\xa9", ""};
  for (int round = 0; round < 200; ++round) {
    Graph g;
    const int n = static_cast<int>(rng() % 15);
    std::vector<Term> blanks;
    for (int i = 0; i < 3; ++i) blanks.push_back(g.fresh_blank());
    for (int i = 0; i < n; ++i) {
      Term s = rng() % 3 == 0 ? blanks[rng() % 3] : Term::iri("http://example.org/s" + std::to_string(rng() % 4));
      Term p = Term::iri("http://example.org/p" + std::to_string(rng() % 3));
      Term o;
      switch (rng() % 5) {
      case 0: o = blanks[rng() % 3]; break;
      case 1: o = Term::literal(nasty[rng() % nasty.size()]); break;
      case 2: o = Term::literal(nasty[rng() % nasty.size()], "", rng() % 2 ? "en" : "de-CH"); break;
      case 3: o = Term::literal(std::to_string(rng() % 100), xsd::integer); break;
      default: o = Term::iri("http://example.org/o" + std::to_string(rng() % 4)); break;
      }
      g.insert(s, p, o);
    }
    const PrefixMap prefixes{{"ex", "http://example.org/"}};
    const auto text = serialize_turtle(g, prefixes);
    CAPTURE(text);
    const auto again = parse_turtle(text);
    REQUIRE(isomorphic(g, again));
    REQUIRE(serialize_turtle(again, prefixes) == text);
  }
}
