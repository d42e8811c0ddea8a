#include "support.hpp"

#include "voidext/catalog.hpp"
#include "voidext/scaffold.hpp"
#include "voidext/sparql_lexer.hpp"

#include <doctest.h>

#include <sstream>

using namespace voidext;

namespace {

const std::string EBI = "https://www.ebi.ac.uk/rdf/services/sparql";
const std::string UNIPROT = "https://sparql.uniprot.org/sparql/";

VirtualLinkTuple tuple_of(const std::string& file) {
  const auto t = emit_tuples(fx::load(file));
  REQUIRE(t.size() == 1);
  return t.front();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!trim(l).empty()) out.push_back(trim(l));
  return out;
}

// Byte ranges covered by SERVICE bodies.
std::vector<std::pair<std::size_t, std::size_t>> service_ranges(const std::string& q) {
  const auto tokens = tokenize_sparql(q);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_keyword("SERVICE")) continue;
    std::size_t k = i + 1;
    while (k < tokens.size() && !tokens[k].is_punct("{")) ++k;
    int depth = 0;
    for (std::size_t j = k; j < tokens.size(); ++j) {
      if (tokens[j].is_punct("{")) ++depth;
      if (tokens[j].is_punct("}") && --depth == 0) {
        out.emplace_back(tokens[k].offset, tokens[j].offset);
        break;
      }
    }
  }
  return out;
}

bool in_service(const std::string& q, std::size_t offset) {
  for (const auto& [b, e] : service_ranges(q))
    if (offset > b && offset < e) return true;
  return false;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

} // namespace

TEST_CASE("fragment files") {
  const auto f = read_fragment_file(fx::path("fragments/gleevec_ebi.rq"));
  CHECK(f.dataset_endpoint == EBI);
  CHECK(f.exposed_vars == std::vector<std::string>{"assay"});
  CHECK(f.pattern_text.find("cco:hasMolecule chembl:CHEMBL941") != std::string::npos);
  CHECK(f.pattern_text.find("# endpoint") == std::string::npos);

  CHECK_THROWS_AS(parse_fragment("# vars: ?missing\n?a ?b ?c ."), ScaffoldError);
  CHECK_THROWS_AS(parse_fragment("?a ?b { ?c ."), ScaffoldError);
}

TEST_CASE("EBI-UniProt federated query") {
  const auto t = tuple_of("ebi_uniprot.ttl");
  const auto local = read_fragment_file(fx::path("fragments/gleevec_ebi.rq"));
  const auto remote = read_fragment_file(fx::path("fragments/rodents_uniprot.rq"));
  const auto q = scaffold(t, local, remote);
  CAPTURE(q);
  CHECK(q.find("cco:hasMolecule chembl:CHEMBL941") != std::string::npos);
  CHECK(count(q, "SERVICE") == 1);
  CHECK(q.find("SERVICE <" + UNIPROT + ">") != std::string::npos);
  CHECK(q.find("BIND(IRI(CONCAT(\"http://purl.uniprot.org/taxonomy/\", STRAFTER(STR(?IRI_EBI), "
               "\"http://identifiers.org/taxonomy/\")))") != std::string::npos);
  CHECK(check_wellformed(q).empty());
  CHECK(q.rfind("PREFIX cco: <http://rdf.ebi.ac.uk/terms/chembl#>", 0) == 0);
  CHECK(q.find("SELECT ?assay ?taxon2 WHERE") != std::string::npos);

  const auto bridge = q.find("BIND(IRI(CONCAT");
  CHECK_FALSE(in_service(q, bridge));
  CHECK(in_service(q, q.find("up:otherName")));
  CHECK_FALSE(in_service(q, q.find("cco:hasMolecule")));
}

TEST_CASE("LINDAS-DBpedia minimal join") {
  const auto t = tuple_of("lindas_dbpedia.ttl");
  const auto q = scaffold(t, std::nullopt, std::nullopt);
  CAPTURE(q);
  CHECK(check_wellformed(q).empty());
  CHECK(q.find("SELECT * WHERE") != std::string::npos);
  CHECK(count(q, "SERVICE") == 1);
  CHECK(q.find("dbp:shortName ?dbp_name") != std::string::npos);
  CHECK(q.find("lindas:longName ?lindas_name") != std::string::npos);
  CHECK(q.find("AS ?dbp_name)") != std::string::npos);
  CHECK(q.find("?vlj_2 a lindas:Canton") != std::string::npos);

  ScaffoldOptions at_lindas;
  at_lindas.at = "https://lindas-data.ch/sparql";
  const auto q2 = scaffold(t, std::nullopt, std::nullopt, at_lindas);
  CHECK(q2.find("SERVICE <http://dbpedia.org/sparql>") != std::string::npos);
  CHECK_FALSE(in_service(q2, q2.find("lindas:longName")));
  CHECK(in_service(q2, q2.find("dbp:shortName")));
}

TEST_CASE("identity join without mapping") {
  const auto g = parse_turtle(R"(
@prefix void: <http://rdfs.org/ns/void#> .
@prefix voidext: <http://purl.org/query/voidext#> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix up: <http://purl.uniprot.org/core/> .
@prefix ex: <http://example.org/voidext#> .
ex:a a void:Dataset ; void:sparqlEndpoint <https://a.example.org/sparql> .
ex:b a void:Dataset ; void:sparqlEndpoint <https://b.example.org/sparql> .
ex:shared a voidext:SharedInstanceSet , voidext:SimpleLinkSet ; void:target ex:a , ex:b ;
    voidext:sharedInstanceType up:Taxon ; dcterms:issued "2020" .
)");
  const auto tuples = emit_tuples(g);
  REQUIRE(tuples.size() == 1);
  const auto q = scaffold(tuples[0], std::nullopt, std::nullopt);
  CAPTURE(q);
  CHECK(check_wellformed(q).empty());
  CHECK(q.find("BIND") == std::string::npos);
  CHECK(count(q, "?vlj_1 a up:Taxon") == 2);
}

TEST_CASE("same endpoint stays inline") {
  auto t = tuple_of("ebi_uniprot.ttl");
  t.ds2.endpoint = t.ds1.endpoint;
  const auto q = scaffold(t, std::nullopt, std::nullopt);
  CHECK(q.find("SERVICE") == std::string::npos);
  CHECK(check_wellformed(q).empty());
}

TEST_CASE("scaffold errors") {
  auto t = tuple_of("ebi_uniprot.ttl");
  const auto remote = read_fragment_file(fx::path("fragments/rodents_uniprot.rq"));
  CHECK_THROWS_AS(scaffold(t, remote, std::nullopt), ScaffoldError);

  auto reserved = read_fragment_file(fx::path("fragments/gleevec_ebi.rq"));
  reserved.pattern_text += "\n?assay cco:x ?vlj_1 .";
  CHECK_THROWS_AS(scaffold(t, reserved, std::nullopt), ScaffoldError);

  ScaffoldOptions elsewhere;
  elsewhere.at = "https://elsewhere.example.org/sparql";
  CHECK_THROWS_AS(scaffold(t, std::nullopt, std::nullopt, elsewhere), ScaffoldError);

  t.ds2.endpoint.reset();
  CHECK_THROWS_AS(scaffold(t, std::nullopt, std::nullopt), ScaffoldError);
}

TEST_CASE("colliding snippet variables are renamed") {
  auto t = tuple_of("ebi_uniprot.ttl");
  t.f_m->snippet = "?IRI_EBI up:mnemonic ?tmp .\nBIND(IRI(CONCAT(\"http://purl.uniprot.org/taxonomy/\", ?tmp)) AS ?IRI_UNIPROT)";
  auto local = read_fragment_file(fx::path("fragments/gleevec_ebi.rq"));
  local.pattern_text += "\n?assay cco:note ?tmp .";
  const auto sk = build_skeleton(t, local, std::nullopt);
  REQUIRE(sk.renaming.size() == 1);
  CHECK(sk.renaming.at("tmp") == "vlj_1");
  CHECK(sk.bridge.find("?vlj_1") != std::string::npos);
  CHECK(sk.bridge.find("?tmp") == std::string::npos);
  CHECK(check_wellformed(sk.to_string()).empty());
}

TEST_CASE("scaffold invariants over the fixture corpus") {
  const auto gleevec = read_fragment_file(fx::path("fragments/gleevec_ebi.rq"));
  const auto rodents = read_fragment_file(fx::path("fragments/rodents_uniprot.rq"));
  struct Run {
    std::string file;
    std::optional<std::string> at;
    std::optional<QueryFragment> local;
    std::optional<QueryFragment> remote;
  };
  std::vector<Run> runs{
      {"ebi_uniprot.ttl", std::nullopt, gleevec, rodents},
      {"ebi_uniprot.ttl", std::nullopt, gleevec, std::nullopt},
      {"ebi_uniprot.ttl", std::nullopt, std::nullopt, rodents},
      {"ebi_uniprot.ttl", UNIPROT, rodents, gleevec},
      {"ebi_uniprot.ttl", UNIPROT, std::nullopt, std::nullopt},
      {"lindas_dbpedia.ttl", std::nullopt, std::nullopt, std::nullopt},
      {"lindas_dbpedia.ttl", std::string("https://lindas-data.ch/sparql"), std::nullopt, std::nullopt},
      {"oma_uniprot.ttl", std::nullopt, std::nullopt, std::nullopt},
      {"oma_uniprot.ttl", std::string("https://sparql.uniprot.org/sparql"), std::nullopt, std::nullopt},
  };
  for (const auto& run : runs) {
    for (const auto side : {BridgeSide::Holder, BridgeSide::Local, BridgeSide::Remote}) {
      const auto t = tuple_of(run.file);
      ScaffoldOptions o;
      o.at = run.at;
      o.bridge_side = side;
      const auto sk = build_skeleton(t, run.local, run.remote, o);
      const auto q = sk.to_string();
      CAPTURE(q);
      CHECK(check_wellformed(q).empty());

      const auto out_lines = lines(q);
      auto present = [&](const std::string& l) {
        return std::find(out_lines.begin(), out_lines.end(), l) != out_lines.end();
      };
      for (const auto* f : {&run.local, &run.remote})
        if (*f)
          for (const auto& l : lines((*f)->pattern_text)) CHECK(present(l));

      if (t.f_m) {
        std::map<std::string, std::string> inverse;
        for (const auto& [from, to] : sk.renaming) inverse[to] = from;
        CHECK(normalize_sparql(rename_vars(sk.bridge, inverse)) == normalize_sparql(t.f_m->snippet));
      }

      const bool split = t.ds1.endpoint != t.ds2.endpoint;
      CHECK(sk.service_blocks.size() == (split ? 1u : 0u));
      if (run.local) {
        const auto first = lines(run.local->pattern_text).front();
        CHECK_FALSE(in_service(q, q.find(first)));
      }
      if (run.remote && split) {
        const auto first = lines(run.remote->pattern_text).front();
        CHECK(in_service(q, q.find(first)));
      }
    }
  }
}

TEST_CASE("rename_vars") {
  const auto t = tuple_of("ebi_uniprot.ttl");
  const auto& snippet = t.f_m->snippet;
  CHECK(rename_vars(snippet, {}) == snippet);

  const auto renamed = rename_vars(snippet, {{"IRI_EBI", "taxonEbi"}});
  CHECK(renamed.find("?IRI_EBI") == std::string::npos);
  CHECK(renamed.find("?taxonEbi") != std::string::npos);
  const auto before = tokenize_sparql(snippet);
  const auto after = tokenize_sparql(renamed);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i].kind == SparqlToken::Kind::Variable && before[i].variable_name() == "IRI_EBI")
      CHECK(after[i].text == "?taxonEbi");
    else
      CHECK(after[i].text == before[i].text);
  }

  CHECK(rename_vars("FILTER(?x = \"?x\" && $x != <http://e.org/?x>)", {{"x", "y"}}) ==
        "FILTER(?y = \"?x\" && $y != <http://e.org/?x>)");
  CHECK(rename_vars("?a ?b", {{"a", "b"}, {"b", "a"}}) == "?b ?a");
  CHECK_THROWS_AS(rename_vars("?a ?b", {{"a", "b"}}), ScaffoldError);
  CHECK_THROWS_AS(rename_vars("?a", {{"zz", "b"}}), ScaffoldError);
}

TEST_CASE("check_wellformed findings") {
  const std::string ok = "PREFIX up: <http://purl.uniprot.org/core/>\nSELECT * WHERE { ?t a up:Taxon . }";
  CHECK(check_wellformed(ok).empty());

  const std::string dangling = "SELECT * WHERE { ?s ?p ?o . { ?s ?p ?x . }";
  const auto d = check_wellformed(dangling);
  REQUIRE(d.size() == 1);
  CHECK(d[0].offset == dangling.find('{'));

  const auto undeclared = check_wellformed("SELECT * WHERE { ?a cco:hasAssay ?b . }");
  REQUIRE(undeclared.size() == 1);
  CHECK(undeclared[0].message.find("cco") != std::string::npos);

  CHECK(check_wellformed("PREFIX up: <http://purl.uniprot.org/core/>\nSELECT * WHERE { ?a ?b ?c }").size() == 1);
  CHECK(check_wellformed("SELECT * WHERE { SERVICE { ?a ?b ?c } }").size() == 1);
  CHECK(check_wellformed("SELECT * { ?a ?b \"open }").size() >= 1);
  CHECK_FALSE(check_wellformed("?a ?b ?c").empty());
  CHECK(check_wellformed("SELECT * WHERE { ?a ?b \"{ ( ?x\" }").empty());
}
