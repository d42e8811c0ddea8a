#include "legacy_oracle.hpp"
#include "support.hpp"

#include "voidext/canon.hpp"
#include "voidext/validator.hpp"
#include "voidext/vocab.hpp"

#include <doctest.h>

using namespace voidext;
using oracle::canonical_facts;
using oracle::legacy_facts;
using oracle::t;

namespace {

const std::string PFX = R"(
@prefix void: <http://rdfs.org/ns/void#> .
@prefix voidext: <http://purl.org/query/voidext#> .
@prefix ex: <http://example.org/voidext#> .
)";

} // namespace

TEST_CASE("detect_legacy_pattern") {
  const auto m1 = fx::load("legacy/lindas_dbpedia_m1.ttl");
  CHECK(detect_legacy_pattern(m1, fx::iri(fx::EX + "dbpedia_canton_ls")) == LegacyPattern::VL_m1);
  CHECK(detect_legacy_pattern(m1, fx::iri(fx::EX + "lindas_canton_ls")) == LegacyPattern::VL_m1);

  const auto m2 = fx::load("legacy/lindas_dbpedia_m2.ttl");
  CHECK(detect_legacy_pattern(m2, fx::iri(fx::EX + "dbpedia_canton_ls")) == LegacyPattern::VL_m2);

  const auto canonical = fx::load("lindas_dbpedia.ttl");
  CHECK(detect_legacy_pattern(canonical, fx::iri(fx::EX + "lindas_canton_ls")) == LegacyPattern::Canonical);

  const auto oma = fx::load("oma_uniprot.ttl");
  CHECK(detect_legacy_pattern(oma, fx::iri(fx::EX + "oma_uniprot_xref")) == LegacyPattern::Unknown);

  const auto ambiguous = parse_turtle(PFX + R"(
ex:ls a void:Linkset ; void:linkPredicate ex:p ; void:objectsTarget ex:d .
ex:d a void:Dataset ; void:propertyPartition [ void:property ex:a ] , [ void:property ex:b ] .
)");
  try {
    detect_legacy_pattern(ambiguous, fx::iri(fx::EX + "ls"));
    FAIL("expected ambiguity error");
  } catch (const CanonError& e) {
    CHECK(e.node() == fx::EX + "d");
  }
  CHECK_THROWS_AS(import_legacy(ambiguous), CanonError);
}

TEST_CASE("VL_m1 and VL_m2 converge on the expected canonical graph") {
  const auto expected = fx::load("legacy/lindas_dbpedia_canonical.ttl");
  const auto [g1, r1] = import_legacy(fx::load("legacy/lindas_dbpedia_m1.ttl"));
  const auto [g2, r2] = import_legacy(fx::load("legacy/lindas_dbpedia_m2.ttl"));
  CHECK(isomorphic(g1, expected));
  CHECK(isomorphic(g2, expected));
  CHECK(isomorphic(g1, g2));

  REQUIRE(r1.rewrites.size() == 2);
  for (const auto& rw : r1.rewrites) CHECK(rw.pattern == LegacyPattern::VL_m1);
  REQUIRE(r2.rewrites.size() == 2);
  std::set<std::string> nodes;
  for (const auto& rw : r2.rewrites) {
    CHECK(rw.pattern == LegacyPattern::VL_m2);
    nodes.insert(rw.node);
  }
  CHECK(nodes.size() == 2);
}

TEST_CASE("import is idempotent") {
  for (const auto& f : {"legacy/lindas_dbpedia_m1.ttl", "legacy/lindas_dbpedia_m2.ttl", "lindas_dbpedia.ttl",
                        "ebi_uniprot.ttl", "oma_uniprot.ttl"}) {
    CAPTURE(f);
    const auto once = import_legacy(fx::load(f)).first;
    const auto [twice, report] = import_legacy(once);
    CHECK(isomorphic(once, twice));
    for (const auto& rw : report.rewrites) CHECK(rw.pattern == LegacyPattern::Canonical);
  }
  const auto canonical = fx::load("lindas_dbpedia.ttl");
  const auto [same, report] = import_legacy(canonical);
  CHECK(isomorphic(same, canonical));
  REQUIRE(report.rewrites.size() == 2);
  for (const auto& rw : report.rewrites) CHECK(to_string(rw.pattern) == "already-canonical");
}

TEST_CASE("conservation of link facts") {
  for (const auto& f : {"legacy/lindas_dbpedia_m1.ttl", "legacy/lindas_dbpedia_m2.ttl"}) {
    CAPTURE(f);
    const auto legacy = fx::load(f);
    const auto facts = legacy_facts(legacy);
    CHECK(facts.size() == 2);
    CHECK(canonical_facts(import_legacy(legacy).first) == facts);
  }
}

TEST_CASE("imported graphs validate") {
  for (const auto& f : {"legacy/lindas_dbpedia_m1.ttl", "legacy/lindas_dbpedia_m2.ttl"}) {
    CAPTURE(f);
    CHECK_FALSE(has_errors(validate(import_legacy(fx::load(f)).first)));
  }
}

TEST_CASE("non-link triples pass through") {
  auto legacy = fx::load("legacy/lindas_dbpedia_m1.ttl");
  legacy.insert(fx::iri(fx::EX + "lindas"), fx::iri("http://purl.org/dc/terms/publisher"), Term::literal("FSO"));
  const auto out = import_legacy(legacy).first;
  CHECK(out.has(fx::iri(fx::EX + "lindas"), fx::iri("http://purl.org/dc/terms/publisher"), Term::literal("FSO")));
  for (const auto& d : extract_datasets(fx::load("legacy/lindas_dbpedia_canonical.ttl"))) {
    const auto got = extract_datasets(out);
    CHECK(std::find(got.begin(), got.end(), d) != got.end());
  }
}

TEST_CASE("mint base and both-sided mappings") {
  const auto both = parse_turtle(PFX + R"ttl(
ex:a a void:Linkset ; void:linkPredicate ex:p ; void:subjectsTarget ex:b ;
    voidext:resourceMapping "BIND(STR(?x) AS ?y)" .
ex:b a void:Linkset ; void:linkPredicate ex:q ; void:subjectsTarget ex:a ;
    voidext:resourceMapping "BIND(STR(?y) AS ?x)" .
)ttl");
  CanonOptions o;
  o.mint_base = "http://data.example.com/sets";
  const auto [g, report] = import_legacy(both, o);
  const auto cls = extract_complex_link_sets(g);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].iri == "http://data.example.com/sets#vls-1");
  CHECK(cls[0].intersection_type == IntersectionType::SubjectSubject);
  CHECK_FALSE(cls[0].recommended_mapping.has_value());
  CHECK(report.warnings.size() == 1);
}

TEST_CASE("serialize_descriptors") {
  CHECK(serialize_descriptors(DescriptorSet{}, PrefixMap{}).empty());

  const auto ebi = extract_all(fx::load("ebi_uniprot.ttl"));
  const auto g = serialize_descriptors(ebi, PrefixMap{});
  CHECK(g.objects(fx::iri(fx::BQ + "EBI_UNIPROT_12"), fx::iri(vocab::intersectAt)).size() == 2);
  CHECK(g.objects(fx::iri(fx::BQ + "EBI_UNIPROT_12"), fx::iri(vocab::recommendedMapping)).size() == 1);
  CHECK(isomorphic(g, fx::load("ebi_uniprot.ttl")));
}
