#include "bgp_oracle.hpp"
#include "legacy_oracle.hpp"
#include "support.hpp"

#include "voidext/canon.hpp"
#include "voidext/catalog.hpp"
#include "voidext/cli.hpp"
#include "voidext/endpoint.hpp"
#include "voidext/scaffold.hpp"
#include "voidext/validator.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sys/wait.h>

using namespace voidext;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string squash(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

std::pair<int, std::string> cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str() + err.str()};
}

VirtualLinkTuple only_tuple(const std::string& file) {
  const auto t = emit_tuples(fx::load(file));
  expect(t.size() == 1, file + " should hold one virtual link set");
  return t.front();
}

const std::string EBI_MAPPING = R"(?IRI_EBI a <http://www.biopax.org/release/biopax-level3.owl#BioSource>.
BIND(IRI(CONCAT("http://purl.uniprot.org/taxonomy/", STRAFTER(STR(?IRI_EBI), "http://identifiers.org/taxonomy/"))) as ?IRI_UNIPROT)
FILTER(STRSTARTS(STR(?IRI_EBI), "http://identifiers.org/taxonomy/")))";

std::string tuple_reproduction() {
  const auto [code, out] = cli({"catalog", "--json", fx::path("ebi_uniprot.ttl")});
  expect(code == 0, "catalog exit code " + std::to_string(code));
  const auto doc = nlohmann::json::parse(out);
  const auto& sets = doc.at("virtual_link_sets");
  expect(sets.size() == 1, "expected one virtual link set");
  const auto& s = sets.at(0);
  expect(s.at("types") == nlohmann::json::array({"biopax:BioSource", "up:Taxon"}), "types " + s.at("types").dump());
  expect(s.at("datasets").at(0).at("endpoint") == "https://www.ebi.ac.uk/rdf/services/sparql", "ds1 endpoint");
  expect(s.at("datasets").at(1).at("endpoint") == "https://sparql.uniprot.org/sparql/", "ds2 endpoint");
  const auto& m = s.at("mapping");
  expect(squash(m.at("snippet")) == squash(EBI_MAPPING), "mapping snippet differs");
  expect(m.at("input_var") == "IRI_EBI" && m.at("output_var") == "IRI_UNIPROT", "mapping variables");
  return "it1/it2, endpoints and f_m match";
}

std::string query_reproduction() {
  const auto q = scaffold(only_tuple("ebi_uniprot.ttl"), read_fragment_file(fx::path("fragments/gleevec_ebi.rq")),
                          read_fragment_file(fx::path("fragments/rodents_uniprot.rq")));
  expect(q.find("cco:hasMolecule chembl:CHEMBL941") != std::string::npos, "Gleevec pattern missing");
  expect(count(q, "SERVICE") == 1, "SERVICE count " + std::to_string(count(q, "SERVICE")));
  expect(q.find("SERVICE <https://sparql.uniprot.org/sparql/>") != std::string::npos, "SERVICE IRI");
  expect(q.find("CONCAT(") != std::string::npos && q.find("STRAFTER(") != std::string::npos, "bridge missing");
  const auto findings = check_wellformed(q);
  expect(findings.empty(), findings.empty() ? "" : findings.front().message);

  if (const char* live = std::getenv("VOIDEXT_NETWORK"); live && std::string(live) == "1") {
    HttpTransport http;
    RetryingTransport retrying(http, 2);
    const auto r = execute_select(retrying, "https://www.ebi.ac.uk/rdf/services/sparql", q, 60000);
    return "query structure ok, live endpoint returned " + std::to_string(r.rows.size()) + " rows";
  }
  return "query structure ok, live check off";
}

std::string mutant_suite() {
  const auto cases = fx::manifest("mutants/manifest.json");
  expect(cases.size() >= 12, "too few mutants");
  std::set<std::string> codes;
  for (const auto& c : cases) {
    const std::string file = c.at("file");
    const auto d = validate(fx::load("mutants/" + file));
    bool on_node = false;
    for (const auto& x : d) {
      if (x.severity != Severity::Error) continue;
      expect(to_string(x.code) == c.at("code"), file + ": unexpected " + to_string(x.code) + " " + x.message);
      on_node |= x.subject == c.at("node");
    }
    expect(on_node, file + ": no " + c.at("code").get<std::string>() + " on the seeded node");
    codes.insert(c.at("code"));
  }
  expect(codes.size() == 8, "codes C1..C8 not all covered");
  for (const auto& f : fx::canonical_fixtures()) expect(!has_errors(validate(fx::load(f))), f + " has errors");
  return std::to_string(cases.size()) + " mutants, 3 clean fixtures";
}

std::string legacy_canonicalization() {
  const auto m1 = fx::load("legacy/lindas_dbpedia_m1.ttl");
  const auto m2 = fx::load("legacy/lindas_dbpedia_m2.ttl");
  const auto c1 = import_legacy(m1).first;
  const auto c2 = import_legacy(m2).first;
  expect(isomorphic(c1, c2), "m1 and m2 differ after import");
  expect(isomorphic(import_legacy(c1).first, c1), "import is not idempotent");
  expect(oracle::canonical_facts(c1) == oracle::legacy_facts(m1), "m1 facts not conserved");
  expect(oracle::canonical_facts(c2) == oracle::legacy_facts(m2), "m2 facts not conserved");
  return "isomorphic, idempotent, facts conserved";
}

std::string bgp_oracle() {
  std::mt19937 rng(20190601);
  for (int i = 0; i < 1000; ++i) {
    const auto c = oracle::random_case(rng);
    const auto got = bgp_solve(c.graph, c.patterns);
    const auto want = oracle::brute_force(c.graph, c.patterns);
    expect(std::set<Binding>(got.begin(), got.end()) == want && got.size() == want.size(),
           "case " + std::to_string(i) + " differs");
  }
  return "1000 random cases agree";
}

std::string round_trip() {
  std::size_t n = 0;
  for (const auto& f : fx::all_turtle_fixtures()) {
    const auto g = fx::load(f);
    expect(isomorphic(parse_turtle(serialize_turtle(g)), g), f + " does not round-trip");
    const auto [code, once] = cli({"fmt", fx::path(f)});
    expect(code == 0, "fmt failed on " + f);
    expect(serialize_turtle(parse_turtle(once)) == once, "fmt not idempotent on " + f);
    ++n;
  }
  return std::to_string(n) + " fixtures";
}

std::string probe_determinism() {
  auto lindas = TranscriptTransport::load(fx::path("transcripts/lindas_dbpedia_26_of_26.json"));
  const auto a = probe_link_set(lindas, only_tuple("lindas_dbpedia.ttl"));
  expect(a.sampled == 26 && a.coverage && *a.coverage == 1.0, "canton coverage " + probe_report_json(a, -1));

  auto ebi = TranscriptTransport::load(fx::path("transcripts/ebi_uniprot_7_of_10.json"));
  ProbeOptions o;
  o.sample_limit = 10;
  o.batch_size = 4;
  o.parallel = 2;
  const auto b = probe_link_set(ebi, only_tuple("ebi_uniprot.ttl"), o);
  expect(b.sampled == 10 && b.coverage && *b.coverage == 0.7, "taxon coverage " + probe_report_json(b, -1));

  expect(assess_staleness("vl", std::nullopt, "2019-06", "2019-08").stale, "2019-06 vs 2019-08 not stale");
  return "1.0, 0.7, stale";
}

std::string full_suite() {
  std::ifstream list(VOIDEXT_SUITE);
  expect(bool(list), "suite list missing");
  std::string line;
  std::size_t n = 0;
  const auto start = Clock::now();
  while (std::getline(list, line)) {
    if (line.empty()) continue;
    const int status = std::system(("\"" + line + "\" > /dev/null 2>&1").c_str());
    expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, line + " failed");
    ++n;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  expect(ms < 60000, "suite took " + std::to_string(ms) + " ms");
  return std::to_string(n) + " test binaries";
}

} // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    long budget_ms;
    std::function<std::string()> run;
  };
  std::vector<Criterion> criteria{
      {1, "tuple reproduction", 1000, tuple_reproduction},
      {2, "federated query structure", 1000, query_reproduction},
      {3, "validator mutants", 2000, mutant_suite},
      {4, "legacy canonicalization", 1000, legacy_canonicalization},
      {5, "bgp oracle", 30000, bgp_oracle},
      {6, "round trip", 2000, round_trip},
      {7, "probe determinism", 1000, probe_determinism},
      {8, "offline suite", 60000, full_suite},
  };
  if (const char* net = std::getenv("VOIDEXT_NETWORK"); net && std::string(net) == "1")
    criteria[1].budget_ms = 120000;

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    if (ok && ms >= c.budget_ms) {
      ok = false;
      detail += ", over budget";
    }
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << detail << " (" << ms
              << " ms, budget " << c.budget_ms << " ms)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
