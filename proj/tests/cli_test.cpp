#include "support.hpp"

#include "voidext/cli.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <sstream>

using namespace voidext;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("voidext_cli_" + name)).string();
}

} // namespace

TEST_CASE("validate exit codes") {
  const auto good = cli({"validate", fx::path("ebi_uniprot.ttl")});
  CHECK(good.code == 0);
  CHECK(good.err.find("0 error(s)") != std::string::npos);

  const auto bad = cli({"validate", fx::path("mutants/c1_three_members.ttl")});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("C1") != std::string::npos);

  const auto broken = cli({"validate", fx::path("malformed/missing_dot.ttl")});
  CHECK(broken.code == 2);
  CHECK(broken.err.find("3:1") != std::string::npos);

  const auto json = cli({"validate", "--json", fx::path("mutants/c7_no_variables.ttl")});
  CHECK(json.code == 1);
  CHECK(json.out.find("\"C7\"") != std::string::npos);
  CHECK_NOTHROW((void)nlohmann::json::parse(json.out));
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"validate", "--nope", fx::path("ebi_uniprot.ttl")}).code == 2);
  CHECK(cli({"validate", "/no/such/file.ttl"}).code == 2);
  CHECK(cli({"probe", "--catalog", fx::path("ebi_uniprot.ttl"), "--link-set", "bioquery:EBI_UNIPROT_12",
             "--retries", "5"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("catalog output") {
  const auto text = cli({"catalog", fx::path("ebi_uniprot.ttl"), fx::path("oma_uniprot.ttl"),
                         fx::path("lindas_dbpedia.ttl")});
  CHECK(text.code == 0);
  const auto json = cli({"catalog", "--json", fx::path("ebi_uniprot.ttl")});
  CHECK(json.code == 0);
  CHECK(json.out.find("ComplexOfSharedInstanceSets") != std::string::npos);
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(json.out == cli({"catalog", "--json", fx::path("ebi_uniprot.ttl")}).out);
  CHECK(doc.dump().find("EBI_UNIPROT_12") != std::string::npos);
}

TEST_CASE("fmt is idempotent") {
  for (const auto& f : fx::canonical_fixtures()) {
    CAPTURE(f);
    const auto once = cli({"fmt", fx::path(f)});
    REQUIRE(once.code == 0);
    const auto path = tmp_file("fmt.ttl");
    {
      std::ofstream o(path, std::ios::binary);
      o << once.out;
    }
    CHECK(cli({"fmt", path}).out == once.out);
    std::remove(path.c_str());
  }
}

TEST_CASE("import-legacy writes canonical VoIDext") {
  const auto path = tmp_file("import.ttl");
  const auto r = cli({"import-legacy", fx::path("legacy/lindas_dbpedia_m1.ttl"), "-o", path});
  CHECK(r.code == 0);
  std::ifstream in(path, std::ios::binary);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(isomorphic(parse_turtle(written), fx::load("legacy/lindas_dbpedia_canonical.ttl")));
  CHECK(written == serialize_turtle(parse_turtle(written)));
  CHECK(cli({"validate", path}).code == 0);
  std::remove(path.c_str());

  const auto m2 = cli({"import-legacy", fx::path("legacy/lindas_dbpedia_m2.ttl")});
  CHECK(m2.code == 0);
  CHECK(m2.out == written);
}

TEST_CASE("scaffold and probe") {
  const auto q = cli({"scaffold", "--catalog", fx::path("ebi_uniprot.ttl"), "--link-set", "bioquery:EBI_UNIPROT_12",
                      "--local", fx::path("fragments/gleevec_ebi.rq"), "--remote",
                      fx::path("fragments/rodents_uniprot.rq")});
  CHECK(q.code == 0);
  CHECK(q.out.find("SERVICE <https://sparql.uniprot.org/sparql/>") != std::string::npos);

  const auto replay = cli({"probe", "--catalog", fx::path("lindas_dbpedia.ttl"), "--link-set", "ex:swiss_cantons",
                           "--replay", fx::path("transcripts/lindas_dbpedia_26_of_26.json"), "--reference-date",
                           "2019-08"});
  CHECK(replay.code == 0);
  CHECK(replay.out.find("stale: yes") != std::string::npos);

  const std::vector<std::string> low{"probe", "--catalog", fx::path("ebi_uniprot.ttl"), "--link-set",
                                     "bioquery:EBI_UNIPROT_12", "--replay",
                                     fx::path("transcripts/ebi_uniprot_7_of_10.json"), "--sample-limit", "10",
                                     "--batch-size", "4", "--parallel", "2", "--json"};
  const auto ok = cli(low);
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out).at("coverage") == 0.7);
  auto strict = low;
  strict.insert(strict.end(), {"--min-coverage", "0.8"});
  CHECK(cli(strict).code == 1);
}

TEST_CASE("the installed binary") {
  const auto out = tmp_file("spawn.txt");
  const std::string cmd = std::string("\"") + VOIDEXT_CLI + "\" validate \"" + fx::path("mutants/c1_one_member.ttl") +
                          "\" > \"" + out + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 1);
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("C1") != std::string::npos);
  std::remove(out.c_str());
}
