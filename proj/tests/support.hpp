#pragma once

#include "voidext/turtle.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fx {

inline std::string path(const std::string& rel) { return std::string(VOIDEXT_FIXTURES) + "/" + rel; }

inline std::string read(const std::string& rel) {
  std::ifstream in(path(rel), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline voidext::Graph load(const std::string& rel) { return voidext::parse_turtle_file(path(rel)); }

inline nlohmann::json manifest(const std::string& rel) { return nlohmann::json::parse(read(rel)); }

inline const std::vector<std::string>& canonical_fixtures() {
  static const std::vector<std::string> files{"lindas_dbpedia.ttl", "ebi_uniprot.ttl", "oma_uniprot.ttl"};
  return files;
}

inline const std::vector<std::string>& all_turtle_fixtures() {
  static const std::vector<std::string> files = [] {
    std::vector<std::string> v{"lindas_dbpedia.ttl",
                               "ebi_uniprot.ttl",
                               "oma_uniprot.ttl",
                               "legacy/lindas_dbpedia_m1.ttl",
                               "legacy/lindas_dbpedia_m2.ttl",
                               "legacy/lindas_dbpedia_canonical.ttl"};
    for (const auto& m : manifest("mutants/manifest.json")) v.push_back("mutants/" + m.at("file").get<std::string>());
    return v;
  }();
  return files;
}

inline voidext::Term iri(const std::string& s) { return voidext::Term::iri(s); }

inline const std::string EX = "http://example.org/voidext#";
inline const std::string BQ = "http://purl.org/query/bioquery#";

} // namespace fx
