#include "voidext/cli.hpp"

#include "voidext/canon.hpp"
#include "voidext/catalog.hpp"
#include "voidext/endpoint.hpp"
#include "voidext/scaffold.hpp"
#include "voidext/turtle.hpp"
#include "voidext/validator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace voidext {

namespace {

enum Exit { Ok = 0, DomainError = 1, UsageError = 2, TransportFailure = 3 };

struct Failure {
  int code;
  std::string message;
};

Graph load_graph(const std::vector<std::string>& files) {
  Graph merged;
  for (const auto& f : files) {
    try {
      merged.merge(parse_turtle_file(f));
    } catch (const TurtleError& e) {
      throw Failure{UsageError, f + ":" + e.diagnostic().to_string()};
    } catch (const std::exception& e) {
      throw Failure{UsageError, f + ": " + e.what()};
    }
  }
  return merged;
}

PrefixMap display_prefixes(const Graph& g) {
  PrefixMap p = vocab::standard_prefixes();
  p.merge(g.prefixes());
  return p;
}

std::string expand_iri(const std::string& text, const PrefixMap& prefixes) {
  if (text.size() > 2 && text.front() == '<' && text.back() == '>') return text.substr(1, text.size() - 2);
  if (text.find("://") != std::string::npos) return text;
  try {
    return prefixes.expand(text);
  } catch (const RdfError& e) {
    throw Failure{UsageError, "cannot resolve " + text + ": " + e.what()};
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{UsageError, "cannot write " + path};
  f << text;
}

std::string paint(const std::string& s, const char* code, bool color) {
  return color ? std::string("\x1b[") + code + "m" + s + "\x1b[0m" : s;
}

VirtualLinkTuple find_tuple(const Graph& g, const std::string& link_set, std::ostream& err) {
  const auto iri = expand_iri(link_set, display_prefixes(g));
  std::vector<std::string> warnings;
  const auto tuples = emit_tuples(g, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  for (const auto& t : tuples)
    if (t.vl == iri) return t;
  throw Failure{DomainError, "no virtual link set " + iri + " in the catalog"};
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& files, bool as_json, std::ostream& out, std::ostream& err,
                 bool color) {
  const auto diags = validate(load_graph(files));
  std::size_t errors = 0;
  for (const auto& d : diags) errors += d.severity == Severity::Error ? 1 : 0;
  if (as_json) {
    nlohmann::ordered_json j;
    j["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : diags)
      j["diagnostics"].push_back(
          {{"code", to_string(d.code)}, {"subject", d.subject}, {"severity", to_string(d.severity)}, {"message", d.message}});
    j["errors"] = errors;
    j["warnings"] = diags.size() - errors;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& d : diags) {
      const auto sev = to_string(d.severity);
      out << to_string(d.code) << " " << paint(sev, d.severity == Severity::Error ? "31" : "33", color) << " <"
          << d.subject << "> " << d.message << "\n";
    }
    err << errors << " error(s), " << diags.size() - errors << " warning(s)\n";
  }
  return errors > 0 ? DomainError : Ok;
}

int cmd_catalog(const std::vector<std::string>& files, bool as_json, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(files);
  const auto diags = validate(g);
  if (has_errors(diags)) {
    for (const auto& d : diags)
      if (d.severity == Severity::Error) err << to_string(d.code) << " <" << d.subject << "> " << d.message << "\n";
    return DomainError;
  }
  std::vector<std::string> warnings;
  const auto tuples = emit_tuples(g, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  const auto prefixes = display_prefixes(g);
  if (as_json) {
    out << catalog_json(tuples, prefixes) << "\n";
    return Ok;
  }
  auto opt = [](const std::optional<std::string>& s) { return s ? *s : std::string("-"); };
  for (const auto& t : tuples) {
    out << "<" << t.vl << "> " << to_string(t.kind) << "\n";
    for (int side : {1, 2}) {
      const auto& ds = t.dataset(side);
      const auto& it = t.instance_type(side);
      out << "  ds" << side << ": " << opt(ds.title) << " <" << opt(ds.endpoint) << "> "
          << (it ? it->to_string(prefixes) : "-") << "\n";
    }
    out << "  join: " << to_string(t.join) << "\n";
    if (t.f_m)
      out << "  mapping: ?" << t.f_m->input_var << " -> ?" << t.f_m->output_var << " (side " << t.holder_side << ")\n";
  }
  return Ok;
}

struct ScaffoldArgs {
  std::vector<std::string> catalog;
  std::string link_set;
  std::string at;
  std::string local;
  std::string remote;
  std::string bridge_side = "holder";
  std::string output;
};

int cmd_scaffold(const ScaffoldArgs& a, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(a.catalog);
  const auto tuple = find_tuple(g, a.link_set, err);
  ScaffoldOptions options;
  if (!a.at.empty()) options.at = expand_iri(a.at, display_prefixes(g));
  options.bridge_side = a.bridge_side == "local"    ? BridgeSide::Local
                        : a.bridge_side == "remote" ? BridgeSide::Remote
                                                    : BridgeSide::Holder;
  options.prefixes = g.prefixes();
  std::optional<QueryFragment> local;
  std::optional<QueryFragment> remote;
  try {
    if (!a.local.empty()) local = read_fragment_file(a.local);
    if (!a.remote.empty()) remote = read_fragment_file(a.remote);
  } catch (const ScaffoldError& e) {
    throw Failure{UsageError, e.what()};
  }
  const auto query = scaffold(tuple, local, remote, options);
  for (const auto& f : check_wellformed(query)) err << "warning: offset " << f.offset << ": " << f.message << "\n";
  write_output(a.output, query, out);
  return Ok;
}

int cmd_import(const std::vector<std::string>& files, const std::string& output, const std::string& mint_base,
               bool as_json, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(files);
  CanonOptions options;
  if (!mint_base.empty()) options.mint_base = mint_base;
  auto [canon, report] = import_legacy(g, options);
  for (const auto& label : {"voidext", "owl", "void"})
    if (!canon.prefixes().contains(label)) canon.prefixes().set(label, *vocab::standard_prefixes().find(label));
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";

  std::ostream& report_out = output.empty() ? err : out;
  if (as_json) {
    nlohmann::ordered_json j;
    j["rewrites"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rewrites)
      j["rewrites"].push_back({{"node", r.node}, {"pattern", to_string(r.pattern)}, {"notes", r.notes}});
    j["warnings"] = report.warnings;
    report_out << j.dump(2) << "\n";
  } else {
    for (const auto& r : report.rewrites)
      report_out << to_string(r.pattern) << " <" << r.node << ">" << (r.notes.empty() ? "" : " " + r.notes) << "\n";
  }
  write_output(output, serialize_turtle(canon), out);
  return Ok;
}

struct ProbeArgs {
  std::vector<std::string> catalog;
  std::string link_set;
  std::string replay;
  std::string record;
  int retries = 0;
  double min_coverage = 0.0;
  std::string reference_date;
  long timeout_ms = 30000;
  std::size_t parallel = 4;
  std::size_t sample_limit = 100;
  std::size_t batch_size = 50;
  bool json = false;
};

int cmd_probe(const ProbeArgs& a, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(a.catalog);
  const auto tuple = find_tuple(g, a.link_set, err);

  std::unique_ptr<Transport> base;
  if (!a.replay.empty()) {
    try {
      base = std::make_unique<TranscriptTransport>(TranscriptTransport::load(a.replay));
    } catch (const TransportError& e) {
      throw Failure{UsageError, e.what()};
    }
  } else {
    base = std::make_unique<HttpTransport>();
  }
  Transport* transport = base.get();
  std::unique_ptr<RetryingTransport> retrying;
  if (a.retries > 0) {
    retrying = std::make_unique<RetryingTransport>(*transport, a.retries);
    transport = retrying.get();
  }
  std::unique_ptr<RecordingTransport> recording;
  if (!a.record.empty()) {
    recording = std::make_unique<RecordingTransport>(*transport);
    transport = recording.get();
  }

  ProbeOptions options;
  options.sample_limit = a.sample_limit;
  options.batch_size = a.batch_size;
  options.parallel = a.parallel;
  options.timeout_ms = a.timeout_ms;
  options.prefixes = g.prefixes();
  ProbeReport report;
  try {
    report = probe_link_set(*transport, tuple, options);
  } catch (const std::invalid_argument& e) {
    throw Failure{UsageError, e.what()};
  } catch (const TransportError& e) {
    throw Failure{TransportFailure, e.what()};
  }
  if (recording) recording->save(a.record);

  std::optional<StalenessVerdict> verdict;
  if (!a.reference_date.empty()) {
    try {
      verdict = assess_staleness(tuple.vl, tuple.issued, tuple.modified, a.reference_date);
    } catch (const StalenessError& e) {
      err << "warning: " << e.what() << "\n";
    }
  }

  if (a.json) {
    auto j = nlohmann::ordered_json::parse(probe_report_json(report));
    if (verdict)
      j["staleness"] = {{"metadata_date", verdict->metadata_date.to_string()},
                        {"reference_date", verdict->reference_date.to_string()},
                        {"stale", verdict->stale}};
    out << j.dump(2) << "\n";
  } else {
    out << "link set: <" << report.link_set << ">\n";
    out << "sampled: " << report.sampled << "\nmatched: " << report.matched << "\n";
    out << "coverage: " << (report.coverage ? std::to_string(*report.coverage) : std::string("undefined"))
        << " (directional, lower-bound proxy)\n";
    out << "elapsed_ms: " << report.elapsed_ms << "\n";
    if (verdict)
      out << "stale: " << (verdict->stale ? "yes" : "no") << " (metadata " << verdict->metadata_date.to_string()
          << ", reference " << verdict->reference_date.to_string() << ")\n";
  }
  for (const auto& e : report.errors) err << "error: " << e << "\n";

  if (!report.coverage) return report.errors.empty() ? Ok : TransportFailure;
  if (*report.coverage < a.min_coverage) return DomainError;
  return Ok;
}

int cmd_fmt(const std::string& file, std::ostream& out) {
  const auto g = load_graph({file});
  out << serialize_turtle(g);
  return Ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"VoIDext virtual link set toolkit", "voidext"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  bool as_json = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check VoIDext constraints");
  validate_cmd->add_option("files", files, "Turtle files")->required()->check(CLI::ExistingFile);
  validate_cmd->add_flag("--json", as_json, "JSON output");

  auto* catalog_cmd = app.add_subcommand("catalog", "Classify virtual link sets and list their tuples");
  catalog_cmd->add_option("files", files, "Turtle files")->required()->check(CLI::ExistingFile);
  catalog_cmd->add_flag("--json", as_json, "JSON output");

  ScaffoldArgs sa;
  auto* scaffold_cmd = app.add_subcommand("scaffold", "Draft a federated query for a virtual link set");
  scaffold_cmd->add_option("--catalog", sa.catalog, "Turtle metadata")->required()->check(CLI::ExistingFile);
  scaffold_cmd->add_option("--link-set", sa.link_set, "Virtual link set IRI or prefixed name")->required();
  scaffold_cmd->add_option("--at", sa.at, "Execution endpoint");
  scaffold_cmd->add_option("--local", sa.local, "Fragment for the execution endpoint")->check(CLI::ExistingFile);
  scaffold_cmd->add_option("--remote", sa.remote, "Fragment for the other endpoint")->check(CLI::ExistingFile);
  scaffold_cmd->add_option("--bridge-side", sa.bridge_side, "Where the mapping goes")
      ->check(CLI::IsMember({"holder", "local", "remote"}));
  scaffold_cmd->add_option("-o,--output", sa.output, "Output file");

  std::string output;
  std::string mint_base;
  auto* import_cmd = app.add_subcommand("import-legacy", "Rewrite VoID-only virtual links as VoIDext");
  import_cmd->add_option("files", files, "Turtle files")->required()->check(CLI::ExistingFile);
  import_cmd->add_option("-o,--output", output, "Output Turtle file");
  import_cmd->add_option("--mint-base", mint_base, "Base IRI for minted complex link sets");
  import_cmd->add_flag("--json", as_json, "JSON report");

  ProbeArgs pa;
  auto* probe_cmd = app.add_subcommand("probe", "Sample a virtual link set against its endpoints");
  probe_cmd->add_option("--catalog", pa.catalog, "Turtle metadata")->required()->check(CLI::ExistingFile);
  probe_cmd->add_option("--link-set", pa.link_set, "Virtual link set IRI or prefixed name")->required();
  probe_cmd->add_option("--replay", pa.replay, "Replay a recorded transcript")->check(CLI::ExistingFile);
  probe_cmd->add_option("--record", pa.record, "Record the exchanges to a transcript");
  probe_cmd->add_option("--retries", pa.retries, "Retries per request")->check(CLI::Range(0, 2));
  probe_cmd->add_option("--min-coverage", pa.min_coverage, "Fail below this coverage")->check(CLI::Range(0.0, 1.0));
  probe_cmd->add_option("--reference-date", pa.reference_date, "Compare metadata dates against this date");
  probe_cmd->add_option("--timeout-ms", pa.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  probe_cmd->add_option("--parallel", pa.parallel, "Concurrent requests")->check(CLI::Range(1, 64));
  probe_cmd->add_option("--sample-limit", pa.sample_limit, "Source resources to sample");
  probe_cmd->add_option("--batch-size", pa.batch_size, "Mapped resources per VALUES batch")->check(CLI::PositiveNumber);
  probe_cmd->add_flag("--json", pa.json, "JSON output");

  std::string fmt_file;
  auto* fmt_cmd = app.add_subcommand("fmt", "Print the canonical serialization");
  fmt_cmd->add_option("file", fmt_file, "Turtle file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return Ok;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return UsageError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(files, as_json, out, err, color);
    if (catalog_cmd->parsed()) return cmd_catalog(files, as_json, out, err);
    if (scaffold_cmd->parsed()) return cmd_scaffold(sa, out, err);
    if (import_cmd->parsed()) return cmd_import(files, output, mint_base, as_json, out, err);
    if (probe_cmd->parsed()) return cmd_probe(pa, out, err);
    if (fmt_cmd->parsed()) return cmd_fmt(fmt_file, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    return TransportFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return DomainError;
  }
  return UsageError;
}

} // namespace voidext
