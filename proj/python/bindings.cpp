#include "voidext/canon.hpp"
#include "voidext/catalog.hpp"
#include "voidext/endpoint.hpp"
#include "voidext/scaffold.hpp"
#include "voidext/turtle.hpp"
#include "voidext/validator.hpp"
#include "voidext/vocab.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace voidext;

namespace {

PrefixMap display_prefixes(const Graph& g) {
  PrefixMap p = vocab::standard_prefixes();
  p.merge(g.prefixes());
  return p;
}

std::string expand(const std::string& text, const Graph& g) {
  if (text.size() > 2 && text.front() == '<' && text.back() == '>') return text.substr(1, text.size() - 2);
  if (text.find("://") != std::string::npos) return text;
  return display_prefixes(g).expand(text);
}

VirtualLinkTuple find_tuple(const Graph& g, const std::string& link_set) {
  const auto iri = expand(link_set, g);
  for (auto& t : emit_tuples(g))
    if (t.vl == iri) return t;
  throw py::key_error("no virtual link set " + iri);
}

py::dict diagnostic_dict(const Diagnostic& d) {
  py::dict out;
  out["code"] = to_string(d.code);
  out["subject"] = d.subject;
  out["severity"] = to_string(d.severity);
  out["message"] = d.message;
  return out;
}

} // namespace

PYBIND11_MODULE(voidext, m) {
  m.doc() = "VoIDext metadata tooling";

  static py::exception<TurtleError> turtle_error(m, "TurtleError", PyExc_ValueError);
  py::register_exception<ScaffoldError>(m, "ScaffoldError", PyExc_ValueError);
  py::register_exception<MappingSyntaxError>(m, "MappingSyntaxError", PyExc_ValueError);
  py::register_exception<StalenessError>(m, "StalenessError", PyExc_ValueError);
  py::register_exception<TransportError>(m, "TransportError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TurtleError& e) {
      PyErr_SetObject(turtle_error.ptr(), py::make_tuple(e.what(), e.diagnostic().line, e.diagnostic().column).ptr());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def(py::init([](const std::string& text) { return parse_turtle(text); }), py::arg("turtle") = "")
      .def_static("load", &parse_turtle_file)
      .def("__len__", &Graph::size)
      .def("serialize", [](const Graph& g) { return serialize_turtle(g); })
      .def("isomorphic", [](const Graph& a, const Graph& b) { return isomorphic(a, b); });

  m.def("fmt", [](const std::string& text) { return serialize_turtle(parse_turtle(text)); }, py::arg("turtle"));

  m.def(
      "validate",
      [](const std::string& text) {
        py::list out;
        for (const auto& d : validate(parse_turtle(text))) out.append(diagnostic_dict(d));
        return out;
      },
      py::arg("turtle"));

  m.def(
      "catalog_json",
      [](const std::string& text) {
        const auto g = parse_turtle(text);
        return catalog_json(emit_tuples(g), display_prefixes(g));
      },
      py::arg("turtle"));

  m.def(
      "scaffold",
      [](const std::string& text, const std::string& link_set, std::optional<std::string> local,
         std::optional<std::string> remote, std::optional<std::string> at) {
        const auto g = parse_turtle(text);
        ScaffoldOptions o;
        o.prefixes = g.prefixes();
        if (at) o.at = expand(*at, g);
        auto frag = [](const std::optional<std::string>& s) {
          return s ? std::optional<QueryFragment>(parse_fragment(*s)) : std::nullopt;
        };
        return scaffold(find_tuple(g, link_set), frag(local), frag(remote), o);
      },
      py::arg("turtle"), py::arg("link_set"), py::arg("local") = py::none(), py::arg("remote") = py::none(),
      py::arg("at") = py::none());

  m.def(
      "import_legacy",
      [](const std::string& text, const std::string& mint_base) {
        CanonOptions o;
        o.mint_base = mint_base;
        auto [g, report] = import_legacy(parse_turtle(text), o);
        return py::make_tuple(serialize_turtle(g), report.warnings);
      },
      py::arg("turtle"), py::arg("mint_base") = CanonOptions{}.mint_base);

  m.def(
      "check_wellformed",
      [](const std::string& query) {
        std::vector<std::pair<std::size_t, std::string>> out;
        for (const auto& f : check_wellformed(query)) out.emplace_back(f.offset, f.message);
        return out;
      },
      py::arg("query"));

  m.def("rename_vars", [](const std::string& s, const std::map<std::string, std::string>& r) { return rename_vars(s, r); },
        py::arg("snippet"), py::arg("renaming"));

  m.def(
      "parse_mapping",
      [](const std::string& snippet) {
        const auto f = parse_mapping(snippet);
        return py::make_tuple(f.input_var, f.output_var);
      },
      py::arg("snippet"));

  m.def(
      "assess_staleness",
      [](std::optional<std::string> issued, std::optional<std::string> modified, const std::string& reference) {
        return assess_staleness("", issued, modified, reference).stale;
      },
      py::arg("issued"), py::arg("modified"), py::arg("reference"));

  m.def(
      "probe_replay",
      [](const std::string& text, const std::string& link_set, const std::string& transcript, std::size_t sample_limit,
         std::size_t batch_size, std::size_t parallel) {
        const auto g = parse_turtle(text);
        const auto tuple = find_tuple(g, link_set);
        auto tt = TranscriptTransport::from_json(transcript);
        ProbeOptions o;
        o.sample_limit = sample_limit;
        o.batch_size = batch_size;
        o.parallel = parallel;
        ProbeReport r;
        {
          py::gil_scoped_release release;
          r = probe_link_set(tt, tuple, o);
        }
        return probe_report_json(r);
      },
      py::arg("turtle"), py::arg("link_set"), py::arg("transcript"), py::arg("sample_limit") = 100,
      py::arg("batch_size") = 50, py::arg("parallel") = 4);
}
