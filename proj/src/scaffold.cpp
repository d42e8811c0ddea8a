#include "voidext/scaffold.hpp"

#include "voidext/sparql_lexer.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace voidext {

namespace {

constexpr std::string_view reserved_prefix = "vlj_";

std::string trim_left(std::string_view s) {
  const auto p = s.find_first_not_of(" \t\r");
  return p == std::string_view::npos ? std::string() : std::string(s.substr(p));
}

std::string trim(std::string_view s) {
  auto out = trim_left(s);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\r')) out.pop_back();
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    auto t = trim(line);
    if (!t.empty()) out.push_back(trim_left(line));
  }
  return out;
}

std::vector<std::string> variables(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize_sparql(text)) {
    if (t.kind != SparqlToken::Kind::Variable) continue;
    std::string name(t.variable_name());
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
  }
  return out;
}

void check_fragment(const QueryFragment& f, const char* side) {
  const auto vars = variables(f.pattern_text);
  for (const auto& v : vars)
    if (v.rfind(reserved_prefix, 0) == 0)
      throw ScaffoldError(std::string(side) + " fragment uses reserved variable ?" + v);
  for (const auto& v : f.exposed_vars)
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw ScaffoldError(std::string(side) + " fragment exposes ?" + v + " but never uses it");
  for (const auto& finding : check_wellformed("SELECT * WHERE {" + f.pattern_text + "\n}"))
    if (finding.message.find("prefix") == std::string::npos)
      throw ScaffoldError(std::string(side) + " fragment: " + finding.message);
}

std::string iri_text(const std::string& iri, const PrefixMap& prefixes) {
  if (auto p = prefixes.compact(iri)) return *p;
  return "<" + iri + ">";
}

std::string type_pattern(const ClassExpression& e, const std::string& var, const PrefixMap& prefixes) {
  switch (e.kind) {
  case ClassExpression::Kind::Named:
    return "?" + var + " a " + iri_text(e.iri, prefixes) + " .";
  case ClassExpression::Kind::LiteralRange:
    if (e.iri == vocab::Literal) return "FILTER(isLiteral(?" + var + "))";
    return "FILTER(datatype(?" + var + ") = " + iri_text(e.iri, prefixes) + ")";
  case ClassExpression::Kind::Intersection: {
    std::string out;
    for (const auto& op : e.operands) out += (out.empty() ? "" : "\n") + type_pattern(op, var, prefixes);
    return out;
  }
  case ClassExpression::Kind::Union:
    break;
  }
  std::string out;
  for (const auto& op : e.operands) {
    std::string inner = type_pattern(op, var, prefixes);
    std::replace(inner.begin(), inner.end(), '\n', ' ');
    out += (out.empty() ? "{ " : " UNION { ") + inner + " }";
  }
  return out;
}

std::string fresh_name(std::size_t& fresh) { return std::string(reserved_prefix) + std::to_string(fresh++); }

std::string indent_lines(const std::vector<std::string>& lines, std::size_t width) {
  std::string out;
  for (const auto& l : lines) out += std::string(width, ' ') + l + "\n";
  return out;
}

} // namespace

QueryFragment parse_fragment(std::string_view text) {
  QueryFragment f;
  bool have_vars = false;
  std::string body;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    const auto t = trim(line);
    if (t.rfind("# endpoint:", 0) == 0) {
      auto v = trim(std::string_view(t).substr(11));
      if (v.size() >= 2 && v.front() == '<' && v.back() == '>') v = v.substr(1, v.size() - 2);
      f.dataset_endpoint = v;
    } else if (t.rfind("# vars:", 0) == 0) {
      have_vars = true;
      std::istringstream vs(t.substr(7));
      for (std::string v; vs >> v;) {
        if (!v.empty() && (v.front() == '?' || v.front() == '$')) v.erase(0, 1);
        if (!v.empty()) f.exposed_vars.push_back(v);
      }
    } else {
      body += line + "\n";
    }
  }
  f.pattern_text = body;
  const auto used = variables(body);
  if (!have_vars) f.exposed_vars = used;
  for (const auto& v : f.exposed_vars)
    if (std::find(used.begin(), used.end(), v) == used.end())
      throw ScaffoldError("fragment exposes ?" + v + " but never uses it");
  std::string open;
  for (const auto& tok : tokenize_sparql(body)) {
    if (!tok.terminated) throw ScaffoldError("unterminated token at offset " + std::to_string(tok.offset));
    if (tok.kind != SparqlToken::Kind::Punct) continue;
    const char c = tok.text.front();
    if (c == '{' || c == '(' || c == '[') open += c;
    if (c == '}' || c == ')' || c == ']') {
      const char want = c == '}' ? '{' : c == ')' ? '(' : '[';
      if (open.empty() || open.back() != want) throw ScaffoldError(std::string("unbalanced '") + c + "' in fragment");
      open.pop_back();
    }
  }
  if (!open.empty()) throw ScaffoldError(std::string("unclosed '") + open.back() + "' in fragment");
  return f;
}

QueryFragment read_fragment_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScaffoldError("cannot read fragment file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fragment(ss.str());
}

std::string side_pattern(const VirtualLinkTuple& t, int side, const std::string& var, const PrefixMap& prefixes,
                         std::size_t& fresh) {
  const auto& type = t.instance_type(side);
  auto typed = [&](const std::string& v) { return type ? type_pattern(*type, v, prefixes) : std::string(); };
  auto join = [](const std::string& a, const std::string& b) { return a.empty() ? b : b.empty() ? a : a + "\n" + b; };

  const bool link_set_side =
      t.link_predicates && (t.kind == VirtualLinkKind::ComplexOfLinkSets ||
                            (t.kind == VirtualLinkKind::SimpleLinkSet && side == 1));
  if (!link_set_side) {
    const auto p = typed(var);
    if (!p.empty()) return p;
    const auto a = fresh_name(fresh);
    const auto b = fresh_name(fresh);
    return "?" + var + " ?" + a + " ?" + b + " .";
  }
  const auto& lp = side == 1 ? t.link_predicates->first : t.link_predicates->second;
  const bool object_position = t.kind == VirtualLinkKind::SimpleLinkSet ||
                               t.join == IntersectionType::ObjectObject ||
                               (t.join == IntersectionType::SubjectObject && side == 2);
  if (!object_position) return join(typed(var), "?" + var + " " + iri_text(lp, prefixes) + " ?" + fresh_name(fresh) + " .");
  const auto subject = fresh_name(fresh);
  return join(typed(subject), "?" + subject + " " + iri_text(lp, prefixes) + " ?" + var + " .");
}

std::string prologue_for(std::string_view body, const PrefixMap& available) {
  std::set<std::string> used;
  for (const auto& t : tokenize_sparql(body))
    if (t.kind == SparqlToken::Kind::PrefixedName) used.insert(std::string(t.prefix_label()));
  std::string out;
  for (const auto& label : used) {
    const auto ns = available.find(label);
    if (!ns) throw ScaffoldError("no namespace known for prefix " + label + ":");
    out += "PREFIX " + label + ": <" + *ns + ">\n";
  }
  return out;
}

std::string FederatedQuerySkeleton::to_string() const {
  std::string out;
  for (const auto& [label, ns] : prologue.entries()) out += "PREFIX " + label + ": <" + ns + ">\n";
  out += "SELECT";
  if (projection.empty()) out += " *";
  for (const auto& v : projection) out += " ?" + v;
  out += " WHERE {\n";
  out += indent_lines(lines_of(local_body), 2);
  for (const auto& [endpoint, body] : service_blocks) {
    out += "  SERVICE <" + endpoint + "> {\n";
    out += indent_lines(lines_of(body), 4);
    out += "  }\n";
  }
  return out + "}\n";
}

FederatedQuerySkeleton build_skeleton(const VirtualLinkTuple& t, const std::optional<QueryFragment>& local,
                                      const std::optional<QueryFragment>& remote, const ScaffoldOptions& options) {
  if (!t.ds1.endpoint || !t.ds2.endpoint) throw ScaffoldError(t.vl + ": both datasets need a SPARQL endpoint");
  const std::string& a1 = *t.ds1.endpoint;
  const std::string& a2 = *t.ds2.endpoint;
  const std::string at = options.at.value_or(a1);
  if (at != a1 && at != a2) throw ScaffoldError("execution endpoint " + at + " belongs to neither dataset");
  const int local_side = at == a1 ? 1 : 2;
  const int remote_side = 3 - local_side;
  const std::string& remote_endpoint = remote_side == 1 ? a1 : a2;

  if (local) {
    check_fragment(*local, "local");
    if (!local->dataset_endpoint.empty() && local->dataset_endpoint != at)
      throw ScaffoldError("local fragment endpoint " + local->dataset_endpoint + " differs from " + at);
  }
  if (remote) {
    check_fragment(*remote, "remote");
    if (!remote->dataset_endpoint.empty() && remote->dataset_endpoint != remote_endpoint)
      throw ScaffoldError("remote fragment endpoint " + remote->dataset_endpoint + " differs from " + remote_endpoint);
  }

  PrefixMap available = vocab::standard_prefixes();
  available.merge(options.prefixes);

  std::set<std::string> taken;
  for (const auto* f : {&local, &remote})
    if (*f)
      for (const auto& v : variables((*f)->pattern_text)) taken.insert(v);
  std::size_t fresh = 1;
  if (t.f_m)
    for (const auto& v : variables(t.f_m->snippet))
      if (v.rfind(reserved_prefix, 0) == 0) {
        try {
          fresh = std::max(fresh, std::stoul(v.substr(reserved_prefix.size())) + 1);
        } catch (const std::exception&) {
        }
      }

  FederatedQuerySkeleton sk;
  std::string side_var[3];
  int bridge_side = 0;
  if (t.f_m) {
    const int holder = t.holder_side == 0 ? 1 : t.holder_side;
    side_var[holder] = t.f_m->input_var;
    side_var[3 - holder] = t.f_m->output_var;
    for (const auto& v : variables(t.f_m->snippet)) {
      if (v == t.f_m->input_var || v == t.f_m->output_var || !taken.contains(v)) continue;
      sk.renaming[v] = fresh_name(fresh);
    }
    sk.bridge = rename_vars(t.f_m->snippet, sk.renaming);
    bridge_side = options.bridge_side == BridgeSide::Local    ? local_side
                  : options.bridge_side == BridgeSide::Remote ? remote_side
                                                              : holder;
  } else {
    std::string shared;
    if (local && !local->exposed_vars.empty())
      shared = local->exposed_vars.front();
    else if (remote && !remote->exposed_vars.empty())
      shared = remote->exposed_vars.front();
    else
      shared = fresh_name(fresh);
    side_var[1] = side_var[2] = shared;
  }

  std::string body[3];
  for (int side : {1, 2}) {
    const auto& fragment = side == local_side ? local : remote;
    body[side] = fragment ? fragment->pattern_text : side_pattern(t, side, side_var[side], available, fresh);
    if (side == bridge_side) body[side] += "\n" + sk.bridge;
  }

  sk.local_block = local;
  if (a1 == a2) {
    sk.local_body = body[local_side] + "\n" + body[remote_side];
  } else {
    sk.local_body = body[local_side];
    sk.service_blocks.emplace_back(remote_endpoint, body[remote_side]);
  }
  for (const auto* f : {&local, &remote})
    if (*f)
      for (const auto& v : (*f)->exposed_vars)
        if (std::find(sk.projection.begin(), sk.projection.end(), v) == sk.projection.end()) sk.projection.push_back(v);

  std::string all = sk.local_body;
  for (const auto& [_, b] : sk.service_blocks) all += "\n" + b;
  std::istringstream prologue(prologue_for(all, available));
  for (std::string line; std::getline(prologue, line);) {
    const auto colon = line.find(':');
    const auto lt = line.find('<');
    sk.prologue.set(line.substr(7, colon - 7), line.substr(lt + 1, line.size() - lt - 2));
  }
  return sk;
}

std::string scaffold(const VirtualLinkTuple& tuple, const std::optional<QueryFragment>& local,
                     const std::optional<QueryFragment>& remote, const ScaffoldOptions& options) {
  return build_skeleton(tuple, local, remote, options).to_string();
}

std::string rename_vars(std::string_view snippet, const std::map<std::string, std::string>& renaming) {
  if (renaming.empty()) return std::string(snippet);
  const auto tokens = tokenize_sparql(snippet);
  const auto present = variables(snippet);
  for (const auto& [from, to] : renaming) {
    if (std::find(present.begin(), present.end(), from) == present.end())
      throw ScaffoldError("variable ?" + from + " does not occur in the snippet");
    if (std::find(present.begin(), present.end(), to) != present.end() && !renaming.contains(to))
      throw ScaffoldError("renaming ?" + from + " collides with existing variable ?" + to);
  }
  std::string out;
  std::size_t pos = 0;
  for (const auto& t : tokens) {
    if (t.kind != SparqlToken::Kind::Variable) continue;
    auto it = renaming.find(std::string(t.variable_name()));
    if (it == renaming.end()) continue;
    out.append(snippet.substr(pos, t.offset - pos));
    out += t.text.front();
    out += it->second;
    pos = t.offset + t.text.size();
  }
  out.append(snippet.substr(pos));
  return out;
}

std::vector<WellformedFinding> check_wellformed(std::string_view query) {
  std::vector<WellformedFinding> out;
  const auto tokens = tokenize_sparql(query);
  std::vector<const SparqlToken*> open;
  std::map<std::string, std::size_t> declared;
  std::map<std::string, std::size_t> used;
  bool select = false;
  bool where = false;

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    switch (t.kind) {
    case SparqlToken::Kind::String:
      if (!t.terminated) out.push_back({t.offset, "unterminated string"});
      break;
    case SparqlToken::Kind::Punct:
      if (t.text == "{" || t.text == "(") {
        open.push_back(&t);
      } else if (t.text == "}" || t.text == ")") {
        const char want = t.text == "}" ? '{' : '(';
        if (open.empty() || open.back()->text.front() != want)
          out.push_back({t.offset, std::string("unmatched '") + t.text.front() + "'"});
        else
          open.pop_back();
      } else if (t.text == "\"" || t.text == "'") {
        out.push_back({t.offset, "unterminated string"});
      }
      break;
    case SparqlToken::Kind::Word:
      if (t.is_keyword("SELECT")) select = true;
      if (t.is_keyword("WHERE")) where = true;
      if (t.is_keyword("PREFIX")) {
        if (i + 2 < tokens.size() && tokens[i + 1].kind == SparqlToken::Kind::PrefixedName &&
            tokens[i + 1].text.back() == ':' && tokens[i + 2].kind == SparqlToken::Kind::IriRef) {
          declared.emplace(std::string(tokens[i + 1].prefix_label()), tokens[i + 1].offset);
          i += 2;
        } else {
          out.push_back({t.offset, "malformed PREFIX declaration"});
        }
      } else if (t.is_keyword("SERVICE")) {
        std::size_t k = i + 1;
        if (k < tokens.size() && tokens[k].is_keyword("SILENT")) ++k;
        const bool ok = k < tokens.size() && (tokens[k].kind == SparqlToken::Kind::IriRef ||
                                              tokens[k].kind == SparqlToken::Kind::PrefixedName ||
                                              tokens[k].kind == SparqlToken::Kind::Variable);
        if (!ok) out.push_back({t.offset, "SERVICE must be followed by an IRI"});
      }
      break;
    case SparqlToken::Kind::PrefixedName:
      used.emplace(std::string(t.prefix_label()), t.offset);
      break;
    case SparqlToken::Kind::IriRef:
      if (!t.terminated) out.push_back({t.offset, "unterminated IRI"});
      break;
    default:
      break;
    }
  }
  for (const auto* t : open) out.push_back({t->offset, std::string("unclosed '") + t->text.front() + "'"});
  if (!select) out.push_back({0, "missing SELECT"});
  if (!where) out.push_back({0, "missing WHERE"});
  for (const auto& [label, offset] : used)
    if (!declared.contains(label)) out.push_back({offset, "undeclared prefix " + label + ":"});
  for (const auto& [label, offset] : declared)
    if (!used.contains(label)) out.push_back({offset, "unused prefix " + label + ":"});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.offset < b.offset; });
  return out;
}

} // namespace voidext
