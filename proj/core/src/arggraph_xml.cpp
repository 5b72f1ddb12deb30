#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "discarg/corpus.hpp"
#include "discarg/errors.hpp"

namespace discarg {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string attr(const pt::ptree& node, const char* name, const char* element) {
  auto value = node.get_optional<std::string>(std::string("<xmlattr>.") + name);
  if (!value)
    fail(ErrorKind::kParse, fmt::format("<{}> element without '{}' attribute", element, name));
  return *value;
}

struct Edge {
  std::string id;
  std::string src;
  std::string trg;
  std::string type;
};

}  // namespace

LoadedArgGraph parse_arggraph_xml(std::string_view xml) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, root);
  } catch (const pt::xml_parser_error& e) {
    fail(ErrorKind::kParse,
         fmt::format("malformed arggraph XML at line {}: {}", e.line(), e.message()));
  }
  auto graph = root.get_child_optional("arggraph");
  if (!graph) fail(ErrorKind::kParse, "missing <arggraph> root element");

  LoadedArgGraph out;
  Document& doc = out.document;
  doc.id = graph->get<std::string>("<xmlattr>.id", "");
  doc.language = parse_language(graph->get<std::string>("<xmlattr>.lang", "en"));

  std::map<std::string, Span> edu_spans;
  std::vector<std::string> adu_ids;
  std::vector<Edge> edges;
  for (const auto& [tag, node] : *graph) {
    if (tag == "edu") {
      const std::string id = attr(node, "id", "edu");
      const std::string text = trim(node.data());
      if (!doc.text.empty()) doc.text += ' ';
      Span span{doc.text.size(), doc.text.size() + text.size()};
      doc.text += text;
      if (!edu_spans.emplace(id, span).second)
        fail(ErrorKind::kIntegrity, fmt::format("duplicate node id '{}'", id));
    } else if (tag == "adu") {
      adu_ids.push_back(attr(node, "id", "adu"));
    } else if (tag == "edge") {
      edges.push_back(Edge{attr(node, "id", "edge"), attr(node, "src", "edge"),
                           attr(node, "trg", "edge"), attr(node, "type", "edge")});
    }
  }

  std::map<std::string, const Edge*> edge_by_id;
  for (const auto& e : edges) edge_by_id[e.id] = &e;
  const auto known = [&](const std::string& id) {
    return edu_spans.count(id) || edge_by_id.count(id) ||
           std::find(adu_ids.begin(), adu_ids.end(), id) != adu_ids.end();
  };
  for (const auto& e : edges) {
    if (!known(e.src))
      fail(ErrorKind::kIntegrity, fmt::format("edge '{}' references unknown node '{}'", e.id, e.src));
    if (!known(e.trg))
      fail(ErrorKind::kIntegrity, fmt::format("edge '{}' references unknown node '{}'", e.id, e.trg));
  }

  // Segmentation edges give each ADU its character extent.
  std::map<std::string, std::vector<Span>> adu_pieces;
  for (const auto& e : edges) {
    if (e.type != "seg") continue;
    auto edu = edu_spans.find(e.src);
    if (edu == edu_spans.end())
      fail(ErrorKind::kIntegrity, fmt::format("segmentation edge '{}' must start at an EDU", e.id));
    adu_pieces[e.trg].push_back(edu->second);
  }
  if (adu_ids.empty()) {
    // Files without explicit ADUs treat each EDU as its own argumentative unit.
    for (const auto& [id, span] : edu_spans) {
      adu_ids.push_back(id);
      adu_pieces[id].push_back(span);
    }
  }

  struct Placed {
    std::string id;
    Span span;
  };
  std::vector<Placed> placed;
  for (const auto& id : adu_ids) {
    auto it = adu_pieces.find(id);
    if (it == adu_pieces.end())
      fail(ErrorKind::kIntegrity, fmt::format("ADU '{}' has no segment", id));
    auto pieces = it->second;
    std::sort(pieces.begin(), pieces.end(),
              [](const Span& a, const Span& b) { return a.start < b.start; });
    for (std::size_t k = 1; k < pieces.size(); ++k)
      if (pieces[k].start != pieces[k - 1].end + 1)
        fail(ErrorKind::kStructure, fmt::format("ADU '{}' covers non-adjacent EDUs", id));
    placed.push_back(Placed{id, Span{pieces.front().start, pieces.back().end}});
  }
  std::sort(placed.begin(), placed.end(),
            [](const Placed& a, const Placed& b) { return a.span.start < b.span.start; });

  std::map<std::string, int> index_of;
  for (std::size_t i = 0; i < placed.size(); ++i) {
    DiscourseUnit unit;
    unit.id = placed[i].id;
    unit.span = placed[i].span;
    unit.text = doc.text.substr(unit.span.start, unit.span.length());
    unit.kind = UnitKind::kAdu;
    doc.units.push_back(std::move(unit));
    index_of[placed[i].id] = static_cast<int>(i) + 1;
  }

  const std::size_t n = doc.units.size();
  ArgumentTree& tree = out.tree;
  tree.doc_id = doc.id;
  tree.heads.assign(n + 1, 0);
  tree.heads[0] = -1;
  tree.raw_types.assign(n + 1, "");

  // Edges pointing at another edge (undercut, linked premise) attach to the
  // source unit of the targeted edge.
  const auto resolve_target = [&](const Edge& e) {
    std::string target = e.trg;
    for (std::size_t hops = 0; hops <= edges.size(); ++hops) {
      auto as_edge = edge_by_id.find(target);
      if (as_edge == edge_by_id.end()) break;
      target = as_edge->second->src;
    }
    auto it = index_of.find(target);
    if (it == index_of.end())
      fail(ErrorKind::kIntegrity,
           fmt::format("edge '{}' does not resolve to an ADU (target '{}')", e.id, target));
    return it->second;
  };

  std::vector<bool> has_parent(n + 1, false);
  for (const auto& e : edges) {
    if (e.type == "seg") continue;
    auto src = index_of.find(e.src);
    if (src == index_of.end())
      fail(ErrorKind::kIntegrity,
           fmt::format("edge '{}' must start at an ADU, got '{}'", e.id, e.src));
    const int dependent = src->second;
    if (has_parent[dependent])
      fail(ErrorKind::kStructure, fmt::format("ADU '{}' has more than one outgoing edge", e.src));
    has_parent[dependent] = true;
    tree.heads[dependent] = resolve_target(e);
    tree.raw_types[dependent] = e.type;
  }

  try {
    validate_heads(tree.heads);
  } catch (const Error& e) {
    fail(ErrorKind::kStructure,
         fmt::format("argument graph '{}' is not a tree: {}", doc.id, e.what()));
  }
  validate(doc);
  return out;
}

LoadedArgGraph load_arggraph_xml(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_arggraph_xml(buffer.str());
}

}  // namespace discarg
