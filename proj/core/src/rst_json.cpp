#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "discarg/errors.hpp"
#include "discarg/rst.hpp"

namespace discarg {

namespace {

using nlohmann::json;

class TreeBuilder {
 public:
  TreeBuilder(const json& leaves, const json& nodes)
      : leaves_(leaves), nodes_(nodes), leaf_used_(leaves.size(), false),
        node_used_(nodes.size(), false) {}

  RstNode build_node(std::size_t idx) {
    if (idx >= nodes_.size())
      fail(ErrorKind::kFormat, fmt::format("reference to missing node {}", idx));
    if (node_used_[idx])
      fail(ErrorKind::kStructure, fmt::format("node {} is referenced twice", idx));
    node_used_[idx] = true;
    const json& node = nodes_[idx];
    std::vector<RstNode> children;
    for (const auto& ref : node.at("children")) children.push_back(build_child(ref));
    std::vector<Nuclearity> nuclearities;
    for (const auto& x : node.at("nuclearities"))
      nuclearities.push_back(parse_nuclearity(x.get<std::string>()));
    std::vector<std::string> relations;
    for (const auto& x : node.at("relations")) relations.push_back(x.get<std::string>());
    return RstNode::internal(std::move(children), std::move(nuclearities), std::move(relations));
  }

  RstNode build_leaf(std::size_t idx) {
    if (idx >= leaves_.size())
      fail(ErrorKind::kFormat, fmt::format("reference to missing leaf {}", idx));
    if (leaf_used_[idx])
      fail(ErrorKind::kStructure, fmt::format("leaf {} is referenced twice", idx));
    leaf_used_[idx] = true;
    const auto& span = leaves_[idx].at("span");
    return RstNode::leaf(Span{span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()});
  }

  void check_all_used() const {
    for (std::size_t i = 0; i < leaf_used_.size(); ++i)
      if (!leaf_used_[i]) fail(ErrorKind::kStructure, fmt::format("leaf {} is unreachable", i));
    for (std::size_t i = 0; i < node_used_.size(); ++i)
      if (!node_used_[i]) fail(ErrorKind::kStructure, fmt::format("node {} is unreachable", i));
  }

 private:
  RstNode build_child(const json& ref) {
    if (ref.contains("leaf")) return build_leaf(ref["leaf"].get<std::size_t>());
    if (ref.contains("node")) return build_node(ref["node"].get<std::size_t>());
    fail(ErrorKind::kFormat, "child reference must be {\"leaf\": i} or {\"node\": j}");
  }

  const json& leaves_;
  const json& nodes_;
  std::vector<bool> leaf_used_;
  std::vector<bool> node_used_;
};

void emit(const RstNode& node, json& leaves, json& nodes, json& ref) {
  if (node.is_leaf()) {
    ref = {{"leaf", leaves.size()}};
    leaves.push_back({{"span", {node.leaf_span.start, node.leaf_span.end}}});
    return;
  }
  const std::size_t idx = nodes.size();
  ref = {{"node", idx}};
  nodes.push_back(json::object());
  json children = json::array();
  for (const auto& child : node.children) {
    json child_ref;
    emit(child, leaves, nodes, child_ref);
    children.push_back(child_ref);
  }
  json nuclearities = json::array();
  for (auto x : node.nuclearities) nuclearities.push_back(std::string(to_string(x)));
  nodes[idx] = {{"children", children},
                {"nuclearities", nuclearities},
                {"relations", node.relations}};
}

}  // namespace

RstDocument parse_rst_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, fmt::format("malformed RST JSON: {}", e.what()));
  }
  RstDocument doc;
  try {
    doc.doc_id = j.value("doc_id", "");
    if (j.contains("text_length")) doc.text_length = j["text_length"].get<std::size_t>();
    else if (j.contains("text")) doc.text_length = j["text"].get<std::string>().size();
    const json& leaves = j.at("leaves");
    const json nodes = j.value("nodes", json::array());
    TreeBuilder builder(leaves, nodes);
    if (nodes.empty()) {
      if (leaves.size() != 1)
        fail(ErrorKind::kFormat, "an RST tree with several leaves needs internal nodes");
      doc.root = builder.build_leaf(0);
    } else {
      doc.root = builder.build_node(0);
    }
    builder.check_all_used();
  } catch (const json::exception& e) {
    fail(ErrorKind::kFormat, fmt::format("invalid RST JSON: {}", e.what()));
  }
  validate(doc.root, doc.text_length);
  return doc;
}

RstDocument parse_rst_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_rst_json_text(buffer.str());
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

std::string to_json(const RstDocument& doc) {
  json leaves = json::array();
  json nodes = json::array();
  json root_ref;
  emit(doc.root, leaves, nodes, root_ref);
  json out = {{"doc_id", doc.doc_id}};
  if (doc.text_length) out["text_length"] = *doc.text_length;
  out["leaves"] = leaves;
  out["nodes"] = nodes;
  return out.dump(2);
}

void write_rst_json(const RstDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, fmt::format("cannot write '{}'", path));
  out << to_json(doc) << '\n';
}

}  // namespace discarg
