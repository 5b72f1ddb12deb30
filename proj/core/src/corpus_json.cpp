#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "discarg/corpus.hpp"
#include "discarg/errors.hpp"

namespace discarg {

namespace {

using nlohmann::json;

json tree_to_json(const ArgumentTree& tree) {
  json heads = json::object();
  json functions = json::object();
  json roles = json::object();
  json raw = json::object();
  for (std::size_t i = 1; i < tree.heads.size(); ++i) {
    const std::string key = std::to_string(i);
    heads[key] = tree.heads[i];
    if (tree.has_functions()) functions[key] = std::string(to_string(tree.functions[i]));
    if (tree.has_roles()) roles[key] = std::string(to_string(tree.roles[i]));
    if (!tree.raw_types.empty()) raw[key] = tree.raw_types[i];
  }
  json out = {{"heads", heads}};
  if (tree.has_functions()) out["functions"] = functions;
  if (tree.has_roles()) out["roles"] = roles;
  if (!tree.raw_types.empty()) out["raw"] = raw;
  return out;
}

std::size_t index_key(const std::string& key, std::size_t n) {
  std::size_t idx = 0;
  try {
    idx = std::stoul(key);
  } catch (const std::exception&) {
    fail(ErrorKind::kFormat, fmt::format("argument key '{}' is not a unit index", key));
  }
  if (idx < 1 || idx > n)
    fail(ErrorKind::kBounds, fmt::format("argument key '{}' outside 1..{}", key, n));
  return idx;
}

ArgumentTree tree_from_json(const json& j, const std::string& doc_id, std::size_t n) {
  ArgumentTree tree;
  tree.doc_id = doc_id;
  tree.heads.assign(n + 1, -1);
  for (const auto& [key, value] : j.at("heads").items())
    tree.heads[index_key(key, n)] = value.get<int>();
  if (j.contains("functions")) {
    tree.functions.assign(n + 1, ArgumentFunction::kSupport);
    for (const auto& [key, value] : j.at("functions").items())
      tree.functions[index_key(key, n)] = parse_function(value.get<std::string>());
  }
  if (j.contains("roles")) {
    tree.roles.assign(n + 1, Role::kPro);
    for (const auto& [key, value] : j.at("roles").items())
      tree.roles[index_key(key, n)] = parse_role(value.get<std::string>());
  }
  if (j.contains("raw")) {
    tree.raw_types.assign(n + 1, "");
    for (const auto& [key, value] : j.at("raw").items())
      tree.raw_types[index_key(key, n)] = value.get<std::string>();
  }
  return tree;
}

}  // namespace

std::string to_json(const DocumentBundle& bundle) {
  const Document& doc = bundle.document;
  json units = json::array();
  for (const auto& u : doc.units)
    units.push_back({{"id", u.id},
                     {"text", u.text},
                     {"span", {u.span.start, u.span.end}},
                     {"kind", std::string(to_string(u.kind))}});
  json out = {{"id", doc.id},
              {"language", std::string(to_string(doc.language))},
              {"variant", std::string(to_string(doc.variant))}};
  if (doc.source_doc_id) out["source_doc_id"] = *doc.source_doc_id;
  out["text"] = doc.text;
  out["units"] = units;
  if (bundle.argument) out["argument"] = tree_to_json(*bundle.argument);
  return out.dump(2);
}

DocumentBundle bundle_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, fmt::format("malformed document JSON: {}", e.what()));
  }
  DocumentBundle bundle;
  Document& doc = bundle.document;
  try {
    doc.id = j.at("id").get<std::string>();
    doc.language = parse_language(j.value("language", "en"));
    doc.variant = parse_variant(j.value("variant", "original"));
    if (j.contains("source_doc_id") && !j["source_doc_id"].is_null())
      doc.source_doc_id = j["source_doc_id"].get<std::string>();
    for (const auto& u : j.at("units")) {
      DiscourseUnit unit;
      unit.id = u.at("id").get<std::string>();
      unit.text = u.at("text").get<std::string>();
      const auto& span = u.at("span");
      unit.span = Span{span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
      unit.kind = parse_unit_kind(u.value("kind", "adu"));
      doc.units.push_back(std::move(unit));
    }
    if (j.contains("text")) {
      doc.text = j["text"].get<std::string>();
    } else {
      std::size_t length = 0;
      for (const auto& u : doc.units) length = std::max(length, u.span.end);
      doc.text.assign(length, ' ');
      for (const auto& u : doc.units)
        if (u.span.end <= length && u.text.size() == u.span.length())
          doc.text.replace(u.span.start, u.span.length(), u.text);
    }
    if (j.contains("argument") && !j["argument"].is_null())
      bundle.argument = tree_from_json(j["argument"], doc.id, doc.units.size());
  } catch (const json::exception& e) {
    fail(ErrorKind::kFormat, fmt::format("invalid document JSON: {}", e.what()));
  }
  validate(doc);
  return bundle;
}

void write_bundle(const DocumentBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, fmt::format("cannot write '{}'", path));
  out << to_json(bundle) << '\n';
}

DocumentBundle read_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return bundle_from_json(buffer.str());
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

std::vector<DocumentBundle> read_bundle_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(ErrorKind::kIo, fmt::format("'{}' is not a directory", dir));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        entry.path().filename().string().find(".rst.") == std::string::npos)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<DocumentBundle> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(read_bundle(f.string()));
  return out;
}

}  // namespace discarg
