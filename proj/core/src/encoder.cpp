#include "discarg/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <boost/crc.hpp>
#include <fmt/format.h>

#include "binary_io.hpp"
#include "discarg/errors.hpp"

namespace discarg {

namespace detail {

std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, fmt::format("cannot write '{}'", tmp));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::kIo, fmt::format("short write to '{}'", tmp));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

namespace {

constexpr char kMagic[4] = {'A', 'E', 'M', 'B'};

}  // namespace

std::string serialize_embeddings(std::uint32_t dim, const std::vector<UnitEmbedding>& records) {
  detail::ByteWriter w;
  w.put_bytes(std::string_view(kMagic, 4));
  w.put<std::uint16_t>(kEmbeddingFormatVersion);
  w.put<std::uint32_t>(dim);
  for (const auto& r : records) {
    if (r.vector.size() != dim)
      fail(ErrorKind::kFormat, fmt::format("record {}#{} has dimension {}, header says {}",
                                           r.doc_id, r.unit_index, r.vector.size(), dim));
    w.put_string(r.doc_id);
    w.put<std::uint32_t>(r.unit_index);
    for (float x : r.vector) w.put<float>(x);
  }
  const std::uint32_t crc = detail::crc32(w.bytes());
  w.put<std::uint32_t>(crc);
  return w.take();
}

void write_embeddings(const std::string& path, std::uint32_t dim,
                      const std::vector<UnitEmbedding>& records) {
  detail::write_file_atomic(path, serialize_embeddings(dim, records));
}

EmbeddingTable parse_embeddings(const std::string& bytes) {
  constexpr std::size_t kHeader = 4 + 2 + 4;
  if (bytes.size() < kHeader + 4) fail(ErrorKind::kCorruption, "embedding file is truncated");
  if (bytes.compare(0, 4, kMagic, 4) != 0)
    fail(ErrorKind::kFormat, "not an AEMB embedding file (bad magic)");
  const std::string_view body(bytes.data(), bytes.size() - 4);
  detail::ByteReader tail(std::string_view(bytes).substr(bytes.size() - 4), ErrorKind::kCorruption);
  const std::uint32_t stored_crc = tail.get<std::uint32_t>();
  if (detail::crc32(body) != stored_crc)
    fail(ErrorKind::kCorruption, "embedding file checksum mismatch");

  detail::ByteReader r(body, ErrorKind::kCorruption);
  r.get_bytes(4);
  const auto version = r.get<std::uint16_t>();
  if (version != kEmbeddingFormatVersion)
    fail(ErrorKind::kFormat, fmt::format("unsupported AEMB version {}", version));
  EmbeddingTable table;
  table.dim = r.get<std::uint32_t>();
  if (table.dim == 0) fail(ErrorKind::kFormat, "embedding dimension is zero");
  while (r.remaining() > 0) {
    UnitEmbedding e;
    e.doc_id = r.get_string();
    e.unit_index = r.get<std::uint32_t>();
    if (r.remaining() < static_cast<std::size_t>(table.dim) * sizeof(float))
      fail(ErrorKind::kFormat,
           fmt::format("record {}#{} is shorter than d_LM = {}", e.doc_id, e.unit_index, table.dim));
    e.vector.resize(table.dim);
    for (auto& x : e.vector) x = r.get<float>();
    table.by_doc[e.doc_id].push_back(std::move(e));
  }
  for (auto& [doc_id, rows] : table.by_doc) {
    std::sort(rows.begin(), rows.end(),
              [](const UnitEmbedding& a, const UnitEmbedding& b) { return a.unit_index < b.unit_index; });
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].unit_index != i + 1)
        fail(ErrorKind::kFormat,
             fmt::format("document '{}' has non-contiguous unit indices", doc_id));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
  try {
    return parse_embeddings(detail::read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

namespace {

std::vector<std::uint32_t> decode_utf8(std::string_view s) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    std::uint32_t cp = c;
    if (c >= 0xF0) { len = 4; cp = c & 0x07; }
    else if (c >= 0xE0) { len = 3; cp = c & 0x0F; }
    else if (c >= 0xC0) { len = 2; cp = c & 0x1F; }
    if (i + len > s.size()) len = 1, cp = c;
    for (std::size_t k = 1; k < len; ++k)
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_gram(const std::uint32_t* cps, std::size_t n, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ mix64(seed);
  const auto feed = [&h](std::uint64_t v) {
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  };
  feed(n);
  for (std::size_t i = 0; i < n; ++i) feed(cps[i]);
  return mix64(h);
}

}  // namespace

HashedVector hash_encoder(const DiscourseUnit& unit, std::size_t dim, std::uint64_t seed) {
  if (dim < 8) fail(ErrorKind::kArgument, fmt::format("hash dimension {} is below 8", dim));
  HashedVector out;
  out.values = Vector::Zero(static_cast<Eigen::Index>(dim));
  if (unit.text.empty()) {
    out.empty_text = true;
    return out;
  }
  constexpr std::uint32_t kBegin = 0x02;
  constexpr std::uint32_t kEnd = 0x03;
  std::vector<std::uint32_t> cps{kBegin};
  const auto body = decode_utf8(unit.text);
  cps.insert(cps.end(), body.begin(), body.end());
  cps.push_back(kEnd);
  for (std::size_t n : {2, 3}) {
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
      const std::uint64_t h = hash_gram(cps.data() + i, n, seed);
      const auto bucket = static_cast<Eigen::Index>((h & 0x7FFFFFFFFFFFFFFFULL) % dim);
      out.values(bucket) += (h >> 63) ? -1.0 : 1.0;
    }
  }
  const double norm = out.values.norm();
  if (norm == 0.0) {
    out.empty_text = true;
    return out;
  }
  out.values /= norm;
  return out;
}

Vector make_root_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(rng);
  return v;
}

Matrix compose_embedding_matrix(const Vector& root, const Matrix& unit_vectors) {
  if (unit_vectors.cols() != root.size())
    fail(ErrorKind::kShape, fmt::format("root vector has dimension {} but units have {}",
                                        root.size(), unit_vectors.cols()));
  Matrix v(unit_vectors.rows() + 1, unit_vectors.cols());
  v.row(0) = root.transpose();
  v.bottomRows(unit_vectors.rows()) = unit_vectors;
  return v;
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim_ < 8) fail(ErrorKind::kArgument, fmt::format("hash dimension {} is below 8", dim_));
}

Matrix HashEmbeddingProvider::unit_vectors(const Document& doc) const {
  Matrix m(doc.units.size(), dim_);
  for (std::size_t i = 0; i < doc.units.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = hash_encoder(doc.units[i], dim_, seed_).values.transpose();
  return m;
}

FileEmbeddingProvider::FileEmbeddingProvider(EmbeddingTable table) : table_(std::move(table)) {}

std::unique_ptr<FileEmbeddingProvider> FileEmbeddingProvider::open(const std::string& path) {
  return std::make_unique<FileEmbeddingProvider>(load_embeddings(path));
}

Matrix FileEmbeddingProvider::unit_vectors(const Document& doc) const {
  auto it = table_.by_doc.find(doc.id);
  if (it == table_.by_doc.end())
    fail(ErrorKind::kReference, fmt::format("no embeddings for document '{}'", doc.id));
  if (it->second.size() != doc.units.size())
    fail(ErrorKind::kAlignment, fmt::format("document '{}' has {} units but {} embeddings",
                                            doc.id, doc.units.size(), it->second.size()));
  Matrix m(doc.units.size(), table_.dim);
  for (std::size_t i = 0; i < it->second.size(); ++i)
    for (std::size_t c = 0; c < table_.dim; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = it->second[i].vector[c];
  return m;
}

}  // namespace discarg
