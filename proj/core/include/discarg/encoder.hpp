#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "discarg/corpus.hpp"
#include "discarg/matrix.hpp"

namespace discarg {

struct UnitEmbedding {
  std::string doc_id;
  std::uint32_t unit_index = 0;  // 1-based
  std::vector<float> vector;
};

struct EmbeddingTable {
  std::uint32_t dim = 0;
  // Per document, vectors ordered by unit index (element 0 is unit 1).
  std::map<std::string, std::vector<UnitEmbedding>> by_doc;
};

// AEMB binary format: "AEMB", u16 version, u32 d_LM, then records of
// (u32 length + UTF-8 doc id, u32 unit index, d_LM little-endian f32),
// followed by a CRC32 of every preceding byte.
inline constexpr std::uint16_t kEmbeddingFormatVersion = 1;

EmbeddingTable load_embeddings(const std::string& path);
EmbeddingTable parse_embeddings(const std::string& bytes);
std::string serialize_embeddings(std::uint32_t dim, const std::vector<UnitEmbedding>& records);
void write_embeddings(const std::string& path, std::uint32_t dim,
                      const std::vector<UnitEmbedding>& records);

struct HashedVector {
  Vector values;
  bool empty_text = false;  // warning: the unit had no text to hash
};

// Signed feature hashing of character 2- and 3-grams (with boundary
// markers) into `dim` buckets, L2-normalized.
HashedVector hash_encoder(const DiscourseUnit& unit, std::size_t dim, std::uint64_t seed);

// Entries drawn i.i.d. uniform in [-0.1, 0.1].
Vector make_root_vector(std::size_t dim, std::uint64_t seed);

// Stacks v_0 on top of the unit vectors: (n+1) x dim.
Matrix compose_embedding_matrix(const Vector& root, const Matrix& unit_vectors);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  // n x dim matrix, row i-1 for unit i.
  virtual Matrix unit_vectors(const Document& doc) const = 0;
};

class HashEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dim = 64, std::uint64_t seed = 0);
  std::size_t dim() const override { return dim_; }
  Matrix unit_vectors(const Document& doc) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit FileEmbeddingProvider(EmbeddingTable table);
  static std::unique_ptr<FileEmbeddingProvider> open(const std::string& path);
  std::size_t dim() const override { return table_.dim; }
  Matrix unit_vectors(const Document& doc) const override;

 private:
  EmbeddingTable table_;
};

}  // namespace discarg
