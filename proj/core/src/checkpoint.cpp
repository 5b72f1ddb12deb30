#include "discarg/checkpoint.hpp"

#include <fmt/format.h>

#include "binary_io.hpp"
#include "discarg/errors.hpp"

namespace discarg {

namespace {
constexpr std::string_view kMagic = "DARGCKPT";
}  // namespace

const NamedTensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  detail::ByteWriter w;
  w.put_bytes(kMagic);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put_string(checkpoint.metadata_json);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const auto& t : checkpoint.tensors) {
    w.put_string(t.name);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.value.rows()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.value.cols()));
    for (Eigen::Index i = 0; i < t.value.size(); ++i) w.put<double>(t.value.data()[i]);
  }
  const std::uint32_t crc = detail::crc32(w.bytes());
  w.put<std::uint32_t>(crc);
  return w.take();
}

Checkpoint parse_checkpoint(const std::string& bytes) {
  if (bytes.size() < kMagic.size() || std::string_view(bytes).substr(0, kMagic.size()) != kMagic)
    fail(ErrorKind::kFormat, "not a checkpoint: bad magic");
  if (bytes.size() < kMagic.size() + 8) fail(ErrorKind::kCorruption, "checkpoint is truncated");
  const std::string_view body(bytes.data(), bytes.size() - 4);
  detail::ByteReader tail(std::string_view(bytes).substr(bytes.size() - 4), ErrorKind::kCorruption);
  if (detail::crc32(body) != tail.get<std::uint32_t>())
    fail(ErrorKind::kCorruption, "checkpoint CRC mismatch");
  detail::ByteReader r(body, ErrorKind::kCorruption);
  r.get_bytes(kMagic.size());
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    fail(ErrorKind::kFormat, fmt::format("unsupported checkpoint version {}", version));
  Checkpoint out;
  out.metadata_json = r.get_string();
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    t.name = r.get_string();
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    if (static_cast<std::uint64_t>(rows) * cols * 8 > r.remaining())
      fail(ErrorKind::kCorruption, fmt::format("tensor '{}' exceeds the file", t.name));
    t.value.resize(rows, cols);
    for (Eigen::Index i = 0; i < t.value.size(); ++i) t.value.data()[i] = r.get<double>();
    out.tensors.push_back(std::move(t));
  }
  if (r.remaining() != 0) fail(ErrorKind::kFormat, "trailing bytes after the last tensor");
  return out;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  detail::write_file_atomic(path, serialize_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::string& path) {
  try {
    return parse_checkpoint(detail::read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace discarg
