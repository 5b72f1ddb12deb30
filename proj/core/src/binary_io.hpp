#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "discarg/errors.hpp"

namespace discarg::detail {

// Little-endian encoding independent of host byte order.
class ByteWriter {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    out_.append(reinterpret_cast<const char*>(bytes), sizeof(T));
  }

  void put_bytes(std::string_view bytes) { out_.append(bytes); }

  void put_string(std::string_view s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }

  const std::string& bytes() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  ByteReader(std::string_view data, ErrorKind truncation_kind)
      : data_(data), kind_(truncation_kind) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    need(sizeof(T));
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }

  std::string_view get_bytes(std::size_t n) {
    need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::string get_string() {
    const auto n = get<std::uint32_t>();
    return std::string(get_bytes(n));
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n)
      fail(kind_, fmt::format("truncated data: need {} bytes at offset {}, have {}", n, pos_,
                              data_.size() - pos_));
  }

  std::string_view data_;
  std::size_t pos_ = 0;
  ErrorKind kind_;
};

std::uint32_t crc32(std::string_view bytes);
std::string read_file(const std::string& path);
// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, std::string_view bytes);

}  // namespace discarg::detail
