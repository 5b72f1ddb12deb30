#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "discarg/matrix.hpp"

namespace discarg {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Matrix value;
};

// Versioned binary snapshot: free-form JSON metadata (mode, inventory,
// seeds, hyperparameters) followed by named little-endian f64 tensors and a
// trailing CRC-32.
struct Checkpoint {
  std::string metadata_json = "{}";
  std::vector<NamedTensor> tensors;

  const NamedTensor* find(const std::string& name) const;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& bytes);
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace discarg
