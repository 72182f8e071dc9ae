#pragma once

#include <cstdint>
#include <vector>

namespace qht {

enum class FilterKind : std::uint32_t {
  kQht = 1,
  kQhtd = 2,
  kQqhtd = 3,
  kSqf = 4,
  kSbf = 5,
  kCuckoo = 6,
};

// Little-endian fixed-width writer for snapshot headers.
struct SnapshotWriter {
  std::vector<std::uint8_t> bytes;

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  // Common header shared by every filter: variant, M, sigma, k, N, seed.
  void header(FilterKind kind, std::uint64_t memory_bits, std::uint32_t sigma,
              std::uint32_t k, std::uint64_t rows, std::uint64_t seed) {
    u32(static_cast<std::uint32_t>(kind));
    u64(memory_bits);
    u32(sigma);
    u32(k);
    u64(rows);
    u64(seed);
  }
};

}  // namespace qht
