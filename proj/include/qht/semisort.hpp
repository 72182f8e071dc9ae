#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qht/common.hpp"

namespace qht {
namespace semisort {

// Number of size-k multisets over S symbols: C(S+k-1, k). Throws on
// 64-bit overflow.
std::uint64_t count_states(std::uint64_t symbols, std::uint32_t k);

// Bits needed to store a row as the rank of its sorted fingerprint
// multiset (empty cells count as fingerprint 0).
std::uint32_t encoded_bits(std::uint64_t symbols, std::uint32_t k);

// Rank of a fingerprint multiset in colexicographic order over sorted
// tuples; the all-empty row has rank 0. Bijective with decode_row.
std::uint64_t encode_row(std::span<const std::uint32_t> row,
                         std::uint64_t symbols);

// As encode_row, but the input must already be sorted ascending.
std::uint64_t encode_sorted_row(std::span<const std::uint32_t> sorted,
                                std::uint64_t symbols);

// Inverse of encode_row; yields the multiset sorted ascending.
std::vector<std::uint32_t> decode_row(std::uint64_t rank,
                                      std::uint64_t symbols, std::uint32_t k);

// decode_row into a caller-provided buffer of size k (hot path).
void decode_row_into(std::uint64_t rank, std::uint64_t symbols,
                     std::uint32_t k, std::uint32_t* out);

}  // namespace semisort
}  // namespace qht
