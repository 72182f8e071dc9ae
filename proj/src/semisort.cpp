#include "qht/semisort.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <memory>

namespace qht {
namespace semisort {

namespace {

constexpr std::uint64_t kOverflow = std::numeric_limits<std::uint64_t>::max();

// C(n, k) with overflow detection (exact integer arithmetic).
std::uint64_t binomial_slow(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > kOverflow - 1) {
      throw ConfigError("semisort: state count overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

// Small-argument cache covering every practical row shape.
constexpr std::uint64_t kCacheN = 97;
constexpr std::uint64_t kCacheK = 9;

const std::uint64_t* binomial_cache() {
  static const auto table = [] {
    auto t = std::make_unique<std::array<std::uint64_t, kCacheN * kCacheK>>();
    for (std::uint64_t n = 0; n < kCacheN; ++n) {
      for (std::uint64_t k = 0; k < kCacheK; ++k) {
        (*t)[n * kCacheK + k] = binomial_slow(n, k);
      }
    }
    return t;
  }();
  return table->data();
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (n < kCacheN && k < kCacheK) return binomial_cache()[n * kCacheK + k];
  return binomial_slow(n, k);
}

}  // namespace

std::uint64_t count_states(std::uint64_t symbols, std::uint32_t k) {
  if (symbols < 1 || k < 1) {
    throw ConfigError("semisort: need symbols >= 1 and k >= 1");
  }
  return binomial(symbols + k - 1, k);
}

std::uint32_t encoded_bits(std::uint64_t symbols, std::uint32_t k) {
  std::uint64_t states = count_states(symbols, k);
  return states <= 1
             ? 1
             : static_cast<std::uint32_t>(std::bit_width(states - 1));
}

std::uint64_t encode_sorted_row(std::span<const std::uint32_t> sorted,
                                std::uint64_t symbols) {
  // Colex rank via the combinatorial number system: the sorted multiset
  // (x_1 <= ... <= x_k) maps to the strict combination (x_i + i - 1).
  std::uint64_t rank = 0;
  for (std::uint32_t i = 1; i <= sorted.size(); ++i) {
    rank += binomial(sorted[i - 1] + i - 1, i);
  }
  return rank;
}

std::uint64_t encode_row(std::span<const std::uint32_t> row,
                         std::uint64_t symbols) {
  std::vector<std::uint32_t> sorted(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.back() >= symbols) {
    throw ConfigError("semisort: fingerprint out of range");
  }
  return encode_sorted_row(sorted, symbols);
}

void decode_row_into(std::uint64_t rank, std::uint64_t symbols,
                     std::uint32_t k, std::uint32_t* out) {
  if (rank >= count_states(symbols, k)) {
    throw ConfigError("semisort: rank out of range");
  }
  // Greedy from the largest position down; stops at 0 because C(i-1, i) = 0.
  for (std::uint32_t i = k; i >= 1; --i) {
    std::uint64_t c = symbols - 1;
    while (binomial(c + i - 1, i) > rank) --c;
    out[i - 1] = static_cast<std::uint32_t>(c);
    rank -= binomial(c + i - 1, i);
  }
}

std::vector<std::uint32_t> decode_row(std::uint64_t rank,
                                      std::uint64_t symbols,
                                      std::uint32_t k) {
  std::vector<std::uint32_t> out(k);
  decode_row_into(rank, symbols, k, out.data());
  return out;
}

}  // namespace semisort
}  // namespace qht
