#include "qht/hash.hpp"

#include <bit>

namespace qht {

namespace {

constexpr std::uint64_t kPrime1 = 0x9E3779B185EBCA87ULL;
constexpr std::uint64_t kPrime2 = 0xC2B2AE3D27D4EB4FULL;
constexpr std::uint64_t kPrime3 = 0x165667B19E3779F9ULL;
constexpr std::uint64_t kPrime4 = 0x85EBCA77C2B2AE63ULL;
constexpr std::uint64_t kPrime5 = 0x27D4EB2F165667C5ULL;

inline std::uint64_t read64(const unsigned char* p) {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  return v;
}

inline std::uint32_t read32(const unsigned char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

inline std::uint64_t xxh_round(std::uint64_t acc, std::uint64_t input) {
  acc += input * kPrime2;
  acc = std::rotl(acc, 31);
  return acc * kPrime1;
}

inline std::uint64_t xxh_merge(std::uint64_t acc, std::uint64_t val) {
  acc ^= xxh_round(0, val);
  return acc * kPrime1 + kPrime4;
}

}  // namespace

std::uint64_t hash64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  const unsigned char* end = p + len;
  std::uint64_t h;

  if (len >= 32) {
    std::uint64_t v1 = seed + kPrime1 + kPrime2;
    std::uint64_t v2 = seed + kPrime2;
    std::uint64_t v3 = seed;
    std::uint64_t v4 = seed - kPrime1;
    do {
      v1 = xxh_round(v1, read64(p));
      v2 = xxh_round(v2, read64(p + 8));
      v3 = xxh_round(v3, read64(p + 16));
      v4 = xxh_round(v4, read64(p + 24));
      p += 32;
    } while (p + 32 <= end);
    h = std::rotl(v1, 1) + std::rotl(v2, 7) + std::rotl(v3, 12) +
        std::rotl(v4, 18);
    h = xxh_merge(h, v1);
    h = xxh_merge(h, v2);
    h = xxh_merge(h, v3);
    h = xxh_merge(h, v4);
  } else {
    h = seed + kPrime5;
  }

  h += static_cast<std::uint64_t>(len);

  while (p + 8 <= end) {
    h ^= xxh_round(0, read64(p));
    h = std::rotl(h, 27) * kPrime1 + kPrime4;
    p += 8;
  }
  if (p + 4 <= end) {
    h ^= static_cast<std::uint64_t>(read32(p)) * kPrime1;
    h = std::rotl(h, 23) * kPrime2 + kPrime3;
    p += 4;
  }
  while (p < end) {
    h ^= static_cast<std::uint64_t>(*p) * kPrime5;
    h = std::rotl(h, 11) * kPrime1;
    ++p;
  }

  h ^= h >> 33;
  h *= kPrime2;
  h ^= h >> 29;
  h *= kPrime3;
  h ^= h >> 32;
  return h;
}

namespace {

inline void sip_round(std::uint64_t& v0, std::uint64_t& v1, std::uint64_t& v2,
                      std::uint64_t& v3) {
  v0 += v1;
  v1 = std::rotl(v1, 13);
  v1 ^= v0;
  v0 = std::rotl(v0, 32);
  v2 += v3;
  v3 = std::rotl(v3, 16);
  v3 ^= v2;
  v0 += v3;
  v3 = std::rotl(v3, 21);
  v3 ^= v0;
  v2 += v1;
  v1 = std::rotl(v1, 17);
  v1 ^= v2;
  v2 = std::rotl(v2, 32);
}

}  // namespace

std::uint64_t siphash24(const void* data, std::size_t len, std::uint64_t k0,
                        std::uint64_t k1) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t v0 = k0 ^ 0x736f6d6570736575ULL;
  std::uint64_t v1 = k1 ^ 0x646f72616e646f6dULL;
  std::uint64_t v2 = k0 ^ 0x6c7967656e657261ULL;
  std::uint64_t v3 = k1 ^ 0x7465646279746573ULL;

  const std::size_t tail = len & 7;
  const unsigned char* end = p + (len - tail);
  for (; p != end; p += 8) {
    std::uint64_t m = read64(p);
    v3 ^= m;
    sip_round(v0, v1, v2, v3);
    sip_round(v0, v1, v2, v3);
    v0 ^= m;
  }

  std::uint64_t b = static_cast<std::uint64_t>(len) << 56;
  for (std::size_t i = 0; i < tail; ++i) {
    b |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  v3 ^= b;
  sip_round(v0, v1, v2, v3);
  sip_round(v0, v1, v2, v3);
  v0 ^= b;

  v2 ^= 0xff;
  sip_round(v0, v1, v2, v3);
  sip_round(v0, v1, v2, v3);
  sip_round(v0, v1, v2, v3);
  sip_round(v0, v1, v2, v3);
  return v0 ^ v1 ^ v2 ^ v3;
}

HashFamily::HashFamily(std::uint64_t seed, std::uint64_t row_modulus,
                       std::uint32_t fingerprint_bits, EmptyCellPolicy policy,
                       HashMode mode)
    : seed_(seed),
      digest_seed_(mix64(seed ^ kDigestSalt)),
      key0_(mix64(seed ^ 0x243f6a8885a308d3ULL)),
      key1_(mix64(seed ^ 0x13198a2e03707344ULL)),
      rows_(row_modulus),
      bits_(fingerprint_bits),
      policy_(policy),
      mode_(mode) {
  if (row_modulus == 0) throw ConfigError("hash family: row modulus must be >= 1");
  if (fingerprint_bits < 1 || fingerprint_bits > 32) {
    throw ConfigError("hash family: fingerprint bits must be in [1, 32]");
  }
  mask_ = fingerprint_bits == 32 ? 0xffffffffu
                                 : ((1u << fingerprint_bits) - 1u);
  row_shift_ = std::has_single_bit(rows_) && rows_ > 1
                   ? 64 - static_cast<std::uint32_t>(std::bit_width(rows_) - 1)
                   : 0;
}

std::uint32_t HashFamily::rederive(std::uint64_t digest) const {
  std::uint32_t fp = 0;
  for (int round = 0; fp == 0; ++round) {
    if (round == 64) {
      // Probability <= 2^-64*sigma; a nonzero value must have shown up.
      throw std::logic_error("fingerprint re-derivation failed 64 times");
    }
    digest = mix64(digest);
    fp = static_cast<std::uint32_t>(digest) & mask_;
  }
  return fp;
}

}  // namespace qht
