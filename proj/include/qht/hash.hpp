#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "qht/common.hpp"

namespace qht {

// 64-bit keyed byte-string hash (xxHash64 algorithm).
std::uint64_t hash64(const void* data, std::size_t len, std::uint64_t seed);

inline std::uint64_t hash64(Element e, std::uint64_t seed) {
  return hash64(e.data(), e.size(), seed);
}

// SipHash-2-4 with a 128-bit key; the keyed cryptographic mode.
std::uint64_t siphash24(const void* data, std::size_t len,
                        std::uint64_t k0, std::uint64_t k1);

// SplitMix64 finalizer; also used to derive sub-seeds and to chain digests.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Multiply-shift range reduction: maps a uniform 64-bit value to [0, n).
// Relative bias for non-power-of-two n is below 2^-32 and accepted.
constexpr std::uint64_t reduce64(std::uint64_t x, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(x) * n) >> 64);
}

// Counter-based 64-bit PRNG (SplitMix64). State is one word, so instances
// are cheap to split from a filter seed and runs stay reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix64(z);
  }

  std::uint64_t below(std::uint64_t n) { return reduce64(next(), n); }

 private:
  std::uint64_t state_;
};

// What to do when an element's raw fingerprint collides with the empty code.
enum class EmptyCellPolicy : std::uint8_t {
  // 0 is a regular fingerprint and shares its encoding with empty cells;
  // all 2^sigma values occur.
  kZeroIsFingerprint,
  // Fingerprint 0 is reassigned to 1 (one hash computation, value 1 twice
  // as likely as the others).
  kRemapZeroToOne,
  // Re-derive by chaining the digest until nonzero (default; uniform over
  // the 2^sigma - 1 nonzero values).
  kRederiveWhileZero,
};

enum class HashMode : std::uint8_t { kFast, kKeyed };

// Keyed hash family of one filter instance: a single 64-bit digest per
// element yields the row index (high bits, multiply-shift) and the
// fingerprint (low sigma bits, empty-cell policy applied).
class HashFamily {
 public:
  HashFamily(std::uint64_t seed, std::uint64_t row_modulus,
             std::uint32_t fingerprint_bits,
             EmptyCellPolicy policy = EmptyCellPolicy::kRederiveWhileZero,
             HashMode mode = HashMode::kFast);

  std::uint64_t digest(Element e) const {
    if (mode_ == HashMode::kFast) return hash64(e, digest_seed_);
    return siphash24(e.data(), e.size(), key0_, key1_);
  }

  // Row from the high digest bits: a shift when the row count is a power
  // of two, multiply-shift otherwise.
  std::uint64_t row_of(std::uint64_t digest) const {
    return row_shift_ ? digest >> row_shift_ : reduce64(digest, rows_);
  }

  // Fingerprint from the low digest bits with the empty-cell policy
  // applied; never 0 under the re-derive and remap policies.
  std::uint32_t fingerprint_of(std::uint64_t digest) const {
    std::uint32_t fp = static_cast<std::uint32_t>(digest) & mask_;
    if (policy_ == EmptyCellPolicy::kRederiveWhileZero) {
      if (fp == 0) [[unlikely]] fp = rederive(digest);
    } else if (policy_ == EmptyCellPolicy::kRemapZeroToOne) {
      if (fp == 0) fp = 1;
    }
    return fp;
  }

  std::uint64_t row(Element e) const { return row_of(digest(e)); }
  std::uint32_t fingerprint(Element e) const {
    return fingerprint_of(digest(e));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t rows() const { return rows_; }
  std::uint32_t fingerprint_bits() const { return bits_; }
  EmptyCellPolicy policy() const { return policy_; }

  // Splits an independent PRNG stream off the same seed.
  SplitMix64 make_prng() const { return SplitMix64(mix64(seed_ ^ kPrngSalt)); }

 private:
  static constexpr std::uint64_t kDigestSalt = 0x7b1a2f4ce53d9960ULL;
  static constexpr std::uint64_t kPrngSalt = 0x41c64e6da3bc0074ULL;

  std::uint32_t rederive(std::uint64_t digest) const;

  std::uint64_t seed_;
  std::uint64_t digest_seed_;
  std::uint64_t key0_, key1_;
  std::uint64_t rows_;
  std::uint32_t row_shift_;  // 64 - log2(rows) when rows is a power of two
  std::uint32_t bits_;
  std::uint32_t mask_;
  EmptyCellPolicy policy_;
  HashMode mode_;
};

}  // namespace qht
