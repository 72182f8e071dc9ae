#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qht/filter.hpp"
#include "qht/hash.hpp"
#include "qht/packed_table.hpp"

namespace qht {

struct SbfParams {
  std::uint64_t cells = 0;       // m rows of one counter each
  std::uint32_t cell_bits = 2;   // d; counter cap Max = 2^d - 1
  std::uint32_t hash_count = 2;  // K
  std::uint32_t decrements = 7;  // P cells decremented per insertion

  std::uint32_t max_value() const { return (1u << cell_bits) - 1; }
  std::uint64_t memory_bits() const { return cells * cell_bits; }
  void validate() const;
};

// Stable bloom filter: K probed counters answer DUPLICATE when all are
// nonzero; every insertion decrements P random counters and re-arms the
// probed ones to Max, which keeps the zero fraction stationary.
class StableBloomFilter final : public DuplicateFilter {
 public:
  StableBloomFilter(const SbfParams& params, std::uint64_t seed);

  Verdict detect(Element e) const override;
  void insert(Element e) override;
  Verdict stream(Element e) override;

  std::vector<std::uint8_t> snapshot() const override;
  std::uint64_t memory_bits() const override { return params_.memory_bits(); }
  std::string describe() const override;

  const SbfParams& params() const { return params_; }
  std::uint64_t cell(std::uint64_t i) const { return counters_.get(i, 0); }

 private:
  static constexpr std::uint32_t kMaxHashes = 16;

  void probe(Element e, std::uint64_t* idx) const;
  void update(const std::uint64_t* idx);

  SbfParams params_;
  std::uint64_t seed_;
  std::uint64_t probe_seeds_[kMaxHashes];
  SplitMix64 prng_;
  PackedCellTable counters_;
};

struct CuckooParams {
  std::uint64_t buckets = 0;           // power of two
  std::uint32_t entries = 1;           // slots per bucket
  std::uint32_t fingerprint_bits = 3;  // 0 encodes empty
  std::uint32_t max_kicks = 500;

  std::uint64_t memory_bits() const {
    return buckets * entries * fingerprint_bits;
  }
  void validate() const;
};

// Cuckoo filter with partial-key displacement, adapted to unbounded
// streams: when the relocation bound is hit the displaced fingerprint is
// silently dropped instead of reporting a full table.
class CuckooFilter final : public DuplicateFilter {
 public:
  CuckooFilter(const CuckooParams& params, std::uint64_t seed);

  Verdict detect(Element e) const override;
  void insert(Element e) override;
  Verdict stream(Element e) override;

  std::vector<std::uint8_t> snapshot() const override;
  std::uint64_t memory_bits() const override { return params_.memory_bits(); }
  std::string describe() const override;

  const CuckooParams& params() const { return params_; }

 private:
  struct Probe {
    std::uint64_t bucket1;
    std::uint64_t bucket2;
    std::uint32_t fp;
  };
  Probe probe(Element e) const;
  std::uint64_t alt_bucket(std::uint64_t bucket, std::uint32_t fp) const {
    return bucket ^ (mix64(fp) & (params_.buckets - 1));
  }
  bool bucket_contains(std::uint64_t b, std::uint32_t fp) const;
  bool try_store(std::uint64_t b, std::uint32_t fp);
  void place(const Probe& p);

  CuckooParams params_;
  std::uint64_t seed_;
  HashFamily hash_;
  SplitMix64 prng_;
  PackedCellTable slots_;
};

}  // namespace qht
