#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qht/filter.hpp"
#include "qht/hash.hpp"
#include "qht/packed_table.hpp"

namespace qht {

struct SqfParams {
  std::uint32_t quotient_bits = 8;   // q; rows = 2^q
  std::uint32_t remainder_bits = 2;  // r
  std::uint32_t reduced_bits = 1;    // r' < r
  std::uint32_t buckets_per_row = 1;

  // Cell width: reduced remainder bits plus the Hamming-weight field.
  std::uint32_t cell_bits() const;

  // Number of distinct reachable fingerprints: 2^r' * (r - r' + 1).
  std::uint64_t fingerprint_count() const;

  std::uint64_t rows() const { return std::uint64_t{1} << quotient_bits; }
  std::uint64_t memory_bits() const {
    return rows() * buckets_per_row * cell_bits();
  }

  void validate() const;
};

// Streaming quotient filter: the fingerprint of an element is the r'
// least-significant bits of its r-bit hash remainder, concatenated with
// the remainder's Hamming weight. The row is the q most-significant bits
// of the (q+r)-bit hash.
class StreamingQuotientFilter final : public DuplicateFilter {
 public:
  StreamingQuotientFilter(const SqfParams& params, std::uint64_t seed);

  Verdict detect(Element e) const override;
  void insert(Element e) override;
  Verdict stream(Element e) override;

  std::vector<std::uint8_t> snapshot() const override;
  std::uint64_t memory_bits() const override { return params_.memory_bits(); }
  std::string describe() const override;

  const SqfParams& params() const { return params_; }

  // Fingerprint of an r-bit remainder value (implementation path for the
  // brute-force enumeration checks).
  std::uint32_t fingerprint_of_remainder(std::uint64_t remainder) const;

  // Cell encoding standing for "empty". When some sigma-bit pattern is
  // unreachable the smallest such pattern is used; otherwise fingerprints
  // are re-derived away from 0 and 0 encodes empty.
  std::uint32_t empty_code() const { return empty_code_; }
  bool rederives_empty() const { return rederive_; }

  std::uint64_t cell(std::uint64_t row, std::uint32_t col) const {
    return cells_.get(row, col);
  }

 private:
  struct Probe {
    std::uint64_t row;
    std::uint32_t fp;
  };
  Probe probe(Element e) const;
  bool row_contains(std::uint64_t row, std::uint32_t fp) const;
  Verdict apply(std::uint64_t row, std::uint32_t fp);

  SqfParams params_;
  std::uint64_t seed_;
  std::uint64_t digest_seed_;
  SplitMix64 prng_;
  PackedCellTable cells_;
  std::uint32_t weight_bits_;
  std::uint64_t remainder_mask_;
  std::uint64_t reduced_mask_;
  std::uint32_t empty_code_;
  bool rederive_;
};

}  // namespace qht
