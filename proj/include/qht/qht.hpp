#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qht/filter.hpp"
#include "qht/hash.hpp"
#include "qht/packed_table.hpp"

namespace qht {

enum class QhtVariant : std::uint8_t {
  kQht,    // no insertion on DUPLICATE; row cells pairwise distinct
  kQhtd,   // inserts on DUPLICATE too; duplicate fingerprints may coexist
  kQqhtd,  // rows are FIFO queues of k slots, shifted on every stream call
};

enum class RowLayout : std::uint8_t {
  kPacked,      // k cells of sigma bits per row
  kSemiSorted,  // row stored as the rank of its fingerprint multiset
};

struct QhtParams {
  std::uint64_t memory_bits = 0;
  std::uint32_t fingerprint_bits = 0;  // sigma
  std::uint32_t buckets_per_row = 1;   // k
  EmptyCellPolicy policy = EmptyCellPolicy::kRederiveWhileZero;
  RowLayout layout = RowLayout::kPacked;

  std::uint64_t rows() const {
    return memory_bits /
           (std::uint64_t{buckets_per_row} * fingerprint_bits);
  }

  // Cell-state count S = 2^sigma. The policy decides how many of these
  // states an element's fingerprint can actually take (all S when 0 is a
  // fingerprint, S - 1 when 0 is reserved for empty).
  std::uint64_t cell_states() const {
    return std::uint64_t{1} << fingerprint_bits;
  }

  std::uint64_t usable_fingerprints() const {
    return policy == EmptyCellPolicy::kZeroIsFingerprint ? cell_states()
                                                         : cell_states() - 1;
  }

  void validate(QhtVariant variant) const;
};

class QuotientHashTable final : public DuplicateFilter {
 public:
  QuotientHashTable(QhtVariant variant, const QhtParams& params,
                    std::uint64_t seed);

  Verdict detect(Element e) const override;
  void insert(Element e) override;
  Verdict stream(Element e) override;

  std::vector<std::uint8_t> snapshot() const override;
  std::uint64_t memory_bits() const override { return params_.memory_bits; }
  std::string describe() const override;

  QhtVariant variant() const { return variant_; }
  const QhtParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  const HashFamily& hash_family() const { return hash_; }

  // Cell value at (row, col); semisorted rows are reported in sorted
  // order. Exposed for tests and tooling.
  std::uint64_t cell(std::uint64_t row, std::uint32_t col) const;

 private:
  bool row_contains(std::uint64_t row, std::uint32_t fp) const;
  // Verdict plus the variant's state update, one row pass.
  Verdict apply(std::uint64_t row, std::uint32_t fp);
  Verdict packed_update(std::uint64_t row, std::uint32_t fp, bool may_insert);
  Verdict sorted_update(std::uint64_t row, std::uint32_t fp, bool may_insert);
  Verdict queue_update(std::uint64_t row, std::uint32_t fp);
  std::uint32_t packed_jth_by_value(std::uint64_t row, std::uint32_t j) const;

  QhtVariant variant_;
  QhtParams params_;
  std::uint64_t seed_;
  HashFamily hash_;
  SplitMix64 prng_;
  PackedCellTable cells_;
  // Semisorted layout only.
  std::uint64_t multiset_symbols_ = 0;
};

}  // namespace qht
