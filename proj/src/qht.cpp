#include "qht/qht.hpp"

#include <algorithm>
#include <array>

#include "qht/semisort.hpp"
#include "qht/snapshot.hpp"

namespace qht {

namespace {

constexpr std::uint32_t kMaxSemisortK = 8;

FilterKind kind_of(QhtVariant v) {
  switch (v) {
    case QhtVariant::kQht: return FilterKind::kQht;
    case QhtVariant::kQhtd: return FilterKind::kQhtd;
    case QhtVariant::kQqhtd: return FilterKind::kQqhtd;
  }
  return FilterKind::kQht;
}

const char* variant_name(QhtVariant v) {
  switch (v) {
    case QhtVariant::kQht: return "qht";
    case QhtVariant::kQhtd: return "qhtd";
    case QhtVariant::kQqhtd: return "qqhtd";
  }
  return "?";
}

const QhtParams& validated(const QhtParams& p, QhtVariant v) {
  p.validate(v);
  return p;
}

}  // namespace

void QhtParams::validate(QhtVariant variant) const {
  if (fingerprint_bits < 1 || fingerprint_bits > 32) {
    throw ConfigError("qht: fingerprint bits must be in [1, 32]");
  }
  if (buckets_per_row < 1) throw ConfigError("qht: need k >= 1");
  if (memory_bits <= std::uint64_t{fingerprint_bits} * buckets_per_row) {
    throw ConfigError("qht: memory must exceed sigma*k bits");
  }
  if (buckets_per_row > cell_states()) {
    throw ConfigError("qht: k cannot exceed 2^sigma");
  }
  if (layout == RowLayout::kSemiSorted) {
    if (variant == QhtVariant::kQqhtd) {
      throw ConfigError("qht: queue variant needs cell order; no semisorting");
    }
    if (buckets_per_row > kMaxSemisortK) {
      throw ConfigError("qht: semisorted layout supports k <= 8");
    }
    semisort::count_states(cell_states(), buckets_per_row);  // overflow check
  }
}

QuotientHashTable::QuotientHashTable(QhtVariant variant,
                                     const QhtParams& params,
                                     std::uint64_t seed)
    : variant_(variant),
      params_(validated(params, variant)),
      seed_(seed),
      hash_(seed, params_.rows(), params_.fingerprint_bits, params_.policy),
      prng_(hash_.make_prng()) {
  std::uint64_t n = params_.rows();
  std::uint32_t k = params_.buckets_per_row;
  if (params_.layout == RowLayout::kPacked) {
    cells_ = PackedCellTable(n, k, params_.fingerprint_bits);
  } else {
    multiset_symbols_ = params_.cell_states();
    cells_ =
        PackedCellTable(n, 1, semisort::encoded_bits(multiset_symbols_, k));
  }
}

// Eviction victim: the j-th cell in (value, column) order for a uniform
// draw j. Selecting by sorted position is still uniform over the k cells
// and keeps the packed and semisorted layouts on identical state
// trajectories for identical PRNG draws.
std::uint32_t QuotientHashTable::packed_jth_by_value(std::uint64_t row,
                                                     std::uint32_t j) const {
  std::uint32_t k = params_.buckets_per_row;
  for (std::uint32_t c = 0; c < k; ++c) {
    std::uint64_t vc = cells_.get(row, c);
    std::uint32_t rank = 0;
    for (std::uint32_t d = 0; d < k; ++d) {
      if (d == c) continue;
      std::uint64_t vd = cells_.get(row, d);
      if (vd < vc || (vd == vc && d < c)) ++rank;
    }
    if (rank == j) return c;
  }
  return k - 1;  // unreachable
}

// Packed one-pass row update. `may_insert` is false when a duplicate
// verdict suppresses the insertion (plain QHT).
Verdict QuotientHashTable::packed_update(std::uint64_t row, std::uint32_t fp,
                                         bool may_insert) {
  const std::uint32_t k = params_.buckets_per_row;
  std::uint32_t empty_col = k;
  bool dup = false;
  for (std::uint32_t c = 0; c < k; ++c) {
    std::uint64_t v = cells_.get(row, c);
    if (v == fp) {
      dup = true;
      if (!may_insert) return Verdict::kDuplicate;
    } else if (v == 0 && empty_col == k) {
      empty_col = c;
    }
  }
  if (dup && !may_insert) return Verdict::kDuplicate;
  std::uint32_t target;
  if (empty_col < k) {
    target = empty_col;
  } else if (k == 1) {
    target = 0;  // a uniform draw over one cell needs no PRNG step
  } else {
    target = packed_jth_by_value(row,
                                 static_cast<std::uint32_t>(prng_.below(k)));
  }
  cells_.set(row, target, fp);
  return dup ? Verdict::kDuplicate : Verdict::kUnseen;
}

Verdict QuotientHashTable::sorted_update(std::uint64_t row, std::uint32_t fp,
                                         bool may_insert) {
  const std::uint32_t k = params_.buckets_per_row;
  std::array<std::uint32_t, kMaxSemisortK> vals;
  semisort::decode_row_into(cells_.get(row, 0), multiset_symbols_, k,
                            vals.data());
  bool dup = false;
  for (std::uint32_t c = 0; c < k; ++c) dup |= vals[c] == fp;
  if (dup && !may_insert) return Verdict::kDuplicate;
  std::uint32_t target;
  if (vals[0] == 0) {
    target = 0;  // sorted ascending, so empties sit at the front
  } else if (k == 1) {
    target = 0;
  } else {
    target = static_cast<std::uint32_t>(prng_.below(k));
  }
  vals[target] = fp;
  std::sort(vals.begin(), vals.begin() + k);
  cells_.set(row, 0,
             semisort::encode_sorted_row({vals.data(), k}, multiset_symbols_));
  return dup ? Verdict::kDuplicate : Verdict::kUnseen;
}

Verdict QuotientHashTable::queue_update(std::uint64_t row, std::uint32_t fp) {
  const std::uint32_t k = params_.buckets_per_row;
  bool dup = false;
  for (std::uint32_t c = 0; c < k; ++c) dup |= cells_.get(row, c) == fp;
  // Oldest slot popped, fingerprint appended at the tail, unconditionally.
  for (std::uint32_t c = 0; c + 1 < k; ++c) {
    cells_.set(row, c, cells_.get(row, c + 1));
  }
  cells_.set(row, k - 1, fp);
  return dup ? Verdict::kDuplicate : Verdict::kUnseen;
}

bool QuotientHashTable::row_contains(std::uint64_t row,
                                     std::uint32_t fp) const {
  const std::uint32_t k = params_.buckets_per_row;
  if (params_.layout == RowLayout::kPacked) [[likely]] {
    for (std::uint32_t c = 0; c < k; ++c) {
      if (cells_.get(row, c) == fp) return true;
    }
    return false;
  }
  std::array<std::uint32_t, kMaxSemisortK> vals;
  semisort::decode_row_into(cells_.get(row, 0), multiset_symbols_, k,
                            vals.data());
  for (std::uint32_t c = 0; c < k; ++c) {
    if (vals[c] == fp) return true;
  }
  return false;
}

Verdict QuotientHashTable::apply(std::uint64_t row, std::uint32_t fp) {
  switch (variant_) {
    case QhtVariant::kQht:
      if (params_.layout == RowLayout::kPacked) [[likely]] {
        return packed_update(row, fp, /*may_insert=*/false);
      }
      return sorted_update(row, fp, /*may_insert=*/false);
    case QhtVariant::kQhtd:
      if (params_.layout == RowLayout::kPacked) [[likely]] {
        return packed_update(row, fp, /*may_insert=*/true);
      }
      return sorted_update(row, fp, /*may_insert=*/true);
    case QhtVariant::kQqhtd:
      return queue_update(row, fp);
  }
  return Verdict::kUnseen;  // unreachable
}

Verdict QuotientHashTable::detect(Element e) const {
  std::uint64_t d = hash_.digest(e);
  return row_contains(hash_.row_of(d), hash_.fingerprint_of(d))
             ? Verdict::kDuplicate
             : Verdict::kUnseen;
}

void QuotientHashTable::insert(Element e) {
  std::uint64_t d = hash_.digest(e);
  apply(hash_.row_of(d), hash_.fingerprint_of(d));
}

Verdict QuotientHashTable::stream(Element e) {
  std::uint64_t d = hash_.digest(e);
  return apply(hash_.row_of(d), hash_.fingerprint_of(d));
}

std::uint64_t QuotientHashTable::cell(std::uint64_t row,
                                      std::uint32_t col) const {
  if (params_.layout == RowLayout::kPacked) return cells_.get(row, col);
  std::array<std::uint32_t, kMaxSemisortK> vals;
  semisort::decode_row_into(cells_.get(row, 0), multiset_symbols_,
                            params_.buckets_per_row, vals.data());
  return vals[col];
}

std::vector<std::uint8_t> QuotientHashTable::snapshot() const {
  SnapshotWriter w;
  w.header(kind_of(variant_), params_.memory_bits, params_.fingerprint_bits,
           params_.buckets_per_row, params_.rows(), seed_);
  cells_.append_payload(w.bytes);
  return w.bytes;
}

std::string QuotientHashTable::describe() const {
  std::string s = variant_name(variant_);
  s += "(M=" + std::to_string(params_.memory_bits);
  s += " sigma=" + std::to_string(params_.fingerprint_bits);
  s += " k=" + std::to_string(params_.buckets_per_row);
  if (params_.layout == RowLayout::kSemiSorted) s += " semisort";
  s += ")";
  return s;
}

}  // namespace qht
