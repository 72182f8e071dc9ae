#include "qht/sqf.hpp"

#include <bit>

#include "qht/snapshot.hpp"

namespace qht {

namespace {

std::uint32_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(x - 1));
}

}  // namespace

std::uint32_t SqfParams::cell_bits() const {
  return reduced_bits + ceil_log2(std::uint64_t{remainder_bits} + 1);
}

std::uint64_t SqfParams::fingerprint_count() const {
  return (std::uint64_t{1} << reduced_bits) *
         (remainder_bits - reduced_bits + 1);
}

void SqfParams::validate() const {
  if (remainder_bits < 1 || remainder_bits > 32) {
    throw ConfigError("sqf: remainder bits must be in [1, 32]");
  }
  if (reduced_bits >= remainder_bits) {
    throw ConfigError("sqf: need r' < r");
  }
  if (buckets_per_row < 1) throw ConfigError("sqf: need k >= 1");
  if (quotient_bits + remainder_bits > 64) {
    throw ConfigError("sqf: q + r cannot exceed 64 bits");
  }
  if (cell_bits() > 32) throw ConfigError("sqf: cell width exceeds 32 bits");
}

StreamingQuotientFilter::StreamingQuotientFilter(const SqfParams& params,
                                                 std::uint64_t seed)
    : params_(params),
      seed_(seed),
      digest_seed_(mix64(seed ^ 0x452821e638d01377ULL)),
      prng_(SplitMix64(mix64(seed ^ 0xbe5466cf34e90c6cULL))),
      weight_bits_(ceil_log2(std::uint64_t{params.remainder_bits} + 1)),
      remainder_mask_((std::uint64_t{1} << params.remainder_bits) - 1),
      reduced_mask_((std::uint64_t{1} << params.reduced_bits) - 1) {
  params_.validate();
  cells_ = PackedCellTable(params_.rows(), params_.buckets_per_row,
                           params_.cell_bits());
  // Find the smallest cell pattern no remainder can produce: with the
  // reduced bits fixed, the weight can only fall in
  // [popcount(reduced), popcount(reduced) + r - r'].
  const std::uint32_t sigma = params_.cell_bits();
  const std::uint32_t span = params_.remainder_bits - params_.reduced_bits;
  rederive_ = true;
  empty_code_ = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << sigma); ++code) {
    std::uint32_t w = static_cast<std::uint32_t>(code) & ((1u << weight_bits_) - 1);
    std::uint32_t reduced = static_cast<std::uint32_t>(code >> weight_bits_);
    std::uint32_t base = static_cast<std::uint32_t>(std::popcount(reduced));
    bool reachable =
        w <= params_.remainder_bits && w >= base && w <= base + span;
    if (!reachable) {
      empty_code_ = static_cast<std::uint32_t>(code);
      rederive_ = false;
      break;
    }
  }
  if (empty_code_ != 0) {
    // Pattern 0 is a reachable fingerprint here; cells must start at the
    // chosen empty encoding instead.
    for (std::uint64_t row = 0; row < params_.rows(); ++row) {
      for (std::uint32_t c = 0; c < params_.buckets_per_row; ++c) {
        cells_.set(row, c, empty_code_);
      }
    }
  }
}

std::uint32_t StreamingQuotientFilter::fingerprint_of_remainder(
    std::uint64_t remainder) const {
  remainder &= remainder_mask_;
  std::uint32_t w = static_cast<std::uint32_t>(std::popcount(remainder));
  std::uint32_t reduced =
      static_cast<std::uint32_t>(remainder & reduced_mask_);
  return (reduced << weight_bits_) | w;
}

StreamingQuotientFilter::Probe StreamingQuotientFilter::probe(
    Element e) const {
  std::uint64_t d = hash64(e, digest_seed_);
  std::uint32_t q = params_.quotient_bits;
  std::uint32_t r = params_.remainder_bits;
  std::uint64_t row = q == 0 ? 0 : d >> (64 - q);
  std::uint64_t rem = (d >> (64 - q - r)) & remainder_mask_;
  std::uint32_t fp = fingerprint_of_remainder(rem);
  if (rederive_) {
    // All patterns are reachable, so 0 stands for empty and fingerprints
    // are re-derived away from it by chaining the digest.
    for (int round = 0; fp == empty_code_; ++round) {
      if (round == 64) {
        throw std::logic_error("sqf fingerprint re-derivation failed");
      }
      d = mix64(d);
      fp = fingerprint_of_remainder(d & remainder_mask_);
    }
  }
  return {row, fp};
}

bool StreamingQuotientFilter::row_contains(std::uint64_t row,
                                           std::uint32_t fp) const {
  for (std::uint32_t c = 0; c < params_.buckets_per_row; ++c) {
    if (cells_.get(row, c) == fp) return true;
  }
  return false;
}

// One-pass scan and update; no insertion on a duplicate verdict.
Verdict StreamingQuotientFilter::apply(std::uint64_t row, std::uint32_t fp) {
  const std::uint32_t k = params_.buckets_per_row;
  std::uint32_t empty_col = k;
  for (std::uint32_t c = 0; c < k; ++c) {
    std::uint64_t v = cells_.get(row, c);
    if (v == fp) return Verdict::kDuplicate;
    if (v == empty_code_ && empty_col == k) empty_col = c;
  }
  std::uint32_t target;
  if (empty_col < k) {
    target = empty_col;
  } else if (k == 1) {
    target = 0;
  } else {
    target = static_cast<std::uint32_t>(prng_.below(k));
  }
  cells_.set(row, target, fp);
  return Verdict::kUnseen;
}

Verdict StreamingQuotientFilter::detect(Element e) const {
  Probe p = probe(e);
  return row_contains(p.row, p.fp) ? Verdict::kDuplicate : Verdict::kUnseen;
}

void StreamingQuotientFilter::insert(Element e) {
  Probe p = probe(e);
  apply(p.row, p.fp);
}

Verdict StreamingQuotientFilter::stream(Element e) {
  Probe p = probe(e);
  return apply(p.row, p.fp);
}

std::vector<std::uint8_t> StreamingQuotientFilter::snapshot() const {
  SnapshotWriter w;
  w.header(FilterKind::kSqf, params_.memory_bits(), params_.cell_bits(),
           params_.buckets_per_row, params_.rows(), seed_);
  w.u32(params_.quotient_bits);
  w.u32(params_.remainder_bits);
  w.u32(params_.reduced_bits);
  cells_.append_payload(w.bytes);
  return w.bytes;
}

std::string StreamingQuotientFilter::describe() const {
  return "sqf(q=" + std::to_string(params_.quotient_bits) +
         " r=" + std::to_string(params_.remainder_bits) +
         " r'=" + std::to_string(params_.reduced_bits) +
         " k=" + std::to_string(params_.buckets_per_row) + ")";
}

}  // namespace qht
