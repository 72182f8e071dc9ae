#include "qht/baselines.hpp"

#include <bit>

#include "qht/snapshot.hpp"

namespace qht {

void SbfParams::validate() const {
  if (cells < 1) throw ConfigError("sbf: need at least one cell");
  if (cell_bits < 1 || cell_bits > 16) {
    throw ConfigError("sbf: cell bits must be in [1, 16]");
  }
  if (hash_count < 1 || hash_count > 16) {
    throw ConfigError("sbf: hash count must be in [1, 16]");
  }
  if (decrements < 1) throw ConfigError("sbf: need P >= 1");
}

StableBloomFilter::StableBloomFilter(const SbfParams& params,
                                     std::uint64_t seed)
    : params_(params),
      seed_(seed),
      prng_(SplitMix64(mix64(seed ^ 0x082efa98ec4e6c89ULL))) {
  params_.validate();
  for (std::uint32_t i = 0; i < params_.hash_count; ++i) {
    probe_seeds_[i] = mix64(seed + 0x9E3779B97F4A7C15ULL * (i + 1));
  }
  counters_ = PackedCellTable(params_.cells, 1, params_.cell_bits);
}

void StableBloomFilter::probe(Element e, std::uint64_t* idx) const {
  for (std::uint32_t i = 0; i < params_.hash_count; ++i) {
    idx[i] = reduce64(hash64(e, probe_seeds_[i]), params_.cells);
  }
}

void StableBloomFilter::update(const std::uint64_t* idx) {
  for (std::uint32_t i = 0; i < params_.decrements; ++i) {
    std::uint64_t c = prng_.below(params_.cells);
    std::uint64_t v = counters_.get(c, 0);
    if (v > 0) counters_.set(c, 0, v - 1);
  }
  for (std::uint32_t i = 0; i < params_.hash_count; ++i) {
    counters_.set(idx[i], 0, params_.max_value());
  }
}

Verdict StableBloomFilter::detect(Element e) const {
  std::uint64_t idx[kMaxHashes];
  probe(e, idx);
  for (std::uint32_t i = 0; i < params_.hash_count; ++i) {
    if (counters_.get(idx[i], 0) == 0) return Verdict::kUnseen;
  }
  return Verdict::kDuplicate;
}

void StableBloomFilter::insert(Element e) {
  std::uint64_t idx[kMaxHashes];
  probe(e, idx);
  update(idx);
}

Verdict StableBloomFilter::stream(Element e) {
  std::uint64_t idx[kMaxHashes];
  probe(e, idx);
  Verdict v = Verdict::kDuplicate;
  for (std::uint32_t i = 0; i < params_.hash_count; ++i) {
    if (counters_.get(idx[i], 0) == 0) {
      v = Verdict::kUnseen;
      break;
    }
  }
  update(idx);
  return v;
}

std::vector<std::uint8_t> StableBloomFilter::snapshot() const {
  SnapshotWriter w;
  w.header(FilterKind::kSbf, params_.memory_bits(), params_.cell_bits,
           params_.hash_count, params_.cells, seed_);
  w.u32(params_.decrements);
  counters_.append_payload(w.bytes);
  return w.bytes;
}

std::string StableBloomFilter::describe() const {
  return "sbf(cells=" + std::to_string(params_.cells) +
         " d=" + std::to_string(params_.cell_bits) +
         " K=" + std::to_string(params_.hash_count) +
         " P=" + std::to_string(params_.decrements) + ")";
}

void CuckooParams::validate() const {
  if (buckets < 1 || !std::has_single_bit(buckets)) {
    throw ConfigError("cuckoo: bucket count must be a power of two");
  }
  if (entries < 1) throw ConfigError("cuckoo: need entries >= 1");
  if (fingerprint_bits < 1 || fingerprint_bits > 32) {
    throw ConfigError("cuckoo: fingerprint bits must be in [1, 32]");
  }
}

CuckooFilter::CuckooFilter(const CuckooParams& params, std::uint64_t seed)
    : params_(params),
      seed_(seed),
      hash_(seed, params.buckets ? params.buckets : 1,
            params.fingerprint_bits, EmptyCellPolicy::kRederiveWhileZero),
      prng_(SplitMix64(mix64(seed ^ 0xfd955cb1e8d635dbULL))) {
  params_.validate();
  slots_ = PackedCellTable(params_.buckets, params_.entries,
                           params_.fingerprint_bits);
}

CuckooFilter::Probe CuckooFilter::probe(Element e) const {
  std::uint64_t d = hash_.digest(e);
  std::uint64_t b1 = hash_.row_of(d);
  std::uint32_t fp = hash_.fingerprint_of(d);
  return {b1, alt_bucket(b1, fp), fp};
}

bool CuckooFilter::bucket_contains(std::uint64_t b, std::uint32_t fp) const {
  for (std::uint32_t s = 0; s < params_.entries; ++s) {
    if (slots_.get(b, s) == fp) return true;
  }
  return false;
}

bool CuckooFilter::try_store(std::uint64_t b, std::uint32_t fp) {
  for (std::uint32_t s = 0; s < params_.entries; ++s) {
    if (slots_.get(b, s) == 0) {
      slots_.set(b, s, fp);
      return true;
    }
  }
  return false;
}

void CuckooFilter::place(const Probe& p) {
  if (try_store(p.bucket1, p.fp) || try_store(p.bucket2, p.fp)) return;
  std::uint64_t b = (prng_.next() & 1) ? p.bucket2 : p.bucket1;
  std::uint32_t fp = p.fp;
  for (std::uint32_t kick = 0; kick < params_.max_kicks; ++kick) {
    std::uint32_t s = static_cast<std::uint32_t>(prng_.below(params_.entries));
    std::uint32_t displaced = static_cast<std::uint32_t>(slots_.get(b, s));
    slots_.set(b, s, fp);
    fp = displaced;
    b = alt_bucket(b, fp);
    if (try_store(b, fp)) return;
  }
  // Relocation budget exhausted: drop the displaced fingerprint.
}

Verdict CuckooFilter::detect(Element e) const {
  Probe p = probe(e);
  return (bucket_contains(p.bucket1, p.fp) || bucket_contains(p.bucket2, p.fp))
             ? Verdict::kDuplicate
             : Verdict::kUnseen;
}

void CuckooFilter::insert(Element e) { place(probe(e)); }

Verdict CuckooFilter::stream(Element e) {
  Probe p = probe(e);
  Verdict v =
      (bucket_contains(p.bucket1, p.fp) || bucket_contains(p.bucket2, p.fp))
          ? Verdict::kDuplicate
          : Verdict::kUnseen;
  place(p);
  return v;
}

std::vector<std::uint8_t> CuckooFilter::snapshot() const {
  SnapshotWriter w;
  w.header(FilterKind::kCuckoo, params_.memory_bits(),
           params_.fingerprint_bits, params_.entries, params_.buckets, seed_);
  w.u32(params_.max_kicks);
  slots_.append_payload(w.bytes);
  return w.bytes;
}

std::string CuckooFilter::describe() const {
  return "cuckoo(buckets=" + std::to_string(params_.buckets) +
         " entries=" + std::to_string(params_.entries) +
         " fp_bits=" + std::to_string(params_.fingerprint_bits) +
         " kicks=" + std::to_string(params_.max_kicks) + ")";
}

}  // namespace qht
