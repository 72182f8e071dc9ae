#include "qht/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qht/hash.hpp"

namespace qht {
namespace adversary {

namespace {

// 16-byte element tagging a (trial, index) pair; range-disjoint across
// trials and across the probing phases of estimate_memory.
struct ProbeElement {
  char bytes[16];
  ProbeElement(std::uint64_t tag, std::uint64_t index) {
    std::memcpy(bytes, &tag, 8);
    std::memcpy(bytes + 8, &index, 8);
  }
  Element view() const { return Element(bytes, 16); }
};

// One attack round: target, flood, replay. True when the replay slipped
// through as UNSEEN.
bool attack_once(const FilterFactory& make, std::uint64_t filter_seed,
                 std::uint64_t tag, std::uint64_t flood) {
  auto filter = make(filter_seed);
  ProbeElement target(tag, 0);
  filter->stream(target.view());
  for (std::uint64_t i = 1; i <= flood; ++i) {
    filter->stream(ProbeElement(tag, i).view());
  }
  return filter->detect(target.view()) == Verdict::kUnseen;
}

}  // namespace

void AttackConfig::validate() const {
  if (flood_factor < 0.0) throw ConfigError("attack: need h >= 0");
  if (trials < 1) throw ConfigError("attack: need trials >= 1");
}

double false_negative_attack(const FilterFactory& make,
                             const AttackConfig& config) {
  config.validate();
  std::uint64_t flood = static_cast<std::uint64_t>(
      std::ceil(config.flood_factor *
                static_cast<double>(config.memory_bits)));
  std::uint32_t hits = 0;
  for (std::uint32_t t = 0; t < config.trials; ++t) {
    std::uint64_t tag = mix64(config.seed ^ (0x5bd1e995u + t));
    hits += attack_once(make, config.seed + t, tag, flood);
  }
  return static_cast<double>(hits) / config.trials;
}

namespace {

double replay_success(const FilterFactory& make, const EstimateOptions& opts,
                      std::uint64_t flood, std::uint64_t salt) {
  std::uint32_t hits = 0;
  for (std::uint32_t t = 0; t < opts.trials_per_probe; ++t) {
    std::uint64_t tag = mix64(opts.seed ^ salt ^ (0x27d4eb2fULL + t));
    hits += attack_once(make, mix64(salt) + t, tag, flood);
  }
  return static_cast<double>(hits) / opts.trials_per_probe;
}

}  // namespace

std::uint64_t estimate_memory(const FilterFactory& make,
                              const EstimateOptions& opts) {
  if (opts.trials_per_probe < 1) {
    throw ConfigError("estimate: need trials_per_probe >= 1");
  }
  const double threshold = 1.0 - std::exp(-1.0);

  // Exponential search for a confirmed crossing.
  std::uint64_t lo = 0, hi = 0;
  std::uint64_t salt = 1;
  for (std::uint64_t flood = 1;; flood *= 2, ++salt) {
    if (flood > opts.max_flood) {
      throw ProbeError("estimate: replay success never crossed the "
                       "saturation threshold; no capacity signal");
    }
    if (replay_success(make, opts, flood, salt) >= threshold &&
        replay_success(make, opts, flood, salt + 1000) >= threshold) {
      hi = flood;
      lo = flood / 2;
      break;
    }
  }
  // Bisect to ~12% resolution; the capacity claim is an order of
  // magnitude, so tighter probing only burns trials.
  while (hi - lo > lo / 8 + 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    ++salt;
    if (replay_success(make, opts, mid, salt + 2000) >= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

KeyedFilter::KeyedFilter(std::unique_ptr<DuplicateFilter> inner,
                         std::array<std::uint64_t, 2> key)
    : inner_(std::move(inner)), key_(key) {}

std::string KeyedFilter::transform(Element e) const {
  // Injective padding: append 0x80, zero-fill to an even length >= 16.
  std::string buf(e);
  buf.push_back('\x80');
  std::size_t target = std::max<std::size_t>(16, buf.size() + (buf.size() & 1));
  buf.resize(target, '\0');

  // Four Feistel rounds over the two halves make the padded block a keyed
  // permutation; round keys come straight from the 128-bit secret. The
  // even round count leaves both halves in their original positions.
  std::size_t half = buf.size() / 2;
  char* left = buf.data();
  char* right = buf.data() + half;
  for (int round = 0; round < 4; ++round) {
    SplitMix64 keystream(siphash24(right, half, key_[0] ^ round, key_[1]));
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < half; ++i) {
      if (i % 8 == 0) word = keystream.next();
      left[i] = static_cast<char>(left[i] ^
                                  static_cast<char>(word >> (8 * (i % 8))));
    }
    std::swap(left, right);
  }
  return buf;
}

Verdict KeyedFilter::detect(Element e) const {
  return inner_->detect(transform(e));
}

void KeyedFilter::insert(Element e) { inner_->insert(transform(e)); }

Verdict KeyedFilter::stream(Element e) { return inner_->stream(transform(e)); }

std::vector<std::uint8_t> KeyedFilter::snapshot() const {
  return inner_->snapshot();
}

std::uint64_t KeyedFilter::memory_bits() const {
  return inner_->memory_bits();
}

std::string KeyedFilter::describe() const {
  return "keyed(" + inner_->describe() + ")";
}

}  // namespace adversary
}  // namespace qht
