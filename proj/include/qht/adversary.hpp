#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "qht/filter.hpp"

namespace qht {
namespace adversary {

struct AttackConfig {
  std::uint64_t memory_bits = 0;  // attacker's estimate of the filter size
  double flood_factor = 1.0;      // h: flood length = ceil(h * memory_bits)
  std::uint32_t trials = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

// False-negative attack: per trial, insert a target, flood the filter
// with ceil(h*M) fresh unique elements, replay the target. A trial
// succeeds when the replay is answered UNSEEN. Trials use disjoint
// element ranges and fresh filter instances; returns the success
// fraction.
double false_negative_attack(const FilterFactory& make,
                             const AttackConfig& config);

struct EstimateOptions {
  std::uint32_t trials_per_probe = 64;
  std::uint64_t max_flood = std::uint64_t{1} << 26;
  std::uint64_t seed = 0;
};

// Estimates filter capacity by searching for the flood length at which
// replay success crosses 1 - 1/e. Crossings are confirmed with a second
// independent batch so answer-at-random filters are reported as
// non-converging (ProbeError) instead of yielding a bogus figure.
std::uint64_t estimate_memory(const FilterFactory& make,
                              const EstimateOptions& opts = {});

// Wraps a filter behind a keyed wide-block permutation of the element
// bytes. Adaptive adversaries lose the ability to craft hash collisions;
// verdict statistics on non-adaptive streams are unchanged.
class KeyedFilter final : public DuplicateFilter {
 public:
  KeyedFilter(std::unique_ptr<DuplicateFilter> inner,
              std::array<std::uint64_t, 2> key);

  Verdict detect(Element e) const override;
  void insert(Element e) override;
  Verdict stream(Element e) override;
  std::vector<std::uint8_t> snapshot() const override;
  std::uint64_t memory_bits() const override;
  std::string describe() const override;

  // The permuted image of an element (exposed for tests).
  std::string transform(Element e) const;

 private:
  std::unique_ptr<DuplicateFilter> inner_;
  std::array<std::uint64_t, 2> key_;
};

}  // namespace adversary
}  // namespace qht
