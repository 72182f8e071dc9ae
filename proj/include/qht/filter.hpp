#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qht/common.hpp"

namespace qht {

// Duplicate-detection filter contract. detect never mutates state and
// stream(e) answers exactly what detect(e) would have answered on the
// pre-insertion state. Instances are single-writer; no internal sharing.
class DuplicateFilter {
 public:
  virtual ~DuplicateFilter() = default;

  virtual Verdict detect(Element e) const = 0;
  virtual void insert(Element e) = 0;

  // Detect-then-insert in one call. Overridden with a fused scan where it
  // matters; the composition semantics are differential-tested.
  virtual Verdict stream(Element e) {
    Verdict v = detect(e);
    insert(e);
    return v;
  }

  // Full state: fixed-width little-endian header followed by the packed
  // cell payload. Byte-identical for identical (seed, stream) histories.
  virtual std::vector<std::uint8_t> snapshot() const = 0;

  // Bit budget of the cell payload (excludes fixed metadata).
  virtual std::uint64_t memory_bits() const = 0;

  virtual std::string describe() const = 0;
};

using FilterFactory =
    std::function<std::unique_ptr<DuplicateFilter>(std::uint64_t seed)>;

}  // namespace qht
