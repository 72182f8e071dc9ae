#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qht {

// Opaque byte-string fed to filters. Equality is byte-wise; the empty
// string is a legal element. Filters never retain the referenced bytes.
using Element = std::string_view;

enum class Verdict : std::uint8_t { kUnseen = 0, kDuplicate = 1 };

inline const char* to_string(Verdict v) {
  return v == Verdict::kDuplicate ? "DUPLICATE" : "UNSEEN";
}

// Invalid or inconsistent configuration, detected before any work runs.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem or stream failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A probing procedure failed to converge (no capacity signal).
struct ProbeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qht
