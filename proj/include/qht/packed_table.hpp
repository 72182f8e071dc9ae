#pragma once

#include <cstdint>
#include <vector>

#include "qht/common.hpp"

namespace qht {

// Fixed-size grid of cells packed at exact bit granularity, row-major.
// The cell width does not need to divide the machine word; packing is
// exact so the table payload never exceeds its bit budget.
class PackedCellTable {
 public:
  PackedCellTable() = default;

  PackedCellTable(std::uint64_t rows, std::uint32_t cols,
                  std::uint32_t cell_bits)
      : rows_(rows), cols_(cols), bits_(cell_bits) {
    if (cell_bits < 1 || cell_bits > 57) {
      throw ConfigError("packed table: cell width must be in [1, 57] bits");
    }
    mask_ = (std::uint64_t{1} << bits_) - 1;
    std::uint64_t total_bits = rows_ * cols_ * bits_;
    words_.assign((total_bits + 63) / 64, 0);
  }

  std::uint64_t get(std::uint64_t row, std::uint32_t col) const {
    return cell_get(row * cols_ + col);
  }

  void set(std::uint64_t row, std::uint32_t col, std::uint64_t value) {
    cell_set(row * cols_ + col, value);
  }

  std::uint64_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::uint32_t cell_bits() const { return bits_; }
  std::uint64_t payload_bits() const { return rows_ * cols_ * bits_; }

  // Appends exactly ceil(payload_bits/8) bytes, little-endian bit order.
  void append_payload(std::vector<std::uint8_t>& out) const {
    std::uint64_t bytes = (payload_bits() + 7) / 8;
    out.reserve(out.size() + bytes);
    for (std::uint64_t i = 0; i < bytes; ++i) {
      out.push_back(static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8))));
    }
  }

  bool operator==(const PackedCellTable&) const = default;

 private:
  std::uint64_t cell_get(std::uint64_t idx) const {
    std::uint64_t bit = idx * bits_;
    std::uint64_t word = bit >> 6;
    unsigned off = static_cast<unsigned>(bit & 63);
    std::uint64_t v = words_[word] >> off;
    if (off + bits_ > 64) v |= words_[word + 1] << (64 - off);
    return v & mask_;
  }

  void cell_set(std::uint64_t idx, std::uint64_t value) {
    value &= mask_;
    std::uint64_t bit = idx * bits_;
    std::uint64_t word = bit >> 6;
    unsigned off = static_cast<unsigned>(bit & 63);
    words_[word] = (words_[word] & ~(mask_ << off)) | (value << off);
    if (off + bits_ > 64) {
      unsigned spill = 64 - off;
      words_[word + 1] =
          (words_[word + 1] & ~(mask_ >> spill)) | (value >> spill);
    }
  }

  std::uint64_t rows_ = 0;
  std::uint32_t cols_ = 0;
  std::uint32_t bits_ = 0;
  std::uint64_t mask_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace qht
