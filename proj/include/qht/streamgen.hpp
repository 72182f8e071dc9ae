#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <string>

#include "qht/common.hpp"
#include "qht/hash.hpp"

namespace qht {

// Multi-pass sequence of elements. next() yields a view that stays valid
// until the following call; reset() rewinds to the first element.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual void reset() = 0;
  virtual bool next(Element& out) = 0;
  virtual std::unique_ptr<StreamSource> clone() const = 0;
  virtual std::string describe() const = 0;
};

// n elements drawn i.i.d. uniform from an alphabet of `alphabet` symbols,
// encoded as 8-byte little-endian integers in [0, alphabet). The draw is
// counter-based, so any position can be regenerated independently.
class UniformSource final : public StreamSource {
 public:
  UniformSource(std::uint64_t alphabet, std::uint64_t n, std::uint64_t seed);

  void reset() override { index_ = 0; }
  bool next(Element& out) override;
  std::unique_ptr<StreamSource> clone() const override;
  std::string describe() const override;

  std::uint64_t value_at(std::uint64_t i) const {
    return reduce64(mix64(seed_mixed_ + (i + 1) * 0x9E3779B97F4A7C15ULL),
                    alphabet_);
  }

  std::uint64_t alphabet() const { return alphabet_; }
  std::uint64_t length() const { return n_; }

 private:
  std::uint64_t alphabet_;
  std::uint64_t n_;
  std::uint64_t seed_;
  std::uint64_t seed_mixed_;
  std::uint64_t index_ = 0;
  char buf_[8];
};

// Newline-delimited file ingestion, order-preserving and byte-exact.
// Each pass re-reads the file, so memory stays bounded by one line.
class FileSource final : public StreamSource {
 public:
  explicit FileSource(std::string path, std::size_t max_line = 1u << 16);

  void reset() override;
  bool next(Element& out) override;
  std::unique_ptr<StreamSource> clone() const override;
  std::string describe() const override;

 private:
  std::string path_;
  std::size_t max_line_;
  std::ifstream in_;
  std::string line_;
  std::uint64_t line_no_ = 0;
};

// Expected duplicate fraction of a uniform stream:
// (n - U(1 - (1 - 1/U)^n)) / n.
double expected_duplicates(double alphabet, double n);

}  // namespace qht
