#include "qht/streamgen.hpp"

#include <cmath>
#include <cstring>

namespace qht {

UniformSource::UniformSource(std::uint64_t alphabet, std::uint64_t n,
                             std::uint64_t seed)
    : alphabet_(alphabet),
      n_(n),
      seed_(seed),
      seed_mixed_(mix64(seed ^ 0xc0ac29b7c97c50ddULL)) {
  if (alphabet < 1) throw ConfigError("uniform stream: need alphabet >= 1");
}

bool UniformSource::next(Element& out) {
  if (index_ >= n_) return false;
  std::uint64_t v = value_at(index_++);
  std::memcpy(buf_, &v, 8);  // little-endian on every supported target
  out = Element(buf_, 8);
  return true;
}

std::unique_ptr<StreamSource> UniformSource::clone() const {
  return std::make_unique<UniformSource>(alphabet_, n_, seed_);
}

std::string UniformSource::describe() const {
  return "uniform(U=" + std::to_string(alphabet_) +
         ";n=" + std::to_string(n_) + ";seed=" + std::to_string(seed_) + ")";
}

FileSource::FileSource(std::string path, std::size_t max_line)
    : path_(std::move(path)), max_line_(max_line) {
  reset();
}

void FileSource::reset() {
  in_ = std::ifstream(path_, std::ios::binary);
  if (!in_) throw IoError("cannot open " + path_);
  line_no_ = 0;
}

bool FileSource::next(Element& out) {
  if (!std::getline(in_, line_)) {
    if (in_.bad()) throw IoError("read error on " + path_);
    return false;
  }
  ++line_no_;
  if (line_.size() > max_line_) {
    throw IoError(path_ + ": line " + std::to_string(line_no_) +
                  " exceeds the " + std::to_string(max_line_) +
                  "-byte cap");
  }
  out = Element(line_);
  return true;
}

std::unique_ptr<StreamSource> FileSource::clone() const {
  return std::make_unique<FileSource>(path_, max_line_);
}

std::string FileSource::describe() const { return "file:" + path_; }

double expected_duplicates(double alphabet, double n) {
  if (alphabet < 1.0 || n < 0.0) {
    throw ConfigError("expected_duplicates: need U >= 1 and n >= 0");
  }
  if (n == 0.0) return 0.0;
  // U(1 - (1-1/U)^n) distinct values expected among n draws.
  double distinct = alphabet * -std::expm1(n * std::log1p(-1.0 / alphabet));
  if (alphabet == 1.0) distinct = 1.0;
  return (n - distinct) / n;
}

}  // namespace qht
