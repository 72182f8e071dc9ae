#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qht/filter.hpp"
#include "qht/hash.hpp"
#include "qht/qht.hpp"
#include "qht/streamgen.hpp"

namespace qht {
namespace bench {

// Exact first-occurrence classification of a stream. The harness, unlike
// the filters, is not memory-constrained, so it may hold every distinct
// element.
struct GroundTruth {
  std::vector<bool> is_duplicate;
  std::uint64_t n = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t distinct = 0;

  std::uint64_t unseen() const { return n - duplicates; }
  static GroundTruth build(StreamSource& source);
};

struct FilterSpec {
  std::string kind = "qht";  // qht | qhtd | qqhtd | sqf | sbf | cuckoo
  std::uint64_t memory_bits = 0;
  std::uint32_t k = 1;
  std::uint32_t sigma = 3;  // qht fingerprint / sbf cell / cuckoo fp bits
  std::uint32_t r = 2;      // sqf
  std::uint32_t rprime = 1; // sqf
  bool semisort = false;
  EmptyCellPolicy policy = EmptyCellPolicy::kRederiveWhileZero;
  std::uint32_t sbf_decrements = 7;
  std::uint32_t cuckoo_kicks = 500;

  // Key=value list for the CSV extra_params column.
  std::string extra_params() const;
};

std::unique_ptr<DuplicateFilter> make_filter(const FilterSpec& spec,
                                             std::uint64_t seed);

struct StreamSpec {
  bool is_file = false;
  std::string path;
  std::uint64_t alphabet = 1u << 20;
  std::uint64_t length = 100000;

  std::unique_ptr<StreamSource> open(std::uint64_t seed) const;
};

struct ErrorReport {
  std::string filter;       // requested id
  std::string variant;      // structural tag
  std::uint64_t memory_bits = 0;
  std::uint32_t k = 0;
  std::uint32_t sigma = 0;
  std::string extra_params;
  std::string stream;
  double duplicate_pct = 0.0;
  std::uint32_t runs = 0;
  // Counts are arithmetic means over runs; n and duplicates are stream
  // properties shared by every run.
  std::uint64_t n = 0;
  std::uint64_t duplicates = 0;
  double false_positives = 0.0;
  double false_negatives = 0.0;
  // Rates use the definition FPR = FP/unseen, FNR = FN/duplicates; NaN
  // when the denominator is zero.
  double fpr = 0.0;
  double fnr = 0.0;
  double error_x100 = 0.0;  // 100 * (FPR + FNR); above 100 = worse than random
  std::optional<double> ns_per_op;
  std::uint64_t seed = 0;
};

struct BenchOptions {
  std::uint32_t runs = 1;
  std::uint64_t seed = 0;
  bool with_timing = false;
  std::uint32_t max_threads = 0;  // 0 = hardware concurrency
};

// Runs `runs` fresh filters (seeds seed+0 .. seed+runs-1) over the same
// stream, compares verdicts against the exact oracle, and averages the
// per-run rates element-wise. Configuration errors surface before any
// run starts.
ErrorReport run_benchmark(const FilterSpec& fspec, const StreamSpec& sspec,
                          const BenchOptions& opts);

// Mean wall time of one stream() call, first 1% of the stream excluded
// as warm-up, clock sampled in batches of 1024 calls. Empty streams have
// no figure.
std::optional<double> run_timing(const FilterSpec& fspec,
                                 const StreamSpec& sspec, std::uint64_t seed);

// CSV persistence. Columns are fixed; rows keep the order of `reports`.
extern const char* const kCsvHeader;
std::string to_csv(const std::vector<ErrorReport>& reports);
void emit_csv(const std::vector<ErrorReport>& reports,
              const std::string& path);
std::vector<ErrorReport> parse_csv(const std::string& path);

}  // namespace bench
}  // namespace qht
