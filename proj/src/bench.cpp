#include "qht/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "qht/baselines.hpp"
#include "qht/sqf.hpp"

namespace qht {
namespace bench {

namespace {

std::uint64_t floor_pow2(std::uint64_t x) {
  return x == 0 ? 0 : std::uint64_t{1} << (63 - std::countl_zero(x));
}

const char* policy_name(EmptyCellPolicy p) {
  switch (p) {
    case EmptyCellPolicy::kZeroIsFingerprint: return "zero";
    case EmptyCellPolicy::kRemapZeroToOne: return "remap";
    case EmptyCellPolicy::kRederiveWhileZero: return "rederive";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[64];
  if (std::isnan(v)) return "nan";
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

GroundTruth GroundTruth::build(StreamSource& source) {
  GroundTruth gt;
  source.reset();
  std::unordered_set<std::string> seen;
  Element e;
  while (source.next(e)) {
    bool dup = !seen.emplace(e).second;
    gt.is_duplicate.push_back(dup);
    gt.duplicates += dup;
    ++gt.n;
  }
  gt.distinct = seen.size();
  return gt;
}

std::string FilterSpec::extra_params() const {
  std::string s = "policy=";
  s += policy_name(policy);
  if (kind == "sqf") {
    s += ";r=" + std::to_string(r) + ";rprime=" + std::to_string(rprime);
  }
  if (kind == "sbf") s += ";P=" + std::to_string(sbf_decrements);
  if (kind == "cuckoo") s += ";kicks=" + std::to_string(cuckoo_kicks);
  if (semisort) s += ";semisort";
  return s;
}

std::unique_ptr<DuplicateFilter> make_filter(const FilterSpec& spec,
                                             std::uint64_t seed) {
  if (spec.kind == "qht" || spec.kind == "qhtd" || spec.kind == "qqhtd") {
    QhtParams p;
    p.memory_bits = spec.memory_bits;
    p.fingerprint_bits = spec.sigma;
    p.buckets_per_row = spec.k;
    p.policy = spec.policy;
    p.layout = spec.semisort ? RowLayout::kSemiSorted : RowLayout::kPacked;
    QhtVariant v = spec.kind == "qht"    ? QhtVariant::kQht
                   : spec.kind == "qhtd" ? QhtVariant::kQhtd
                                         : QhtVariant::kQqhtd;
    return std::make_unique<QuotientHashTable>(v, p, seed);
  }
  if (spec.kind == "sqf") {
    SqfParams p;
    p.remainder_bits = spec.r;
    p.reduced_bits = spec.rprime;
    p.buckets_per_row = spec.k;
    // Largest q with 2^q * k * cell_bits <= memory budget.
    std::uint64_t per_row = std::uint64_t{spec.k} * p.cell_bits();
    if (per_row == 0 || spec.memory_bits < per_row) {
      throw ConfigError("sqf: memory too small for one row");
    }
    std::uint64_t rows = floor_pow2(spec.memory_bits / per_row);
    p.quotient_bits = static_cast<std::uint32_t>(std::bit_width(rows) - 1);
    return std::make_unique<StreamingQuotientFilter>(p, seed);
  }
  if (spec.kind == "sbf") {
    SbfParams p;
    p.cell_bits = spec.sigma;
    p.hash_count = spec.k;
    p.decrements = spec.sbf_decrements;
    p.cells = spec.memory_bits / spec.sigma;
    return std::make_unique<StableBloomFilter>(p, seed);
  }
  if (spec.kind == "cuckoo") {
    CuckooParams p;
    p.fingerprint_bits = spec.sigma;
    p.entries = spec.k;
    p.max_kicks = spec.cuckoo_kicks;
    std::uint64_t per_bucket = std::uint64_t{spec.k} * spec.sigma;
    if (per_bucket == 0 || spec.memory_bits < per_bucket) {
      throw ConfigError("cuckoo: memory too small for one bucket");
    }
    p.buckets = floor_pow2(spec.memory_bits / per_bucket);
    return std::make_unique<CuckooFilter>(p, seed);
  }
  throw ConfigError("unknown filter kind: " + spec.kind);
}

std::unique_ptr<StreamSource> StreamSpec::open(std::uint64_t seed) const {
  if (is_file) return std::make_unique<FileSource>(path);
  return std::make_unique<UniformSource>(alphabet, length, seed);
}

namespace {

struct RunCounts {
  std::uint64_t false_positives = 0;
  std::uint64_t false_negatives = 0;
};

RunCounts run_once(const FilterSpec& fspec, StreamSource& source,
                   const GroundTruth& gt, std::uint64_t seed) {
  auto filter = make_filter(fspec, seed);
  source.reset();
  RunCounts counts;
  Element e;
  std::uint64_t i = 0;
  while (source.next(e)) {
    Verdict v = filter->stream(e);
    bool dup = gt.is_duplicate[i++];
    if (dup && v == Verdict::kUnseen) ++counts.false_negatives;
    if (!dup && v == Verdict::kDuplicate) ++counts.false_positives;
  }
  return counts;
}

}  // namespace

ErrorReport run_benchmark(const FilterSpec& fspec, const StreamSpec& sspec,
                          const BenchOptions& opts) {
  if (opts.runs < 1) throw ConfigError("bench: need runs >= 1");
  make_filter(fspec, opts.seed);  // surface configuration errors up front
  auto source = sspec.open(opts.seed);
  GroundTruth gt = GroundTruth::build(*source);

  std::vector<RunCounts> per_run(opts.runs);
  std::uint32_t workers = opts.max_threads
                              ? opts.max_threads
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::uint32_t>(workers, opts.runs);
  if (workers <= 1) {
    for (std::uint32_t run = 0; run < opts.runs; ++run) {
      per_run[run] = run_once(fspec, *source, gt, opts.seed + run);
    }
  } else {
    // One filter instance and one stream cursor per worker; results land
    // in per-run slots so the averaging order stays deterministic.
    std::vector<std::future<void>> futures;
    std::atomic<std::uint32_t> next_run{0};
    for (std::uint32_t w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&] {
        auto local = source->clone();
        for (;;) {
          std::uint32_t run = next_run.fetch_add(1);
          if (run >= opts.runs) break;
          per_run[run] = run_once(fspec, *local, gt, opts.seed + run);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  ErrorReport rep;
  rep.filter = fspec.kind;
  rep.variant = fspec.kind;
  std::transform(rep.variant.begin(), rep.variant.end(), rep.variant.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  rep.memory_bits = fspec.memory_bits;
  rep.k = fspec.k;
  rep.sigma = fspec.sigma;
  rep.extra_params = fspec.extra_params();
  rep.stream = source->describe();
  rep.duplicate_pct = gt.n ? 100.0 * gt.duplicates / gt.n : 0.0;
  rep.runs = opts.runs;
  rep.n = gt.n;
  rep.duplicates = gt.duplicates;
  rep.seed = opts.seed;

  double fpr_sum = 0.0, fnr_sum = 0.0, fp_sum = 0.0, fn_sum = 0.0;
  for (const RunCounts& rc : per_run) {
    fp_sum += static_cast<double>(rc.false_positives);
    fn_sum += static_cast<double>(rc.false_negatives);
    fpr_sum += gt.unseen() ? static_cast<double>(rc.false_positives) / gt.unseen()
                           : std::nan("");
    fnr_sum += gt.duplicates ? static_cast<double>(rc.false_negatives) / gt.duplicates
                             : std::nan("");
  }
  rep.false_positives = fp_sum / opts.runs;
  rep.false_negatives = fn_sum / opts.runs;
  rep.fpr = fpr_sum / opts.runs;
  rep.fnr = fnr_sum / opts.runs;
  rep.error_x100 = 100.0 * (rep.fpr + rep.fnr);

  if (opts.with_timing) rep.ns_per_op = run_timing(fspec, sspec, opts.seed);
  return rep;
}

std::optional<double> run_timing(const FilterSpec& fspec,
                                 const StreamSpec& sspec,
                                 std::uint64_t seed) {
  auto source = sspec.open(seed);
  auto filter = make_filter(fspec, seed);

  // Count the stream and warm the filter on the first 1%.
  source->reset();
  std::uint64_t n = 0;
  Element e;
  while (source->next(e)) ++n;
  if (n == 0) return std::nullopt;
  std::uint64_t warmup = n / 100;

  source->reset();
  for (std::uint64_t i = 0; i < warmup && source->next(e); ++i) {
    filter->stream(e);
  }

  using clock = std::chrono::steady_clock;
  constexpr std::uint64_t kBatch = 1024;
  std::uint64_t measured = 0;
  std::uint64_t verdict_sink = 0;
  std::int64_t total_ns = 0;
  bool more = true;
  while (more) {
    std::uint64_t in_batch = 0;
    auto t0 = clock::now();
    for (; in_batch < kBatch; ++in_batch) {
      if (!source->next(e)) {
        more = false;
        break;
      }
      verdict_sink += static_cast<std::uint64_t>(filter->stream(e));
    }
    auto t1 = clock::now();
    total_ns +=
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    measured += in_batch;
  }
  if (measured == 0) return std::nullopt;
  // Keep the verdict accumulation observable.
  if (verdict_sink == ~std::uint64_t{0}) return std::nullopt;
  return static_cast<double>(total_ns) / static_cast<double>(measured);
}

const char* const kCsvHeader =
    "filter,variant,memory_bits,k,sigma,extra_params,stream,duplicate_pct,"
    "runs,fpr,fnr,error_x100,ns_per_op,seed";

std::string to_csv(const std::vector<ErrorReport>& reports) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ErrorReport& r : reports) {
    out += r.filter;
    out += ',';
    out += r.variant;
    out += ',';
    out += std::to_string(r.memory_bits);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += std::to_string(r.sigma);
    out += ',';
    out += r.extra_params;
    out += ',';
    out += r.stream;
    out += ',';
    out += format_double(r.duplicate_pct);
    out += ',';
    out += std::to_string(r.runs);
    out += ',';
    out += format_double(r.fpr);
    out += ',';
    out += format_double(r.fnr);
    out += ',';
    out += format_double(r.error_x100);
    out += ',';
    out += r.ns_per_op ? format_double(*r.ns_per_op) : std::string();
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ErrorReport>& reports,
              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << to_csv(reports);
  if (!out) throw IoError("write failed on " + path);
}

std::vector<ErrorReport> parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError(path + ": unexpected CSV header");
  }
  std::vector<ErrorReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (line.back() == ',') f.push_back("");
    if (f.size() != 14) throw IoError(path + ": malformed CSV row");
    ErrorReport r;
    r.filter = f[0];
    r.variant = f[1];
    r.memory_bits = std::stoull(f[2]);
    r.k = static_cast<std::uint32_t>(std::stoul(f[3]));
    r.sigma = static_cast<std::uint32_t>(std::stoul(f[4]));
    r.extra_params = f[5];
    r.stream = f[6];
    r.duplicate_pct = std::stod(f[7]);
    r.runs = static_cast<std::uint32_t>(std::stoul(f[8]));
    r.fpr = std::stod(f[9]);
    r.fnr = std::stod(f[10]);
    r.error_x100 = std::stod(f[11]);
    if (!f[12].empty()) r.ns_per_op = std::stod(f[12]);
    r.seed = std::stoull(f[13]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bench
}  // namespace qht
