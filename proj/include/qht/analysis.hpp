#pragma once

#include <cstdint>
#include <utility>

#include "qht/common.hpp"

namespace qht {
namespace analysis {

// Parameter bundle feeding every rate formula. S is the number of
// equiprobable fingerprint values the filter can actually store, U the
// universe size of the stream alphabet.
struct RateInputs {
  std::uint64_t rows = 1;      // N
  std::uint64_t buckets = 1;   // k
  std::uint64_t space = 2;     // S
  double universe = 1.0;       // U (finite forms only)

  // Per-insertion probabilities behind the closed forms:
  //   a = P(one later element evicts a given stored fingerprint)
  //   b = asymptotic false-positive probability k/S
  //   c = 1 - 1/(Nk), survival factor of the last false duplicate
  double a() const {
    return static_cast<double>(space - buckets) /
           (static_cast<double>(buckets) *
            (static_cast<double>(rows) * static_cast<double>(space) - 1.0));
  }
  double b() const {
    return static_cast<double>(buckets) / static_cast<double>(space);
  }
  double c() const {
    return 1.0 - 1.0 / (static_cast<double>(rows) *
                        static_cast<double>(buckets));
  }

  // Documented intermediates of the derivations.
  double p_false_duplicate() const {  // 1/(NS)
    return 1.0 / (static_cast<double>(rows) * static_cast<double>(space));
  }
  double p_hash_and_distinct() const {  // (S-k)/(NS-1)
    return static_cast<double>(space - buckets) /
           (static_cast<double>(rows) * static_cast<double>(space) - 1.0);
  }
  double p_selection() const { return 1.0 / static_cast<double>(buckets); }
  double p_not_evicted() const { return 1.0 - a(); }

  void validate(bool need_universe = false) const;
};

// Probability that an unseen element probed after m insertions collides:
// (k/S) * (1 - (1 - 1/(Nk))^m). Monotone in m with limit k/S.
double fp_m(const RateInputs& in, std::uint64_t m);

// Cesaro mean of fp_m over a stream of n elements; converges to k/S.
double fpr_n(const RateInputs& in, std::uint64_t n);

// Probability that a duplicate whose last occurrence sat at position i of
// an m-element stream is answered UNSEEN (closed geometric-sum form).
double fn_im(const RateInputs& in, std::uint64_t i, std::uint64_t m);

// Asymptotic false-negative rate for a finite universe U (four-term
// expression; the removable 1-a = c singularity is evaluated exactly).
double fnr_infinity(const RateInputs& in);

// U -> infinity limit: 1 - k/S.
double fnr_infinity_limit(const RateInputs& in);

// Asymptotic rates of the duplicate-keeping variant.
double qhtd_fpr_infinity(std::uint64_t space, std::uint64_t buckets);
double qhtd_fnr_infinity(std::uint64_t space, std::uint64_t buckets);

// Streaming-quotient-filter cell width and fingerprint count:
// sigma = r' + ceil(log2(r+1)), S = 2^r' * (r - r' + 1).
std::pair<std::uint32_t, std::uint64_t> sqf_sigma_and_space(
    std::uint32_t r, std::uint32_t rprime);

struct SqfRates {
  double fpr_approx;  // k / (2^r' * sqrt(pi*r)), central-binomial estimate
  double fnr_approx;
  double fpr_exact;   // k / S with the true fingerprint count
  double fnr_exact;
};
SqfRates sqf_rates_approx(std::uint32_t r, std::uint32_t rprime,
                          std::uint32_t buckets);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

// Table-bit ratio of a quotient hash table to a streaming quotient filter
// with identical (N, k, S): (r' + ceil(log2(r-r'+1))) / (r' + ceil(log2(r+1))).
Rational memory_ratio(std::uint32_t r, std::uint32_t rprime);

struct TuneResult {
  std::uint64_t buckets;  // k
  std::uint64_t space;    // S = 2^sigma
  std::uint32_t sigma;
  std::uint64_t rows;     // N implied by the memory budget
};

// Smallest-sigma (k, S) pair realizing a target asymptotic FPR of k/S:
// smaller fingerprints delay saturation at equal memory and equal k/S.
TuneResult tune(std::uint64_t memory_bits, Rational target_fpr,
                std::uint32_t max_sigma = 16);

// Stable-bloom-filter FPR bound for K hashes, P decrements, cell cap Max
// and m rows.
double sbf_fpr_bound(double hashes, double decrements, double cell_max,
                     double rows);

}  // namespace analysis
}  // namespace qht
