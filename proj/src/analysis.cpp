#include "qht/analysis.hpp"

#include <bit>
#include <cmath>
#include <numeric>

namespace qht {
namespace analysis {

namespace {

std::uint32_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(x - 1));
}

// (1 - x)^m in log space; exact for m = 0 and safe for tiny x, huge m.
double pow_one_minus(double x, double m) {
  if (m == 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return std::exp(m * std::log1p(-x));
}

}  // namespace

void RateInputs::validate(bool need_universe) const {
  if (rows < 1) throw ConfigError("rates: need N >= 1");
  if (buckets < 1) throw ConfigError("rates: need k >= 1");
  if (space < 2) throw ConfigError("rates: need S >= 2");
  if (buckets > space) throw ConfigError("rates: need k <= S");
  if (need_universe && universe < 1.0) {
    throw ConfigError("rates: need U >= 1");
  }
}

double fp_m(const RateInputs& in, std::uint64_t m) {
  in.validate();
  double inv_cells = 1.0 / (static_cast<double>(in.rows) *
                            static_cast<double>(in.buckets));
  return in.b() * (1.0 - pow_one_minus(inv_cells, static_cast<double>(m)));
}

double fpr_n(const RateInputs& in, std::uint64_t n) {
  in.validate();
  if (n == 0) return 0.0;
  double c = in.c();
  double nd = static_cast<double>(n);
  // (1/n) * sum_{m=1..n} c^m = c (1 - c^n) / (n (1 - c)), c < 1.
  double inv_cells = 1.0 - c;
  double geo = c * (1.0 - pow_one_minus(inv_cells, nd)) / (nd * inv_cells);
  return in.b() * (1.0 - geo);
}

double fn_im(const RateInputs& in, std::uint64_t i, std::uint64_t m) {
  in.validate();
  if (i < 1 || i > m) throw ConfigError("rates: need 1 <= i <= m");
  double a = in.a();
  double b = in.b();
  double c = in.c();
  double t = static_cast<double>(m - i);
  double pa = pow_one_minus(a, t);          // (1-a)^(m-i)
  double pc = pow_one_minus(1.0 - c, t);    // c^(m-i)
  double head = (1.0 - b) * (1.0 - pa);
  double d = 1.0 - a - c;
  if (std::abs(d) < 1e-9) {
    // Removable singularity 1-a = c: the quotient degenerates to the
    // geometric-sum value t * (1-a)^(t-1).
    double tail = a * b * (t == 0.0 ? 0.0 : t * pow_one_minus(a, t - 1.0));
    return head + tail;
  }
  return head + a * b * (pa - pc) / d;
}

double fnr_infinity(const RateInputs& in) {
  in.validate(true);
  double a = in.a();
  double b = in.b();
  double u = in.universe;
  double inv_cells = 1.0 / (static_cast<double>(in.rows) *
                            static_cast<double>(in.buckets));
  // Denominators written as 1 + (U-1)x to avoid cancellation:
  //   U - (U-1)(1-a) = 1 + (U-1)a,  U - (U-1)c = 1 + (U-1)/(Nk).
  double d1 = 1.0 + (u - 1.0) * a;
  double d2 = 1.0 + (u - 1.0) * inv_cells;
  // The two 1/(1-a-c) terms combine exactly into ab(U-1)/(d1*d2), which
  // stays finite at 1-a = c.
  return (1.0 - b) * (1.0 - 1.0 / d1) + a * b * (u - 1.0) / (d1 * d2);
}

double fnr_infinity_limit(const RateInputs& in) {
  in.validate();
  return 1.0 - in.b();
}

double qhtd_fpr_infinity(std::uint64_t space, std::uint64_t buckets) {
  if (space < 2 || buckets < 1) throw ConfigError("rates: bad (S, k)");
  return 1.0 - pow_one_minus(1.0 / static_cast<double>(space),
                             static_cast<double>(buckets));
}

double qhtd_fnr_infinity(std::uint64_t space, std::uint64_t buckets) {
  return 1.0 - qhtd_fpr_infinity(space, buckets);
}

std::pair<std::uint32_t, std::uint64_t> sqf_sigma_and_space(
    std::uint32_t r, std::uint32_t rprime) {
  if (r < 1 || rprime >= r) throw ConfigError("rates: need 0 <= r' < r");
  std::uint32_t sigma = rprime + ceil_log2(std::uint64_t{r} + 1);
  std::uint64_t space =
      (std::uint64_t{1} << rprime) * (r - rprime + 1);
  return {sigma, space};
}

SqfRates sqf_rates_approx(std::uint32_t r, std::uint32_t rprime,
                          std::uint32_t buckets) {
  auto [sigma, space] = sqf_sigma_and_space(r, rprime);
  (void)sigma;
  double k = buckets;
  double approx = k / (std::ldexp(1.0, static_cast<int>(rprime)) *
                       std::sqrt(M_PI * static_cast<double>(r)));
  double exact = k / static_cast<double>(space);
  return {approx, 1.0 - approx, exact, 1.0 - exact};
}

Rational memory_ratio(std::uint32_t r, std::uint32_t rprime) {
  if (r < 1 || rprime >= r) throw ConfigError("rates: need 0 <= r' < r");
  std::uint64_t num = rprime + ceil_log2(std::uint64_t{r} - rprime + 1);
  std::uint64_t den = rprime + ceil_log2(std::uint64_t{r} + 1);
  return {num, den};
}

TuneResult tune(std::uint64_t memory_bits, Rational target_fpr,
                std::uint32_t max_sigma) {
  if (target_fpr.num == 0 || target_fpr.den == 0 ||
      target_fpr.num > target_fpr.den) {
    throw ConfigError("tune: target FPR must be in (0, 1]");
  }
  std::uint64_t g = std::gcd(target_fpr.num, target_fpr.den);
  std::uint64_t p = target_fpr.num / g;
  std::uint64_t q = target_fpr.den / g;
  for (std::uint32_t sigma = 1; sigma <= max_sigma; ++sigma) {
    std::uint64_t space = std::uint64_t{1} << sigma;
    if (space % q != 0) continue;  // k = S*p/q must be an integer
    std::uint64_t k = space / q * p;
    if (k < 1 || k > space) continue;
    std::uint64_t rows = memory_bits / (k * sigma);
    return {k, space, sigma, rows};
  }
  throw ConfigError(
      "tune: target FPR has no dyadic representation with sigma <= " +
      std::to_string(max_sigma));
}

double sbf_fpr_bound(double hashes, double decrements, double cell_max,
                     double rows) {
  if (hashes < 1 || decrements < 1 || cell_max < 1 || rows <= hashes) {
    throw ConfigError("sbf bound: need K, P, Max >= 1 and m > K");
  }
  double zero_frac = std::pow(
      1.0 / (1.0 + 1.0 / (decrements * (1.0 / hashes - 1.0 / rows))),
      cell_max);
  return std::pow(1.0 - zero_frac, hashes);
}

}  // namespace analysis
}  // namespace qht
