// Command-line front end: `bench` measures error rates against the exact
// oracle, `analyze` evaluates the closed-form rate expressions, `attack`
// runs the false-negative attack and the saturation-based size probe.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qht/adversary.hpp"
#include "qht/analysis.hpp"
#include "qht/bench.hpp"
#include "qht/common.hpp"

namespace {

using json = nlohmann::json;

qht::analysis::Rational parse_rational(const std::string& text) {
  auto bad = [&] {
    throw qht::ConfigError("cannot parse rational: " + text);
  };
  try {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      return {std::stoull(text.substr(0, slash)),
              std::stoull(text.substr(slash + 1))};
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::uint64_t den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return {std::stoull(digits.empty() ? "0" : digits), den};
    }
    return {std::stoull(text), 1};
  } catch (const std::logic_error&) {
    bad();
  }
  return {};
}

qht::EmptyCellPolicy parse_policy(const std::string& name) {
  if (name == "rederive") return qht::EmptyCellPolicy::kRederiveWhileZero;
  if (name == "remap") return qht::EmptyCellPolicy::kRemapZeroToOne;
  if (name == "zero") return qht::EmptyCellPolicy::kZeroIsFingerprint;
  throw qht::ConfigError("unknown policy: " + name);
}

struct BenchArgs {
  std::string filter = "qht";
  std::uint64_t memory_bits = 65536;
  std::uint32_t k = 1;
  std::uint32_t sigma = 3;
  std::uint32_t r = 2;
  std::uint32_t rprime = 1;
  bool semisort = false;
  std::string policy = "rederive";
  std::uint32_t sbf_p = 7;
  std::uint32_t kicks = 500;
  std::string stream = "uniform";
  std::uint32_t alphabet_bits = 20;
  std::uint64_t length = 100000;
  std::uint32_t runs = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool no_timing = false;
};

int run_bench(const BenchArgs& a) {
  qht::bench::FilterSpec fspec;
  fspec.kind = a.filter;
  fspec.memory_bits = a.memory_bits;
  fspec.k = a.k;
  fspec.sigma = a.sigma;
  fspec.r = a.r;
  fspec.rprime = a.rprime;
  fspec.semisort = a.semisort;
  fspec.policy = parse_policy(a.policy);
  fspec.sbf_decrements = a.sbf_p;
  fspec.cuckoo_kicks = a.kicks;

  qht::bench::StreamSpec sspec;
  if (a.stream.rfind("file:", 0) == 0) {
    sspec.is_file = true;
    sspec.path = a.stream.substr(5);
  } else if (a.stream == "uniform") {
    if (a.alphabet_bits < 1 || a.alphabet_bits > 63) {
      throw qht::ConfigError("alphabet-bits must be in [1, 63]");
    }
    sspec.alphabet = std::uint64_t{1} << a.alphabet_bits;
    sspec.length = a.length;
  } else {
    throw qht::ConfigError("stream must be 'uniform' or 'file:PATH'");
  }

  qht::bench::BenchOptions opts;
  opts.runs = a.runs;
  opts.seed = a.seed;
  opts.with_timing = !a.no_timing;

  qht::bench::ErrorReport rep = qht::bench::run_benchmark(fspec, sspec, opts);
  qht::bench::emit_csv({rep}, a.out);
  std::printf("%s n=%llu dup%%=%.2f fpr=%.4f fnr=%.4f error_x100=%.2f\n",
              rep.filter.c_str(), static_cast<unsigned long long>(rep.n),
              rep.duplicate_pct, rep.fpr, rep.fnr, rep.error_x100);
  return 0;
}

struct AnalyzeArgs {
  std::string op;
  bool as_json = false;
  std::uint64_t N = 1024, k = 1, S = 8;
  double U = 1e18;
  std::uint64_t m = 0, n = 0, i = 1;
  std::uint32_t r = 2, rprime = 1;
  double K = 2, P = 7, max = 3, m_rows = 100000;
  std::uint64_t memory_bits = 65536;
  std::string target = "1/4";
};

void print_result(const json& j, bool as_json) {
  if (as_json) {
    std::printf("%s\n", j.dump().c_str());
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::printf("%s = %s\n", it.key().c_str(), it.value().dump().c_str());
  }
}

int run_analyze(const AnalyzeArgs& a) {
  namespace an = qht::analysis;
  json j;
  if (a.op == "fp_m") {
    an::RateInputs in{a.N, a.k, a.S, a.U};
    j = {{"N", a.N}, {"k", a.k}, {"S", a.S}, {"m", a.m},
         {"fp_m", an::fp_m(in, a.m)}};
  } else if (a.op == "fpr_n") {
    an::RateInputs in{a.N, a.k, a.S, a.U};
    j = {{"N", a.N}, {"k", a.k}, {"S", a.S}, {"n", a.n},
         {"fpr_n", an::fpr_n(in, a.n)}};
  } else if (a.op == "fn_im") {
    an::RateInputs in{a.N, a.k, a.S, a.U};
    j = {{"N", a.N}, {"k", a.k}, {"S", a.S}, {"i", a.i}, {"m", a.m},
         {"fn_im", an::fn_im(in, a.i, a.m)}};
  } else if (a.op == "fnr_inf") {
    an::RateInputs in{a.N, a.k, a.S, a.U};
    j = {{"N", a.N},
         {"k", a.k},
         {"S", a.S},
         {"U", a.U},
         {"fnr_infinity", an::fnr_infinity(in)},
         {"fnr_infinity_limit", an::fnr_infinity_limit(in)}};
  } else if (a.op == "qhtd_fpr") {
    j = {{"S", a.S},
         {"k", a.k},
         {"fpr", an::qhtd_fpr_infinity(a.S, a.k)},
         {"fnr", an::qhtd_fnr_infinity(a.S, a.k)}};
  } else if (a.op == "sqf_approx") {
    an::SqfRates rates = an::sqf_rates_approx(a.r, a.rprime,
                                              static_cast<std::uint32_t>(a.k));
    auto [sigma, space] = an::sqf_sigma_and_space(a.r, a.rprime);
    j = {{"r", a.r}, {"rprime", a.rprime}, {"k", a.k},
         {"sigma", sigma}, {"S", space},
         {"fpr_approx", rates.fpr_approx}, {"fnr_approx", rates.fnr_approx},
         {"fpr_exact", rates.fpr_exact}, {"fnr_exact", rates.fnr_exact}};
  } else if (a.op == "ratio") {
    an::Rational ratio = an::memory_ratio(a.r, a.rprime);
    j = {{"r", a.r}, {"rprime", a.rprime}, {"num", ratio.num},
         {"den", ratio.den}, {"ratio", ratio.value()}};
  } else if (a.op == "tune") {
    an::TuneResult t = an::tune(a.memory_bits, parse_rational(a.target));
    j = {{"memory_bits", a.memory_bits}, {"target", a.target},
         {"k", t.buckets}, {"S", t.space}, {"sigma", t.sigma},
         {"N", t.rows}};
  } else if (a.op == "sbf_bound") {
    j = {{"K", a.K}, {"P", a.P}, {"Max", a.max}, {"m_rows", a.m_rows},
         {"bound", an::sbf_fpr_bound(a.K, a.P, a.max, a.m_rows)}};
  } else {
    throw qht::ConfigError("unknown analyze op: " + a.op);
  }
  print_result(j, a.as_json);
  return 0;
}

struct AttackArgs {
  std::string mode = "fn";
  std::string h = "1";
  std::uint32_t trials = 100;
  std::string filter = "qht";
  std::uint64_t memory_bits = 12288;
  std::uint32_t k = 1;
  std::uint32_t sigma = 3;
  std::uint32_t r = 2, rprime = 1;
  std::uint64_t seed = 0;
  bool as_json = false;
};

int run_attack(const AttackArgs& a) {
  qht::bench::FilterSpec fspec;
  fspec.kind = a.filter;
  fspec.memory_bits = a.memory_bits;
  fspec.k = a.k;
  fspec.sigma = a.sigma;
  fspec.r = a.r;
  fspec.rprime = a.rprime;
  qht::FilterFactory factory = [fspec](std::uint64_t seed) {
    return qht::bench::make_filter(fspec, seed);
  };
  json j;
  if (a.mode == "fn") {
    qht::analysis::Rational h = parse_rational(a.h);
    qht::adversary::AttackConfig cfg;
    cfg.memory_bits = a.memory_bits;
    cfg.flood_factor = h.value();
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    double success = qht::adversary::false_negative_attack(factory, cfg);
    j = {{"mode", "fn"}, {"h", h.value()}, {"trials", a.trials},
         {"memory_bits", a.memory_bits}, {"success_fraction", success}};
  } else if (a.mode == "estimate") {
    qht::adversary::EstimateOptions opts;
    opts.seed = a.seed;
    std::uint64_t estimate = qht::adversary::estimate_memory(factory, opts);
    j = {{"mode", "estimate"}, {"estimated_capacity", estimate}};
  } else {
    throw qht::ConfigError("attack mode must be 'fn' or 'estimate'");
  }
  print_result(j, a.as_json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming duplicate-detection filters: benchmark harness, "
               "rate formulas, and adversarial probes"};
  app.require_subcommand(1);

  BenchArgs b;
  CLI::App* bench = app.add_subcommand("bench", "Measure filter error rates");
  bench->add_option("--filter", b.filter, "qht|qhtd|qqhtd|sqf|sbf|cuckoo");
  bench->add_option("--memory-bits", b.memory_bits, "Table budget in bits");
  bench->add_option("--k", b.k, "Buckets per row / hash count / entries");
  bench->add_option("--sigma", b.sigma, "Fingerprint or cell bits");
  bench->add_option("--r", b.r, "SQF remainder bits");
  bench->add_option("--rprime", b.rprime, "SQF reduced remainder bits");
  bench->add_flag("--semisort", b.semisort, "Semisorted row encoding");
  bench->add_option("--policy", b.policy, "rederive|remap|zero");
  bench->add_option("--sbf-p", b.sbf_p, "SBF decrements per insertion");
  bench->add_option("--kicks", b.kicks, "Cuckoo relocation bound");
  bench->add_option("--stream", b.stream, "uniform or file:PATH");
  bench->add_option("--alphabet-bits", b.alphabet_bits,
                    "Uniform alphabet size as a power of two");
  bench->add_option("--length", b.length, "Uniform stream length");
  bench->add_option("--runs", b.runs, "Independent runs to average");
  bench->add_option("--seed", b.seed, "Base seed");
  bench->add_option("--out", b.out, "Output CSV path")->required();
  bench->add_flag("--no-timing", b.no_timing, "Skip the timing pass");

  AnalyzeArgs an;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Evaluate closed-form rate expressions");
  analyze->add_option("--op", an.op,
                      "fp_m|fpr_n|fn_im|fnr_inf|qhtd_fpr|sqf_approx|ratio|"
                      "tune|sbf_bound")
      ->required();
  analyze->add_flag("--json", an.as_json, "Print a JSON object");
  analyze->add_option("--N", an.N, "Rows");
  analyze->add_option("--k", an.k, "Buckets per row");
  analyze->add_option("--S", an.S, "Fingerprint space");
  analyze->add_option("--U", an.U, "Universe size");
  analyze->add_option("--m", an.m, "Insertion count");
  analyze->add_option("--n", an.n, "Stream length");
  analyze->add_option("--i", an.i, "Last-duplicate position");
  analyze->add_option("--r", an.r, "SQF remainder bits");
  analyze->add_option("--rprime", an.rprime, "SQF reduced bits");
  analyze->add_option("--K", an.K, "SBF hash count");
  analyze->add_option("--P", an.P, "SBF decrements");
  analyze->add_option("--max", an.max, "SBF cell cap");
  analyze->add_option("--m-rows", an.m_rows, "SBF rows");
  analyze->add_option("--memory-bits", an.memory_bits, "Memory budget");
  analyze->add_option("--target", an.target, "Target FPR as p/q");

  AttackArgs at;
  CLI::App* attack =
      app.add_subcommand("attack", "Adversarial probes against a filter");
  attack->add_option("--mode", at.mode, "fn or estimate")->required();
  attack->add_option("--h", at.h, "Flood factor (rational)");
  attack->add_option("--trials", at.trials, "Attack trials");
  attack->add_option("--filter", at.filter, "Filter under attack");
  attack->add_option("--memory-bits", at.memory_bits, "Filter size in bits");
  attack->add_option("--k", at.k, "Buckets per row");
  attack->add_option("--sigma", at.sigma, "Fingerprint bits");
  attack->add_option("--r", at.r, "SQF remainder bits");
  attack->add_option("--rprime", at.rprime, "SQF reduced bits");
  attack->add_option("--seed", at.seed, "Base seed");
  attack->add_flag("--json", at.as_json, "Print a JSON object");

  try {
    app.parse(argc, argv);
    if (bench->parsed()) return run_bench(b);
    if (analyze->parsed()) return run_analyze(an);
    if (attack->parsed()) return run_attack(at);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const qht::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const qht::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const qht::ProbeError& e) {
    std::fprintf(stderr, "probe error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
