// Benchmark harness: runs the nondeterminism / failure / parsing benchmarks
// across the library's implementations, cross-checking outputs against the
// indirect baseline, and runs the machine-equivalence fuzz suite.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "thermo/bench.hpp"

using thermo::bench::BenchKind;
using thermo::bench::BenchReport;
using thermo::bench::BenchSpec;
using thermo::bench::Impl;

static bool parse_fraction(const std::string& text, thermo::bench::Fraction& out) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return false;
  try {
    out.num = std::stoi(text.substr(0, slash));
    out.den = std::stoi(text.substr(slash + 1));
  } catch (...) {
    return false;
  }
  return out.den > 0 && out.num >= 0 && out.num <= out.den;
}

static std::size_t default_size(BenchKind bench) {
  switch (bench) {
    case BenchKind::NQueens: return 8;
    case BenchKind::IntParseGlob:
    case BenchKind::IntParseLocal: return 10000;
    case BenchKind::ArithParse: return 20;
    case BenchKind::VerifyMachines: return 12;
  }
  return 8;
}

int main(int argc, char** argv) {
  CLI::App app{"replay-based delimited control benchmarks"};

  std::string bench_name;
  std::string impl_name = "indirect";
  long long n = -1;
  int trials = 1;
  unsigned long long seed = 1;
  std::string fraction_text = "1/10";
  std::string format = "table";
  bool check_only = false;

  app.add_option("--bench", bench_name,
                 "nqueens|intparse-glob|intparse-local|arith-parse|verify-machines")
      ->required();
  app.add_option("--impl", impl_name, "indirect|replay|thermo|thermo-opt");
  app.add_option("--n", n, "problem size (board size, entry count, leaves, max term size)");
  app.add_option("--trials", trials, "timed trials");
  app.add_option("--seed", seed, "input generation seed");
  app.add_option("--bad-fraction", fraction_text, "bad entry fraction p/q (intparse-local)");
  app.add_option("--format", format, "table|csv")
      ->check(CLI::IsMember({"table", "csv"}));
  app.add_flag("--check", check_only, "digest cross-validation only, no timing");

  CLI11_PARSE(app, argc, argv);

  auto bench = thermo::bench::parse_bench(bench_name);
  if (!bench) {
    std::cerr << "unknown bench: " << bench_name << "\n";
    return 1;
  }
  auto impl = thermo::bench::parse_impl(impl_name);
  if (!impl) {
    std::cerr << "unknown impl: " << impl_name << "\n";
    return 1;
  }

  BenchSpec spec;
  spec.bench = *bench;
  spec.impl = *impl;
  spec.size = n < 0 ? default_size(*bench) : static_cast<std::size_t>(n);
  spec.trials = trials;
  spec.seed = seed;
  if (!parse_fraction(fraction_text, spec.bad_fraction)) {
    std::cerr << "bad --bad-fraction, expected p/q\n";
    return 1;
  }
  if (!thermo::bench::impl_valid_for(spec.bench, spec.impl)) {
    std::cerr << "impl " << impl_name << " is not valid for bench " << bench_name
              << "\n";
    return 1;
  }

  try {
    if (check_only && spec.bench != BenchKind::VerifyMachines) {
      // Cross-validate every valid implementation against indirect.
      bool all_ok = true;
      for (Impl candidate : {Impl::Indirect, Impl::Replay, Impl::Thermo, Impl::ThermoOpt}) {
        if (!thermo::bench::impl_valid_for(spec.bench, candidate)) continue;
        BenchSpec one = spec;
        one.impl = candidate;
        one.trials = 1;
        BenchReport report = thermo::bench::run_bench(one);
        bool ok = !report.mismatch;
        all_ok = all_ok && ok;
        std::cout << to_string(spec.bench) << " " << to_string(candidate) << " n="
                  << spec.size << " digest=" << report.digest << " "
                  << (ok ? "ok" : "MISMATCH") << "\n";
      }
      return all_ok ? 0 : 2;
    }

    BenchReport report = thermo::bench::run_bench(spec);
    if (format == "csv")
      thermo::bench::print_csv(std::cout, report, /*header=*/true);
    else
      thermo::bench::print_table(std::cout, report);
    return report.mismatch ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
