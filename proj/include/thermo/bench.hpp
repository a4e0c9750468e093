#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thermo::bench {

enum class Impl { Indirect, Replay, Thermo, ThermoOpt };
enum class BenchKind { NQueens, IntParseGlob, IntParseLocal, ArithParse, VerifyMachines };
enum class ParseMode { Glob, Local };

std::string to_string(Impl impl);
std::string to_string(BenchKind bench);
std::optional<Impl> parse_impl(const std::string& name);
std::optional<BenchKind> parse_bench(const std::string& name);

// The optimized engine cannot host state-like monads, so the arithmetic
// parser excludes thermo-opt; everything else runs on all four.
bool impl_valid_for(BenchKind bench, Impl impl);

// --- n-queens ------------------------------------------------------------
// A placement maps row -> column, 0-based. All implementations enumerate
// solutions in the same (lexicographic) order.
using Placement = std::vector<int>;
std::vector<Placement> nqueens(int n, Impl impl);

// --- integer parsing over a failure effect --------------------------------
// Glob: absent if any entry is unparseable, else the sum. Local: the sum of
// the parseable entries (never absent).
std::optional<long long> intparse(const std::vector<std::string>& entries,
                                  ParseMode mode, Impl impl);
std::vector<std::string> gen_intparse_input(std::size_t n, std::uint64_t seed,
                                            int bad_num, int bad_den);

// --- prefix-ambiguous arithmetic parsing ----------------------------------
// Values of every prefix of the input that is a complete expression under
//   E -> E '+' T | T;  T -> T '*' F | F;  F -> '(' E ')' | integer
// in the order the nondeterministic parser yields them (shortest prefix
// first).
std::vector<long long> arith_parse(const std::string& input, Impl impl);
std::string gen_arith_input(int leaves, std::uint64_t seed);

// --- harness ---------------------------------------------------------------
struct Fraction {
  int num = 1;
  int den = 10;
};

struct BenchSpec {
  BenchKind bench = BenchKind::NQueens;
  Impl impl = Impl::Indirect;
  std::size_t size = 8;
  int trials = 1;
  std::uint64_t seed = 1;
  Fraction bad_fraction;  // intparse-local only
};

struct BenchReport {
  BenchSpec spec;
  std::vector<double> seconds;   // one entry per trial
  std::string digest;            // hex digest of the output value
  std::string reference_digest;  // the indirect implementation's digest
  std::string summary;
  bool mismatch = false;
  int agree = 0;   // verify-machines
  int total = 0;
};

// Runs the trials, cross-checks the digest against the indirect
// implementation, and fills in the report. A digest mismatch (or a machine
// disagreement) sets `mismatch` rather than throwing.
BenchReport run_bench(const BenchSpec& spec);

void print_table(std::ostream& os, const BenchReport& report);
void print_csv(std::ostream& os, const BenchReport& report, bool header);

std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& canonical);

// Terms checked per verify-machines trial.
inline constexpr int kVerifyTermsPerTrial = 1000;

}  // namespace thermo::bench
