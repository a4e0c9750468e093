#include "thermo/bench.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iterator>
#include <memory>
#include <ostream>
#include <random>
#include <stdexcept>
#include <utility>

#include "thermo/machine.hpp"
#include "thermo/opt_reflection.hpp"
#include "thermo/reflection.hpp"
#include "thermo/replay_nondet.hpp"

namespace thermo::bench {

std::string to_string(Impl impl) {
  switch (impl) {
    case Impl::Indirect: return "indirect";
    case Impl::Replay: return "replay";
    case Impl::Thermo: return "thermo";
    case Impl::ThermoOpt: return "thermo-opt";
  }
  return "?";
}

std::string to_string(BenchKind bench) {
  switch (bench) {
    case BenchKind::NQueens: return "nqueens";
    case BenchKind::IntParseGlob: return "intparse-glob";
    case BenchKind::IntParseLocal: return "intparse-local";
    case BenchKind::ArithParse: return "arith-parse";
    case BenchKind::VerifyMachines: return "verify-machines";
  }
  return "?";
}

std::optional<Impl> parse_impl(const std::string& name) {
  if (name == "indirect") return Impl::Indirect;
  if (name == "replay") return Impl::Replay;
  if (name == "thermo") return Impl::Thermo;
  if (name == "thermo-opt") return Impl::ThermoOpt;
  return std::nullopt;
}

std::optional<BenchKind> parse_bench(const std::string& name) {
  if (name == "nqueens") return BenchKind::NQueens;
  if (name == "intparse-glob") return BenchKind::IntParseGlob;
  if (name == "intparse-local") return BenchKind::IntParseLocal;
  if (name == "arith-parse") return BenchKind::ArithParse;
  if (name == "verify-machines") return BenchKind::VerifyMachines;
  return std::nullopt;
}

bool impl_valid_for(BenchKind bench, Impl impl) {
  if (bench == BenchKind::VerifyMachines) return true;  // impl is ignored
  if (bench == BenchKind::ArithParse) return impl != Impl::ThermoOpt;
  return true;
}

// --- n-queens --------------------------------------------------------------

static bool queen_safe(const Placement& placed, int col) {
  int row = static_cast<int>(placed.size());
  for (int r = 0; r < row; ++r) {
    if (placed[r] == col || std::abs(placed[r] - col) == row - r) return false;
  }
  return true;
}

static std::vector<int> queen_candidates(const Placement& placed, int n) {
  std::vector<int> cols;
  for (int c = 0; c < n; ++c)
    if (queen_safe(placed, c)) cols.push_back(c);
  return cols;
}

static void queens_indirect(int n, Placement& placed, std::vector<Placement>& out) {
  if (static_cast<int>(placed.size()) == n) {
    out.push_back(placed);
    return;
  }
  for (int c : queen_candidates(placed, n)) {
    placed.push_back(c);
    queens_indirect(n, placed, out);
    placed.pop_back();
  }
}

std::vector<Placement> nqueens(int n, Impl impl) {
  if (n < 1 || n > 13) throw std::runtime_error("nqueens: n must be in 1..13");
  switch (impl) {
    case Impl::Indirect: {
      std::vector<Placement> out;
      Placement placed;
      queens_indirect(n, placed, out);
      return out;
    }
    case Impl::Replay: {
      NondetContext ctx;
      return ctx.with_nondeterminism([&] {
        Placement placed;
        for (int row = 0; row < n; ++row)
          placed.push_back(ctx.choose(queen_candidates(placed, n)));
        return placed;
      });
    }
    case Impl::Thermo: {
      Reflected<list_monad> r;
      return r.reify([&] {
        Placement placed;
        for (int row = 0; row < n; ++row)
          placed.push_back(r.reflect(queen_candidates(placed, n)));
        return placed;
      });
    }
    case Impl::ThermoOpt: {
      OptReflected<cps_list_monad> r;
      return r.opt_reify([&] {
        Placement placed;
        for (int row = 0; row < n; ++row)
          placed.push_back(r.opt_reflect(queen_candidates(placed, n)));
        return placed;
      });
    }
  }
  throw std::runtime_error("nqueens: bad impl");
}

// --- intparse ---------------------------------------------------------------

static std::optional<long long> parse_entry(const std::string& s) {
  if (s.empty()) return std::nullopt;
  long long v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<long long> intparse(const std::vector<std::string>& entries,
                                  ParseMode mode, Impl impl) {
  if (mode == ParseMode::Glob) {
    switch (impl) {
      case Impl::Indirect: {
        long long sum = 0;
        for (const auto& e : entries) {
          auto v = parse_entry(e);
          if (!v) return std::nullopt;
          sum += *v;
        }
        return sum;
      }
      case Impl::Replay: {
        NondetContext ctx;
        auto rs = ctx.with_nondeterminism([&] {
          long long sum = 0;
          for (const auto& e : entries) {
            auto v = parse_entry(e);
            if (!v) ctx.choose(std::vector<long long>{});  // abort everything
            else sum += *v;
          }
          return sum;
        });
        if (rs.empty()) return std::nullopt;
        return rs.front();
      }
      case Impl::Thermo: {
        Reflected<maybe_monad> r;
        return r.reify([&] {
          long long sum = 0;
          for (const auto& e : entries) {
            auto v = parse_entry(e);
            if (!v) r.reflect(std::optional<long long>{});
            else sum += *v;
          }
          return sum;
        });
      }
      case Impl::ThermoOpt: {
        OptReflected<cps_maybe_monad> r;
        return r.opt_reify([&] {
          long long sum = 0;
          for (const auto& e : entries) {
            auto v = parse_entry(e);
            if (!v) r.opt_reflect(std::optional<long long>{});
            else sum += *v;
          }
          return sum;
        });
      }
    }
    throw std::runtime_error("intparse: bad impl");
  }

  // local: recover per entry
  long long sum = 0;
  switch (impl) {
    case Impl::Indirect: {
      for (const auto& e : entries)
        if (auto v = parse_entry(e)) sum += *v;
      return sum;
    }
    case Impl::Replay: {
      NondetContext ctx;
      for (const auto& e : entries) {
        auto rs = ctx.with_nondeterminism([&] {
          auto v = parse_entry(e);
          if (!v) ctx.choose(std::vector<long long>{});
          return *v;
        });
        if (!rs.empty()) sum += rs.front();
      }
      return sum;
    }
    case Impl::Thermo: {
      Reflected<maybe_monad> r;
      for (const auto& e : entries) {
        auto v = r.reify([&] {
          auto p = parse_entry(e);
          if (!p) r.reflect(std::optional<long long>{});
          return *p;
        });
        if (v) sum += *v;
      }
      return sum;
    }
    case Impl::ThermoOpt: {
      OptReflected<cps_maybe_monad> r;
      for (const auto& e : entries) {
        auto v = r.opt_reify([&] {
          auto p = parse_entry(e);
          if (!p) r.opt_reflect(std::optional<long long>{});
          return *p;
        });
        if (v) sum += *v;
      }
      return sum;
    }
  }
  throw std::runtime_error("intparse: bad impl");
}

std::vector<std::string> gen_intparse_input(std::size_t n, std::uint64_t seed,
                                            int bad_num, int bad_den) {
  if (bad_den <= 0 || bad_num < 0 || bad_num > bad_den)
    throw std::runtime_error("gen_intparse_input: bad fraction");
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool bad = bad_num > 0 &&
               static_cast<int>(i % static_cast<std::size_t>(bad_den)) < bad_num;
    if (bad) {
      std::size_t len = 1 + rng() % 6;
      std::string s;
      for (std::size_t j = 0; j < len; ++j)
        s.push_back(static_cast<char>('a' + rng() % 26));
      out.push_back(std::move(s));
    } else {
      out.push_back(std::to_string(rng() % 100000));
    }
  }
  return out;
}

// --- arith parse ------------------------------------------------------------
//
// All implementations make the identical decision sequence: at every point
// where the input could either end an expression or continue it, the "stop"
// alternative is explored first, so yields come out shortest prefix first.

static bool is_digit(char c) { return c >= '0' && c <= '9'; }

namespace {

// Pure pair-list implementation (the indirect baseline).
struct IndirectParser {
  const std::string& s;
  using Yields = std::vector<std::pair<long long, std::size_t>>;

  Yields expr(std::size_t p) const {
    Yields out;
    for (auto [t, q] : term(p)) expr_rest(t, q, out);
    return out;
  }

  void expr_rest(long long acc, std::size_t q, Yields& out) const {
    out.push_back({acc, q});  // stop branch first
    if (q < s.size() && s[q] == '+')
      for (auto [t, q2] : term(q + 1)) expr_rest(acc + t, q2, out);
  }

  Yields term(std::size_t p) const {
    Yields out;
    for (auto [f, q] : factor(p)) term_rest(f, q, out);
    return out;
  }

  void term_rest(long long acc, std::size_t q, Yields& out) const {
    out.push_back({acc, q});
    if (q < s.size() && s[q] == '*')
      for (auto [f, q2] : factor(q + 1)) term_rest(acc * f, q2, out);
  }

  Yields factor(std::size_t p) const {
    Yields out;
    if (p < s.size() && s[p] == '(') {
      for (auto [v, q] : expr(p + 1))
        if (q < s.size() && s[q] == ')') out.push_back({v, q + 1});
      return out;
    }
    return number(p);
  }

  Yields number(std::size_t p) const {
    Yields out;
    if (p >= s.size() || !is_digit(s[p])) return out;
    long long acc = s[p] - '0';
    std::size_t q = p + 1;
    out.push_back({acc, q});
    while (q < s.size() && is_digit(s[q])) {
      acc = acc * 10 + (s[q] - '0');
      ++q;
      out.push_back({acc, q});
    }
    return out;
  }
};

// Replay implementation: nondeterminism from the replay engine, the input
// position threaded through return values (the body stays pure).
struct ReplayParser {
  NondetContext& ctx;
  const std::string& s;
  using R = std::pair<long long, std::size_t>;

  bool stop_here() { return ctx.choose(std::vector<int>{1, 0}) == 1; }

  template <class T>
  T abort_path() {
    ctx.choose(std::vector<T>{});
    throw internal_invariant("abort_path returned");
  }

  R expr(std::size_t p) {
    R t = term(p);
    for (;;) {
      if (t.second < s.size() && s[t.second] == '+') {
        if (stop_here()) return t;
        R u = term(t.second + 1);
        t = {t.first + u.first, u.second};
      } else {
        return t;
      }
    }
  }

  R term(std::size_t p) {
    R f = factor(p);
    for (;;) {
      if (f.second < s.size() && s[f.second] == '*') {
        if (stop_here()) return f;
        R g = factor(f.second + 1);
        f = {f.first * g.first, g.second};
      } else {
        return f;
      }
    }
  }

  R factor(std::size_t p) {
    if (p < s.size() && s[p] == '(') {
      R v = expr(p + 1);
      if (v.second < s.size() && s[v.second] == ')') return {v.first, v.second + 1};
      return abort_path<R>();
    }
    return number(p);
  }

  R number(std::size_t p) {
    if (p >= s.size() || !is_digit(s[p])) return abort_path<R>();
    long long acc = s[p] - '0';
    std::size_t q = p + 1;
    for (;;) {
      if (q < s.size() && is_digit(s[q])) {
        if (stop_here()) return {acc, q};
        acc = acc * 10 + (s[q] - '0');
        ++q;
      } else {
        return {acc, q};
      }
    }
  }
};

// State-over-list parser monad: position -> [(value, position)].
template <class A>
using ParserM = std::function<std::vector<std::pair<A, std::size_t>>(std::size_t)>;

struct parser_monad {
  template <class A>
  using m = ParserM<A>;

  template <class A>
  static m<A> pure(A x) {
    return [x = std::move(x)](std::size_t p) {
      return std::vector<std::pair<A, std::size_t>>{{x, p}};
    };
  }

  template <class A, class F>
  static auto bind(m<A> mv, F f) -> std::invoke_result_t<F&, A> {
    using MB = std::invoke_result_t<F&, A>;
    return MB([mv = std::move(mv), f = std::move(f)](std::size_t p) {
      std::invoke_result_t<MB&, std::size_t> out;
      for (auto& [x, q] : mv(p)) {
        auto ys = f(x)(q);
        out.insert(out.end(), std::make_move_iterator(ys.begin()),
                   std::make_move_iterator(ys.end()));
      }
      return out;
    });
  }
};

// Direct-style parser over the reflected state+list monad.
struct ThermoParser {
  Reflected<parser_monad>& r;
  std::shared_ptr<const std::string> s;

  std::size_t pos() {
    return r.reflect(ParserM<std::size_t>([](std::size_t p) {
      return std::vector<std::pair<std::size_t, std::size_t>>{{p, p}};
    }));
  }

  char item() {
    auto str = s;
    return r.reflect(ParserM<char>([str](std::size_t p) {
      std::vector<std::pair<char, std::size_t>> out;
      if (p < str->size()) out.push_back({(*str)[p], p + 1});
      return out;
    }));
  }

  bool stop_here() {
    return r.reflect(ParserM<bool>([](std::size_t p) {
      return std::vector<std::pair<bool, std::size_t>>{{true, p}, {false, p}};
    }));
  }

  template <class T>
  T abort_path() {
    return r.reflect(ParserM<T>(
        [](std::size_t) { return std::vector<std::pair<T, std::size_t>>{}; }));
  }

  long long expr() {
    long long acc = term();
    for (;;) {
      std::size_t p = pos();
      if (p < s->size() && (*s)[p] == '+') {
        if (stop_here()) return acc;
        item();  // consume '+'
        acc += term();
      } else {
        return acc;
      }
    }
  }

  long long term() {
    long long acc = factor();
    for (;;) {
      std::size_t p = pos();
      if (p < s->size() && (*s)[p] == '*') {
        if (stop_here()) return acc;
        item();
        acc *= factor();
      } else {
        return acc;
      }
    }
  }

  long long factor() {
    std::size_t p = pos();
    if (p < s->size() && (*s)[p] == '(') {
      item();
      long long v = expr();
      std::size_t q = pos();
      if (q < s->size() && (*s)[q] == ')') {
        item();
        return v;
      }
      return abort_path<long long>();
    }
    return number();
  }

  long long number() {
    std::size_t p = pos();
    if (p >= s->size() || !is_digit((*s)[p])) return abort_path<long long>();
    long long acc = item() - '0';
    for (;;) {
      std::size_t q = pos();
      if (q < s->size() && is_digit((*s)[q])) {
        if (stop_here()) return acc;
        acc = acc * 10 + (item() - '0');
      } else {
        return acc;
      }
    }
  }
};

}  // namespace

std::vector<long long> arith_parse(const std::string& input, Impl impl) {
  std::vector<long long> values;
  switch (impl) {
    case Impl::Indirect: {
      IndirectParser parser{input};
      for (auto [v, q] : parser.expr(0)) values.push_back(v);
      return values;
    }
    case Impl::Replay: {
      NondetContext ctx;
      ReplayParser parser{ctx, input};
      return ctx.with_nondeterminism([&] { return parser.expr(0).first; });
    }
    case Impl::Thermo: {
      Reflected<parser_monad> r;
      ThermoParser parser{r, std::make_shared<const std::string>(input)};
      auto mu = r.reify([&] { return parser.expr(); });
      for (auto& [v, q] : mu(0)) values.push_back(v);
      return values;
    }
    case Impl::ThermoOpt:
      throw std::runtime_error(
          "arith-parse: thermo-opt unsupported (the parser monad's "
          "continuations escape their delimiter)");
  }
  throw std::runtime_error("arith_parse: bad impl");
}

static std::string gen_arith_node(std::mt19937_64& rng, int leaves) {
  if (leaves <= 1) return std::to_string(rng() % 100);
  int left = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(leaves - 1));
  std::string l = gen_arith_node(rng, left);
  std::string r = gen_arith_node(rng, leaves - left);
  std::string e = l + ((rng() % 2) ? "+" : "*") + r;
  if (rng() % 2) e = "(" + e + ")";
  return e;
}

std::string gen_arith_input(int leaves, std::uint64_t seed) {
  if (leaves < 1) throw std::runtime_error("gen_arith_input: leaves must be >= 1");
  std::mt19937_64 rng(seed);
  return gen_arith_node(rng, leaves);
}

// --- harness ----------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(const std::string& canonical) {
  std::uint64_t h = fnv1a64(canonical);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace {

std::string canonical_placements(const std::vector<Placement>& sols) {
  std::string out = "queens:";
  for (const auto& sol : sols) {
    for (std::size_t i = 0; i < sol.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(sol[i]);
    }
    out += ";";
  }
  return out;
}

std::string canonical_sum(const std::optional<long long>& v) {
  return v ? "sum:" + std::to_string(*v) : "none";
}

std::string canonical_values(const std::vector<long long>& vs) {
  std::string out = "vals:";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(vs[i]);
  }
  return out;
}

struct RunOutcome {
  std::string canonical;
  std::string summary;
};

// Inputs are generated once, outside the timed region.
struct BenchInputs {
  std::vector<std::string> entries;  // intparse
  std::string expression;            // arith
};

BenchInputs prepare_inputs(const BenchSpec& spec) {
  BenchInputs in;
  switch (spec.bench) {
    case BenchKind::IntParseGlob:
      in.entries = gen_intparse_input(spec.size, spec.seed, 0, 1);
      break;
    case BenchKind::IntParseLocal:
      in.entries = gen_intparse_input(spec.size, spec.seed, spec.bad_fraction.num,
                                      spec.bad_fraction.den);
      break;
    case BenchKind::ArithParse:
      in.expression = gen_arith_input(static_cast<int>(spec.size), spec.seed);
      break;
    default:
      break;
  }
  return in;
}

RunOutcome run_once(const BenchSpec& spec, const BenchInputs& in, Impl impl) {
  switch (spec.bench) {
    case BenchKind::NQueens: {
      auto sols = nqueens(static_cast<int>(spec.size), impl);
      return {canonical_placements(sols), std::to_string(sols.size()) + " solutions"};
    }
    case BenchKind::IntParseGlob:
    case BenchKind::IntParseLocal: {
      ParseMode mode = spec.bench == BenchKind::IntParseGlob ? ParseMode::Glob
                                                             : ParseMode::Local;
      auto sum = intparse(in.entries, mode, impl);
      return {canonical_sum(sum),
              sum ? "sum=" + std::to_string(*sum) : "no sum (failure)"};
    }
    case BenchKind::ArithParse: {
      auto vals = arith_parse(in.expression, impl);
      return {canonical_values(vals),
              std::to_string(vals.size()) + " prefix values"};
    }
    case BenchKind::VerifyMachines:
      throw internal_invariant("run_once: verify-machines handled separately");
  }
  throw std::runtime_error("run_once: bad bench");
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  BenchReport report;
  report.spec = spec;

  if (spec.bench == BenchKind::VerifyMachines) {
    std::string canonical;
    for (int trial = 0; trial < spec.trials; ++trial) {
      auto t0 = std::chrono::steady_clock::now();
      for (int j = 0; j < kVerifyTermsPerTrial; ++j) {
        std::uint64_t term_seed =
            spec.seed + static_cast<std::uint64_t>(trial) * kVerifyTermsPerTrial + j;
        auto t = machine::gen_term(term_seed, static_cast<int>(spec.size));
        report.total += 1;
        if (machine::differential_check(t)) report.agree += 1;
        canonical += machine::format_results(machine::run_cont(t));
      }
      auto t1 = std::chrono::steady_clock::now();
      report.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    report.digest = digest_hex(canonical);
    report.reference_digest = report.digest;
    report.mismatch = report.agree != report.total;
    report.summary =
        std::to_string(report.agree) + "/" + std::to_string(report.total) + " agree";
    return report;
  }

  if (!impl_valid_for(spec.bench, spec.impl))
    throw std::runtime_error("impl " + to_string(spec.impl) +
                             " is not valid for bench " + to_string(spec.bench));

  BenchInputs inputs = prepare_inputs(spec);
  RunOutcome reference = run_once(spec, inputs, Impl::Indirect);
  report.reference_digest = digest_hex(reference.canonical);

  RunOutcome last;
  for (int trial = 0; trial < spec.trials; ++trial) {
    auto t0 = std::chrono::steady_clock::now();
    last = run_once(spec, inputs, spec.impl);
    auto t1 = std::chrono::steady_clock::now();
    report.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  report.digest = digest_hex(last.canonical);
  report.summary = last.summary;
  report.mismatch = report.digest != report.reference_digest;
  return report;
}

void print_table(std::ostream& os, const BenchReport& r) {
  os << std::left << std::setw(16) << "bench" << std::setw(12) << "impl"
     << std::setw(8) << "n" << std::setw(7) << "trial" << std::setw(12)
     << "seconds" << std::setw(18) << "digest"
     << "summary\n";
  for (std::size_t i = 0; i < r.seconds.size(); ++i) {
    os << std::left << std::setw(16) << to_string(r.spec.bench) << std::setw(12)
       << to_string(r.spec.impl) << std::setw(8) << r.spec.size << std::setw(7)
       << (i + 1) << std::setw(12) << std::fixed << std::setprecision(6)
       << r.seconds[i] << std::setw(18) << r.digest << r.summary << "\n";
  }
  if (r.spec.bench == BenchKind::VerifyMachines) {
    os << (r.mismatch ? "machines DISAGREE\n" : "machines agree\n");
  } else {
    os << "cross-check vs indirect: "
       << (r.mismatch ? "MISMATCH (" + r.reference_digest + " expected)" : "ok")
       << "\n";
  }
}

void print_csv(std::ostream& os, const BenchReport& r, bool header) {
  if (header) os << "bench,impl,n,trial,seconds,result_digest,result_summary\n";
  for (std::size_t i = 0; i < r.seconds.size(); ++i) {
    os << to_string(r.spec.bench) << "," << to_string(r.spec.impl) << ","
       << r.spec.size << "," << (i + 1) << "," << std::fixed
       << std::setprecision(6) << r.seconds[i] << "," << r.digest << ","
       << r.summary << "\n";
  }
}

}  // namespace thermo::bench
