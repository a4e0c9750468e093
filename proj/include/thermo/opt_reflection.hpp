#pragma once

#include <cstdint>
#include <functional>
#include <iterator>
#include <memory>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "thermo/control.hpp"
#include "thermo/errors.hpp"
#include "thermo/universal.hpp"

namespace thermo {

// Driver-level aggregation result: either a finished monadic value, or a
// marker that the current path keeps running in place (a direct return is
// in flight).
template <class MV>
struct OptFinal {
  std::optional<MV> value;

  static OptFinal suspended() { return {}; }
  static OptFinal of(MV v) { return OptFinal{std::move(v)}; }
};

namespace detail {

// Builds the aggregation continuation that handles the siblings of a list
// element from index i onward: it receives the monadic value of the subtree
// for element i-1, explores the remaining elements through later_use, and
// finally applies done to the concatenation.
template <class A, class B, class Final>
std::function<Final(std::vector<B>)> list_siblings(
    std::shared_ptr<const std::vector<A>> xs, std::size_t i,
    std::function<Final(const A&, std::function<Final(std::vector<B>)>)> later_use,
    std::function<Final(std::vector<B>)> done) {
  return [xs, i, later_use, done](std::vector<B> a) -> Final {
    if (i == xs->size()) return done(std::move(a));
    auto with_a = [a = std::move(a), done](std::vector<B> b) -> Final {
      std::vector<B> ab = a;
      ab.insert(ab.end(), std::make_move_iterator(b.begin()),
                std::make_move_iterator(b.end()));
      return done(std::move(ab));
    };
    return later_use((*xs)[i],
                     list_siblings<A, B, Final>(xs, i + 1, later_use,
                                                std::move(with_a)));
  };
}

}  // namespace detail

// Continuation-passing bind for the list monad with a split consumer:
// first_use is applied to the first element (if any), later_use to every
// subsequent one, and the aggregation continuations are threaded so that all
// list appends run at the caller's level.
template <class A, class B, class Final>
Final cps_list_bind(
    std::vector<A> xs,
    std::function<Final(const A&, std::function<Final(std::vector<B>)>)> first_use,
    std::function<Final(const A&, std::function<Final(std::vector<B>)>)> later_use,
    std::function<Final(std::vector<B>)> done) {
  if (xs.empty()) return done({});
  auto shared = std::make_shared<const std::vector<A>>(std::move(xs));
  return first_use((*shared)[0],
                   detail::list_siblings<A, B, Final>(shared, 1,
                                                      std::move(later_use),
                                                      std::move(done)));
}

// Maybe-monad counterpart. A present value is always a first use; later_use
// is never invoked.
template <class A, class B, class Final>
Final cps_maybe_bind(
    std::optional<A> mv,
    std::function<Final(const A&, std::function<Final(std::optional<B>)>)> first_use,
    std::function<Final(const A&, std::function<Final(std::optional<B>)>)>,
    std::function<Final(std::optional<B>)> done) {
  if (!mv) return done(std::nullopt);
  return first_use(*mv, std::move(done));
}

struct cps_list_monad {
  template <class A>
  using m = std::vector<A>;

  template <class A>
  static m<A> pure(A x) {
    m<A> out;
    out.push_back(std::move(x));
    return out;
  }

  template <class A, class Final>
  static Final cps_bind(
      m<A> mv,
      std::function<Final(const A&, std::function<Final(m<UniversalValue>)>)> first_use,
      std::function<Final(const A&, std::function<Final(m<UniversalValue>)>)> later_use,
      std::function<Final(m<UniversalValue>)> done) {
    return cps_list_bind<A, UniversalValue, Final>(
        std::move(mv), std::move(first_use), std::move(later_use), std::move(done));
  }

  template <class A>
  static m<A> project_values(const m<UniversalValue>& mu) {
    m<A> out;
    out.reserve(mu.size());
    for (const UniversalValue& u : mu) out.push_back(project<A>(u));
    return out;
  }
};

struct cps_maybe_monad {
  template <class A>
  using m = std::optional<A>;

  template <class A>
  static m<A> pure(A x) {
    return m<A>(std::move(x));
  }

  template <class A, class Final>
  static Final cps_bind(
      m<A> mv,
      std::function<Final(const A&, std::function<Final(m<UniversalValue>)>)> first_use,
      std::function<Final(const A&, std::function<Final(m<UniversalValue>)>)> later_use,
      std::function<Final(m<UniversalValue>)> done) {
    return cps_maybe_bind<A, UniversalValue, Final>(
        std::move(mv), std::move(first_use), std::move(later_use), std::move(done));
  }

  template <class A>
  static m<A> project_values(const m<UniversalValue>& mu) {
    if (!mu) return std::nullopt;
    return m<A>(project<A>(*mu));
  }
};

namespace detail {

// Signals caught by the owning driver loop only.
template <class MV>
struct opt_invoke {
  const void* owner;
  std::vector<Frame> future;            // trace to replay, consumption order
  std::function<OptFinal<MV>(MV)> resume;  // continues aggregation afterwards
};

template <class MV>
struct opt_path_done {
  const void* owner;
  MV value;  // monadic value of the completed path's subtree
};

}  // namespace detail

struct OptStats {
  std::uint64_t invokes = 0;     // replay signals raised
  std::uint64_t first_uses = 0;  // direct returns taken
  std::uint64_t runs = 0;        // body executions started by the driver
};

// Fused reflect/reify with the two stack optimizations: a reflected bind in
// tail position returns its first value directly into the running body, and
// every other continuation invocation unwinds to the driver loop before
// replaying, so at most one body execution is ever live.
template <class CpsMonad>
class OptReflected {
 public:
  template <class A>
  using m = typename CpsMonad::template m<A>;
  using MU = m<UniversalValue>;
  using Final = OptFinal<MU>;
  using Agg = std::function<Final(MU)>;

  OptReflected() = default;
  OptReflected(const OptReflected&) = delete;
  OptReflected& operator=(const OptReflected&) = delete;

  template <class A>
  A opt_reflect(m<A> mv) {
    if (!future_.empty()) {
      if (future_.back().kind != Frame::Kind::Return)
        throw internal_invariant("optimized replay met a non-return frame");
      Frame fr = std::move(future_.back());
      future_.pop_back();
      A v = project<A>(fr.value);
      past_.push_back(std::move(fr));
      return v;
    }
    if (driver_ == nullptr)
      throw escaped_continuation(
          "reflect outside an active reify driver; the monad's continuations "
          "escape their delimiter (state-like monads are unsupported here)");

    // snapshot of the trace up to this reflect, shared by all its siblings
    auto prefix = std::make_shared<const std::vector<Frame>>(past_);
    DriverState* drv = driver_;
    bool direct = false;
    UniversalValue direct_value;
    std::function<Final(const A&, Agg)> first_use =
        [this, drv, &direct, &direct_value](const A& x, Agg agg) -> Final {
          ++stats_.first_uses;
          UniversalValue u = embed(x);
          past_.push_back(Frame::ret(u));
          drv->sigmas.push_back(std::move(agg));
          direct_value = std::move(u);
          direct = true;
          return Final::suspended();
        };
    std::function<Final(const A&, Agg)> later_use =
        [this, drv, prefix](const A& x, Agg agg) -> Final {
          ++stats_.invokes;
          std::vector<Frame> fut = *prefix;
          fut.push_back(Frame::ret(embed(x)));
          throw detail::opt_invoke<MU>{drv, std::move(fut), std::move(agg)};
        };
    Final fin = CpsMonad::template cps_bind<A, Final>(
        std::move(mv), std::move(first_use), std::move(later_use),
        Agg([](MU v) -> Final { return Final::of(std::move(v)); }));
    if (!fin.value) {
      if (!direct) throw internal_invariant("suspension without a direct return");
      return project<A>(direct_value);
    }
    throw detail::opt_path_done<MU>{drv, std::move(*fin.value)};
  }

  template <class F, class A = std::invoke_result_t<F&>>
  m<A> opt_reify(F body) {
    nest_.push_back(Saved{cur_expr_, std::move(past_), std::move(future_)});
    cur_expr_ = [body = std::move(body)]() mutable -> MU {
      return CpsMonad::pure(embed(body()));
    };
    past_.clear();
    future_.clear();
    try {
      MU total = drive();
      restore();
      return CpsMonad::template project_values<A>(total);
    } catch (...) {
      restore();
      throw;
    }
  }

  const OptStats& stats() const { return stats_; }
  void reset_stats() { stats_ = OptStats{}; }

  bool at_top_level() const {
    return past_.empty() && future_.empty() && nest_.empty() &&
           driver_ == nullptr;
  }

 private:
  struct DriverState {
    std::vector<Agg> sigmas;  // pending aggregation continuations, newest last
  };
  struct Saved {
    std::function<MU()> expr;
    std::vector<Frame> past;
    std::vector<Frame> future;
  };

  // The driver loop. Alternates between replaying the body against a future
  // and delivering a finished subtree value to the most recent pending
  // aggregation. All replays happen here, at the top of the stack.
  MU drive() {
    DriverState ds;
    DriverState* prev = driver_;
    driver_ = &ds;
    try {
      std::vector<Frame> fut;
      MU carried{};
      bool running = true;
      for (;;) {
        if (running) {
          ++stats_.runs;
          past_.clear();
          future_.assign(fut.rbegin(), fut.rend());
          try {
            carried = cur_expr_();
            running = false;
          } catch (detail::opt_path_done<MU>& d) {
            if (d.owner != &ds) throw;
            carried = std::move(d.value);
            running = false;
          } catch (detail::opt_invoke<MU>& iv) {
            if (iv.owner != &ds) throw;
            ds.sigmas.push_back(std::move(iv.resume));
            fut = std::move(iv.future);
          }
        } else {
          if (ds.sigmas.empty()) break;
          Agg sigma = std::move(ds.sigmas.back());
          ds.sigmas.pop_back();
          try {
            Final fin = sigma(std::move(carried));
            if (!fin.value)
              throw internal_invariant("driver aggregation suspended");
            carried = std::move(*fin.value);
          } catch (detail::opt_invoke<MU>& iv) {
            if (iv.owner != &ds) throw;
            ds.sigmas.push_back(std::move(iv.resume));
            fut = std::move(iv.future);
            running = true;
          }
        }
      }
      driver_ = prev;
      return carried;
    } catch (...) {
      driver_ = prev;
      throw;
    }
  }

  void restore() {
    if (nest_.empty()) throw internal_invariant("opt nest underflow");
    cur_expr_ = std::move(nest_.back().expr);
    past_ = std::move(nest_.back().past);
    future_ = std::move(nest_.back().future);
    nest_.pop_back();
  }

  std::function<MU()> cur_expr_;
  std::vector<Frame> past_;
  std::vector<Frame> future_;
  std::vector<Saved> nest_;
  DriverState* driver_ = nullptr;
  OptStats stats_;
};

}  // namespace thermo
