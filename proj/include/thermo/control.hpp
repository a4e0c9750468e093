#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "thermo/errors.hpp"
#include "thermo/universal.hpp"

namespace thermo {

// One replay instruction: either make the next shift return the recorded
// value, or make it enter its body.
struct Frame {
  enum class Kind { Return, Enter };
  Kind kind = Kind::Enter;
  UniversalValue value;  // Return frames only

  static Frame ret(UniversalValue v) { return Frame{Kind::Return, std::move(v)}; }
  static Frame enter() { return Frame{Kind::Enter, {}}; }
};

namespace detail {

// Carries a finished answer from a shift body to the enclosing delimiter.
// Control signal, not an error; user code inside a reset body must not
// absorb it (a catch-all there breaks the purity contract).
template <class Ans>
struct done_signal {
  const void* owner;
  Ans value;
};

}  // namespace detail

// Delimited control for one fixed answer type, implemented by replaying the
// reset body against a recorded frame future. One context per answer type;
// contexts are independent, and each is single-threaded.
template <class Ans>
class ControlContext {
 public:
  ControlContext() {
    cur_expr_ = []() -> Ans {
      throw internal_invariant("no computation installed");
    };
  }
  ControlContext(const ControlContext&) = delete;
  ControlContext& operator=(const ControlContext&) = delete;

  // Delimits f: evaluates it under an empty future.
  Ans reset(std::function<Ans()> f) { return run_with_future(std::move(f), {}); }

  // Replays f against a known future (frames in consumption order) inside a
  // fresh delimiter. Saves the surrounding state and restores it on every
  // exit path.
  Ans run_with_future(std::function<Ans()> f, std::vector<Frame> future) {
    nest_.push_back(Saved{std::move(cur_expr_), std::move(past_), std::move(future_)});
    cur_expr_ = f;
    past_.clear();
    future_.assign(future.rbegin(), future.rend());
    try {
      Ans result = [&]() -> Ans {
        try {
          Ans v = f();
          if (!future_.empty())
            throw replay_mismatch(
                "replay finished with unconsumed frames; the body is impure");
          return v;
        } catch (detail::done_signal<Ans>& d) {
          if (d.owner != this) throw;
          return std::move(d.value);
        }
      }();
      restore();
      return result;
    } catch (...) {
      restore();
      throw;
    }
  }

  // Captures the continuation up to the enclosing reset as a function
  // V -> Ans and hands it to body. The captured continuation stays valid
  // after the reset returns: invoking it replays the recorded trace inside
  // a fresh delimiter.
  template <class V, class Body>
  V shift(Body body) {
    if (nest_.empty()) throw missing_reset("shift outside reset");
    if (!future_.empty() && future_.back().kind == Frame::Kind::Return) {
      Frame fr = std::move(future_.back());
      future_.pop_back();
      V v = project<V>(fr.value);
      past_.push_back(std::move(fr));
      return v;
    }
    if (!future_.empty()) future_.pop_back();  // Enter: descend into the body
    // trace of the captured continuation, shared by all its invocations
    auto prefix = std::make_shared<const std::vector<Frame>>(past_);
    std::function<Ans()> expr = cur_expr_;
    std::function<Ans(V)> k = [this, prefix, expr](V v) -> Ans {
      std::vector<Frame> fut = *prefix;
      fut.push_back(Frame::ret(embed(std::move(v))));
      return run_with_future(expr, std::move(fut));
    };
    past_.push_back(Frame::enter());
    Ans result = body(std::move(k));
    throw detail::done_signal<Ans>{this, std::move(result)};
  }

  // True between top-level resets.
  bool at_top_level() const {
    return past_.empty() && future_.empty() && nest_.empty();
  }

  std::size_t past_size() const { return past_.size(); }
  std::size_t future_size() const { return future_.size(); }
  std::size_t nest_depth() const { return nest_.size(); }

 private:
  struct Saved {
    std::function<Ans()> expr;
    std::vector<Frame> past;
    std::vector<Frame> future;
  };

  void restore() {
    if (nest_.empty()) throw internal_invariant("control nest underflow");
    cur_expr_ = std::move(nest_.back().expr);
    past_ = std::move(nest_.back().past);
    future_ = std::move(nest_.back().future);
    nest_.pop_back();
  }

  std::function<Ans()> cur_expr_;
  std::vector<Frame> past_;    // oldest frame first
  std::vector<Frame> future_;  // back() is the next frame to consume
  std::vector<Saved> nest_;
};

}  // namespace thermo
