#pragma once

#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "thermo/errors.hpp"

namespace thermo {

// One recorded decision of a choose call: position k in a choice list of
// length len.
struct ChoiceIdx {
  int k = 0;
  int len = 0;
  friend bool operator==(const ChoiceIdx&, const ChoiceIdx&) = default;
};

// Next alternative at the same call site, if any.
inline std::optional<ChoiceIdx> next_idx(ChoiceIdx i) {
  if (i.k + 1 >= i.len) return std::nullopt;
  return ChoiceIdx{i.k + 1, i.len};
}

// A path through the computation tree. Element 0 is the oldest choice, the
// back is the most recent (deepest) one.
using PathIndex = std::vector<ChoiceIdx>;

// Path index of the next unexplored path: advance the deepest advanceable
// choice and drop everything below it. Empty result means exploration is
// complete.
inline PathIndex next_path(PathIndex p) {
  while (!p.empty()) {
    if (auto i = next_idx(p.back())) {
      p.back() = *i;
      return p;
    }
    p.pop_back();
  }
  return p;
}

// Control signal: an empty choice list aborts the current path. Caught by
// with_nondeterminism; user code must not absorb it.
struct empty_choice {};

// Replay-based nondeterminism. A context is single-threaded; distinct
// contexts are fully independent.
class NondetContext {
 public:
  NondetContext() = default;
  NondetContext(const NondetContext&) = delete;
  NondetContext& operator=(const NondetContext&) = delete;

  // Returns one element of xs; across replays, every element of every
  // reachable choice list is eventually returned.
  template <class T>
  T choose(const std::vector<T>& xs) {
    if (depth_ == 0)
      throw used_outside_scope("choose outside with_nondeterminism");
    if (xs.empty()) throw empty_choice{};
    ChoiceIdx i;
    if (future_.empty()) {
      i = ChoiceIdx{0, static_cast<int>(xs.size())};
    } else {
      i = future_.back();
      future_.pop_back();
      if (i.len != static_cast<int>(xs.size()))
        throw replay_mismatch("choose: choice list changed between replays");
    }
    past_.push_back(i);
    return xs[static_cast<std::size_t>(i.k)];
  }

  template <class T>
  T choose2(T a, T b) {
    return choose<T>({std::move(a), std::move(b)});
  }

  // Runs body once per path of its computation tree and collects the results
  // in path order. Restores the context to its pre-call state afterwards,
  // also when body throws.
  template <class F>
  auto with_nondeterminism(F body) -> std::vector<std::invoke_result_t<F&>> {
    using T = std::invoke_result_t<F&>;
    nest_.emplace_back(std::move(past_), std::move(future_));
    past_.clear();
    future_.clear();
    ++depth_;
    std::vector<T> acc;
    try {
      for (;;) {
        try {
          acc.push_back(body());
        } catch (const empty_choice&) {
          // aborted path, no result
        }
        PathIndex next = next_path(std::move(past_));
        past_.clear();
        if (next.empty()) break;
        future_.assign(next.rbegin(), next.rend());
      }
    } catch (...) {
      restore();
      throw;
    }
    restore();
    return acc;
  }

  template <class F>
  auto with_nondeterminism2(F body) {
    return with_nondeterminism(std::move(body));
  }

  // True between top-level runs: no replay state is live.
  bool at_top_level() const {
    return past_.empty() && future_.empty() && nest_.empty() && depth_ == 0;
  }

  const PathIndex& past() const { return past_; }
  const PathIndex& future() const { return future_; }

 private:
  void restore() {
    if (nest_.empty()) throw internal_invariant("nondet nest underflow");
    past_ = std::move(nest_.back().first);
    future_ = std::move(nest_.back().second);
    nest_.pop_back();
    --depth_;
  }

  PathIndex past_;    // oldest choice first
  PathIndex future_;  // back() is the next choice to consume
  std::vector<std::pair<PathIndex, PathIndex>> nest_;
  int depth_ = 0;
};

// Shared context for quick interactive use; library code should own its own.
inline NondetContext& default_nondet_context() {
  thread_local NondetContext ctx;
  return ctx;
}

}  // namespace thermo
