#pragma once

#include <functional>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "thermo/control.hpp"
#include "thermo/monads.hpp"
#include "thermo/universal.hpp"

namespace thermo {

// reflect/reify over an arbitrary monad, built on a ControlContext whose
// answer type is the monad applied to UniversalValue. Each instance owns its
// context exclusively; one instance is single-threaded.
//
// Nested reify of the same instance works through the context's nest stack.
// Layering reify calls of *different* instances is permitted but
// experimental; nothing is asserted about cross-instance interleavings.
template <class Monad>
class Reflected {
 public:
  template <class A>
  using m = typename Monad::template m<A>;
  using MU = m<UniversalValue>;

  Reflected() = default;
  Reflected(const Reflected&) = delete;
  Reflected& operator=(const Reflected&) = delete;

  // Runs a monadic value as a direct-style effect. Only valid inside reify
  // on this same instance.
  template <class A>
  A reflect(m<A> mv) {
    return ctx_.template shift<A>(
        [mv = std::move(mv)](std::function<MU(A)> k) -> MU {
          return Monad::bind(mv, std::move(k));
        });
  }

  // Reifies the effects of body (pure except for reflect on this instance)
  // into a monadic value. The embed/project plumbing is invisible to callers.
  template <class F, class A = std::invoke_result_t<F&>>
  m<A> reify(F body) {
    MU mu = ctx_.reset(std::function<MU()>(
        [body = std::move(body)]() mutable -> MU {
          return Monad::pure(embed(body()));
        }));
    return Monad::bind(
        mu, [](const UniversalValue& u) { return Monad::pure(project<A>(u)); });
  }

  bool at_top_level() const { return ctx_.at_top_level(); }
  ControlContext<MU>& control() { return ctx_; }

 private:
  ControlContext<MU> ctx_;
};

// Direct-style nondeterminism on a list-monad instance.
template <class A>
A choose(Reflected<list_monad>& r, std::vector<A> xs) {
  return r.reflect(std::move(xs));
}

template <class A>
A fail(Reflected<list_monad>& r) {
  return r.reflect(std::vector<A>{});
}

// Direct-style state on a state-monad instance.
template <class S>
S get(Reflected<state_monad<S>>& r) {
  using MS = typename state_monad<S>::template m<S>;
  return r.reflect(MS([](S s) { return std::pair<S, S>(s, s); }));
}

template <class S>
void put(Reflected<state_monad<S>>& r, S v) {
  using MUnit = typename state_monad<S>::template m<Unit>;
  r.reflect(MUnit([v = std::move(v)](S) { return std::pair<Unit, S>(Unit{}, v); }));
}

template <class S>
void tick(Reflected<state_monad<S>>& r) {
  using MUnit = typename state_monad<S>::template m<Unit>;
  r.reflect(MUnit([](S s) { return std::pair<Unit, S>(Unit{}, s + 1); }));
}

}  // namespace thermo
