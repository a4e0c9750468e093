#pragma once

#include <functional>
#include <iterator>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace thermo {

using Unit = std::monostate;

// Nondeterminism: a computation returning A is a list of A.
struct list_monad {
  template <class A>
  using m = std::vector<A>;

  template <class A>
  static m<A> pure(A x) {
    m<A> out;
    out.push_back(std::move(x));
    return out;
  }

  template <class A, class F>
  static auto bind(const m<A>& xs, F f) -> std::invoke_result_t<F&, const A&> {
    std::invoke_result_t<F&, const A&> out;
    for (const A& x : xs) {
      auto ys = f(x);
      out.insert(out.end(), std::make_move_iterator(ys.begin()),
                 std::make_move_iterator(ys.end()));
    }
    return out;
  }
};

// Failure: a computation returning A either produces one A or nothing.
struct maybe_monad {
  template <class A>
  using m = std::optional<A>;

  template <class A>
  static m<A> pure(A x) {
    return m<A>(std::move(x));
  }

  template <class A, class F>
  static auto bind(const m<A>& mv, F f) -> std::invoke_result_t<F&, const A&> {
    if (!mv) return {};
    return f(*mv);
  }
};

// State: a computation returning A is a function S -> (A, S).
template <class S>
struct state_monad {
  template <class A>
  using m = std::function<std::pair<A, S>(S)>;

  template <class A>
  static m<A> pure(A x) {
    return [x = std::move(x)](S s) { return std::pair<A, S>(x, std::move(s)); };
  }

  template <class A, class F>
  static auto bind(m<A> mv, F f) -> std::invoke_result_t<F&, A> {
    using MB = std::invoke_result_t<F&, A>;
    return MB([mv = std::move(mv), f = std::move(f)](S s) {
      auto [x, s2] = mv(std::move(s));
      return f(std::move(x))(std::move(s2));
    });
  }
};

}  // namespace thermo
