#pragma once

#include <stdexcept>

namespace thermo {

// A universal value was projected at a type other than the one it was
// embedded with. Signals a library bug or an impure computation body,
// never silent corruption.
class type_mismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// choose() was called outside the dynamic extent of with_nondeterminism.
class used_outside_scope : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// shift() was called with no enclosing reset on the same context.
class missing_reset : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A replay diverged from the recorded trace (frame or choice list did not
// match). The body has effects beyond this library's operators.
class replay_mismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A captured continuation was invoked after its driver loop exited. The
// monad in use is not supported by the optimized engine.
class escaped_continuation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Internal bookkeeping violated its invariants (nest underflow and the like).
class internal_invariant : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The toy-language machine stepped onto a free variable.
class stuck_term : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thermo
