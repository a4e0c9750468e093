#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace thermo::machine {

using Nat = std::uint64_t;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Toy choose-language. Choice arguments are restricted to variables (they
// become numerals only through let-substitution); terms entering a machine
// must be closed.
struct Term {
  enum class Kind { Var, Num, Succ, Let, Choose };
  Kind kind;
  std::string name;  // Var name, Let binder
  Nat value = 0;     // Num
  TermPtr a;         // Succ child, Let bound term, Choose left atom
  TermPtr b;         // Let body, Choose right atom
};

TermPtr var(std::string name);
TermPtr num(Nat n);
TermPtr succ(TermPtr t);
TermPtr let(std::string name, TermPtr bound, TermPtr body);
TermPtr choice(TermPtr left, TermPtr right);

bool is_closed(const TermPtr& t);
TermPtr substitute(const TermPtr& t, const std::string& name, Nat n);

// Textual syntax: (num 3), (succ T), (let x T U), (var x), (choose x y).
std::string to_text(const TermPtr& t);
TermPtr parse_term(std::string_view text);  // throws std::runtime_error
std::string format_results(const std::vector<Nat>& results);  // "[2,1]"

// Machine continuations: a stack of successor and let frames; nullptr is the
// halt instruction at the bottom.
struct ContNode;
using Cont = std::shared_ptr<const ContNode>;

struct ContNode {
  enum class Kind { Succ, Let };
  Kind kind;
  Cont next;
  std::string binder;  // Let
  TermPtr body;        // Let
};

std::string cont_to_text(const Cont& k);

// Continuation machine: term, machine continuation, a soup of suspended
// threads (back of the vector is the head), and the result list (index 0 is
// the most recently finished value).
struct ContMachineConfig {
  TermPtr term;
  Cont cont;
  std::vector<std::pair<TermPtr, Cont>> soup;
  std::vector<Nat> result;
};

// History machine: the soup is replaced by a past and a future of choices in
// {1,2}; `initial` is the replayed root term and never changes over a run.
struct HistMachineConfig {
  TermPtr term;
  Cont cont;
  std::vector<int> past;    // oldest choice first
  std::vector<int> future;  // consumed from the front
  std::vector<Nat> result;
  TermPtr initial;
};

using ContStep = std::variant<ContMachineConfig, std::vector<Nat>>;
using HistStep = std::variant<HistMachineConfig, std::vector<Nat>>;

ContMachineConfig initial_cont(TermPtr t);
HistMachineConfig initial_hist(TermPtr t);

// One reduction; the second variant alternative is the final result list.
ContStep step_cont(ContMachineConfig c);
HistStep step_hist(HistMachineConfig c);

// Strip trailing 2s, flip the last 1 to 2. Empty optional when no 1 remains.
std::optional<std::vector<int>> nexthist(std::vector<int> past);

std::vector<Nat> run_cont(const TermPtr& t);
std::vector<Nat> run_hist(const TermPtr& t);

// Deterministic pseudo-random closed term, size bounded by max_size.
TermPtr gen_term(std::uint64_t seed, int max_size);

// Both machines compute the same result list, element for element.
bool differential_check(const TermPtr& t);

}  // namespace thermo::machine
