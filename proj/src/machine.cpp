#include "thermo/machine.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "thermo/errors.hpp"

namespace thermo::machine {

TermPtr var(std::string name) {
  return std::make_shared<const Term>(Term{Term::Kind::Var, std::move(name), 0, nullptr, nullptr});
}

TermPtr num(Nat n) {
  return std::make_shared<const Term>(Term{Term::Kind::Num, {}, n, nullptr, nullptr});
}

TermPtr succ(TermPtr t) {
  return std::make_shared<const Term>(Term{Term::Kind::Succ, {}, 0, std::move(t), nullptr});
}

TermPtr let(std::string name, TermPtr bound, TermPtr body) {
  return std::make_shared<const Term>(
      Term{Term::Kind::Let, std::move(name), 0, std::move(bound), std::move(body)});
}

TermPtr choice(TermPtr left, TermPtr right) {
  bool atoms = (left->kind == Term::Kind::Var || left->kind == Term::Kind::Num) &&
               (right->kind == Term::Kind::Var || right->kind == Term::Kind::Num);
  if (!atoms) throw std::runtime_error("choice arguments must be variables or numerals");
  return std::make_shared<const Term>(
      Term{Term::Kind::Choose, {}, 0, std::move(left), std::move(right)});
}

static void free_vars(const TermPtr& t, std::vector<std::string>& bound, bool& closed) {
  switch (t->kind) {
    case Term::Kind::Var: {
      for (const auto& b : bound)
        if (b == t->name) return;
      closed = false;
      return;
    }
    case Term::Kind::Num:
      return;
    case Term::Kind::Succ:
      free_vars(t->a, bound, closed);
      return;
    case Term::Kind::Let:
      free_vars(t->a, bound, closed);
      bound.push_back(t->name);
      free_vars(t->b, bound, closed);
      bound.pop_back();
      return;
    case Term::Kind::Choose:
      free_vars(t->a, bound, closed);
      free_vars(t->b, bound, closed);
      return;
  }
}

bool is_closed(const TermPtr& t) {
  std::vector<std::string> bound;
  bool closed = true;
  free_vars(t, bound, closed);
  return closed;
}

TermPtr substitute(const TermPtr& t, const std::string& name, Nat n) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->name == name ? num(n) : t;
    case Term::Kind::Num:
      return t;
    case Term::Kind::Succ:
      return succ(substitute(t->a, name, n));
    case Term::Kind::Let: {
      TermPtr bound = substitute(t->a, name, n);
      if (t->name == name) return let(t->name, std::move(bound), t->b);  // shadowed
      return let(t->name, std::move(bound), substitute(t->b, name, n));
    }
    case Term::Kind::Choose:
      return choice(substitute(t->a, name, n), substitute(t->b, name, n));
  }
  throw internal_invariant("substitute: unreachable");
}

std::string to_text(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return "(var " + t->name + ")";
    case Term::Kind::Num:
      return "(num " + std::to_string(t->value) + ")";
    case Term::Kind::Succ:
      return "(succ " + to_text(t->a) + ")";
    case Term::Kind::Let:
      return "(let " + t->name + " " + to_text(t->a) + " " + to_text(t->b) + ")";
    case Term::Kind::Choose: {
      auto atom = [](const TermPtr& x) {
        return x->kind == Term::Kind::Var ? x->name : std::to_string(x->value);
      };
      return "(choose " + atom(t->a) + " " + atom(t->b) + ")";
    }
  }
  throw internal_invariant("to_text: unreachable");
}

namespace {

struct Tokens {
  std::vector<std::string> items;
  std::size_t pos = 0;

  const std::string& peek() const {
    if (pos >= items.size()) throw std::runtime_error("term syntax: unexpected end");
    return items[pos];
  }
  std::string next() {
    std::string t = peek();
    ++pos;
    return t;
  }
  void expect(const std::string& s) {
    if (next() != s) throw std::runtime_error("term syntax: expected " + s);
  }
};

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.items.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '(' || c == ')') {
      flush();
      out.items.push_back(std::string(1, c));
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

Nat parse_nat(const std::string& s) {
  if (s.empty()) throw std::runtime_error("term syntax: expected a number");
  Nat v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::runtime_error("term syntax: bad number " + s);
    v = v * 10 + static_cast<Nat>(c - '0');
  }
  return v;
}

// choose arguments may be bare variable names or numerals
TermPtr parse_atom(const std::string& s) {
  if (!s.empty() && s[0] >= '0' && s[0] <= '9') return num(parse_nat(s));
  return var(s);
}

TermPtr parse_node(Tokens& tk) {
  tk.expect("(");
  std::string head = tk.next();
  TermPtr result;
  if (head == "num") {
    result = num(parse_nat(tk.next()));
  } else if (head == "var") {
    result = var(tk.next());
  } else if (head == "succ") {
    result = succ(parse_node(tk));
  } else if (head == "let") {
    std::string name = tk.next();
    TermPtr bound = parse_node(tk);
    TermPtr body = parse_node(tk);
    result = let(std::move(name), std::move(bound), std::move(body));
  } else if (head == "choose") {
    TermPtr left = parse_atom(tk.next());
    TermPtr right = parse_atom(tk.next());
    result = choice(std::move(left), std::move(right));
  } else {
    throw std::runtime_error("term syntax: unknown form " + head);
  }
  tk.expect(")");
  return result;
}

}  // namespace

TermPtr parse_term(std::string_view text) {
  Tokens tk = tokenize(text);
  TermPtr t = parse_node(tk);
  if (tk.pos != tk.items.size())
    throw std::runtime_error("term syntax: trailing tokens");
  return t;
}

std::string format_results(const std::vector<Nat>& results) {
  std::string out = "[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(results[i]);
  }
  out += "]";
  return out;
}

static Cont succ_cont(Cont next) {
  return std::make_shared<const ContNode>(ContNode{ContNode::Kind::Succ, std::move(next), {}, nullptr});
}

static Cont let_cont(std::string binder, Cont next, TermPtr body) {
  return std::make_shared<const ContNode>(
      ContNode{ContNode::Kind::Let, std::move(next), std::move(binder), std::move(body)});
}

std::string cont_to_text(const Cont& k) {
  if (!k) return "halt";
  if (k->kind == ContNode::Kind::Succ) return "succ." + cont_to_text(k->next);
  return "let[" + k->binder + "," + to_text(k->body) + "]." + cont_to_text(k->next);
}

ContMachineConfig initial_cont(TermPtr t) { return ContMachineConfig{std::move(t), nullptr, {}, {}}; }

HistMachineConfig initial_hist(TermPtr t) {
  HistMachineConfig c;
  c.term = t;
  c.initial = std::move(t);
  return c;
}

static std::vector<Nat> prepend(Nat n, std::vector<Nat> r) {
  r.insert(r.begin(), n);
  return r;
}

// Shared pure rules: Succ/Let focusing and the two value/frame reductions.
// Returns false when the focused form is a value at the halt instruction
// (the impure rules of each machine take over) and throws on free variables.
template <class Config>
static bool step_pure(Config& c) {
  switch (c.term->kind) {
    case Term::Kind::Var:
      throw stuck_term("free variable " + c.term->name);
    case Term::Kind::Succ:
      c.cont = succ_cont(c.cont);
      c.term = c.term->a;
      return true;
    case Term::Kind::Let:
      c.cont = let_cont(c.term->name, c.cont, c.term->b);
      c.term = c.term->a;
      return true;
    case Term::Kind::Num: {
      if (!c.cont) return false;  // value at halt
      if (c.cont->kind == ContNode::Kind::Succ) {
        c.term = num(c.term->value + 1);
        c.cont = c.cont->next;
        return true;
      }
      c.term = substitute(c.cont->body, c.cont->binder, c.term->value);
      c.cont = c.cont->next;
      return true;
    }
    case Term::Kind::Choose:
      return false;  // impure rule
  }
  throw internal_invariant("step: unreachable");
}

static std::pair<Nat, Nat> choice_operands(const Term& t) {
  if (t.a->kind != Term::Kind::Num || t.b->kind != Term::Kind::Num)
    throw stuck_term("choose on an unbound variable");
  return {t.a->value, t.b->value};
}

ContStep step_cont(ContMachineConfig c) {
  if (step_pure(c)) return c;
  if (c.term->kind == Term::Kind::Choose) {
    auto [n1, n2] = choice_operands(*c.term);
    c.soup.emplace_back(num(n2), c.cont);
    c.term = num(n1);
    return c;
  }
  // value at halt
  Nat n = c.term->value;
  if (c.soup.empty()) return prepend(n, std::move(c.result));
  auto [t, k] = c.soup.back();
  c.soup.pop_back();
  c.term = std::move(t);
  c.cont = std::move(k);
  c.result = prepend(n, std::move(c.result));
  return c;
}

HistStep step_hist(HistMachineConfig c) {
  if (step_pure(c)) return c;
  if (c.term->kind == Term::Kind::Choose) {
    auto [n1, n2] = choice_operands(*c.term);
    if (c.future.empty()) {
      c.future.push_back(1);  // unknown future: explore the first branch
      return c;
    }
    int i = c.future.front();
    c.future.erase(c.future.begin());
    c.past.push_back(i);
    c.term = num(i == 1 ? n1 : n2);
    return c;
  }
  // value at halt: restart the initial term on the next history, or finish
  Nat n = c.term->value;
  std::optional<std::vector<int>> next = nexthist(std::move(c.past));
  if (!next) return prepend(n, std::move(c.result));
  c.term = c.initial;
  c.cont = nullptr;
  c.past.clear();
  c.future = std::move(*next);
  c.result = prepend(n, std::move(c.result));
  return c;
}

std::optional<std::vector<int>> nexthist(std::vector<int> past) {
  while (!past.empty() && past.back() == 2) past.pop_back();
  if (past.empty()) return std::nullopt;
  past.back() = 2;
  return past;
}

std::vector<Nat> run_cont(const TermPtr& t) {
  ContStep s = initial_cont(t);
  while (std::holds_alternative<ContMachineConfig>(s))
    s = step_cont(std::move(std::get<ContMachineConfig>(s)));
  return std::get<std::vector<Nat>>(std::move(s));
}

std::vector<Nat> run_hist(const TermPtr& t) {
  HistStep s = initial_hist(t);
  while (std::holds_alternative<HistMachineConfig>(s))
    s = step_hist(std::move(std::get<HistMachineConfig>(s)));
  return std::get<std::vector<Nat>>(std::move(s));
}

namespace {

struct TermGen {
  std::mt19937_64 rng;
  int fresh = 0;

  std::uint64_t below(std::uint64_t bound) { return rng() % bound; }

  TermPtr leaf(const std::vector<std::string>& scope) {
    if (!scope.empty() && below(2) == 0)
      return var(scope[below(scope.size())]);
    return num(below(10));
  }

  TermPtr gen(int budget, std::vector<std::string>& scope) {
    if (budget <= 1) return leaf(scope);
    // Weighted pick: lean on let to grow scope, choose once variables exist.
    std::uint64_t w = below(10);
    if (!scope.empty() && budget >= 3 && w < 4) {
      TermPtr left = var(scope[below(scope.size())]);
      TermPtr right = var(scope[below(scope.size())]);
      return choice(std::move(left), std::move(right));
    }
    if (budget >= 4 && w < 8) {
      int bound_budget = 1 + static_cast<int>(below(static_cast<std::uint64_t>(budget - 3)));
      std::string name = "x" + std::to_string(fresh++);
      TermPtr bound = gen(bound_budget, scope);
      scope.push_back(name);
      TermPtr body = gen(budget - 1 - bound_budget, scope);
      scope.pop_back();
      return let(std::move(name), std::move(bound), std::move(body));
    }
    return succ(gen(budget - 1, scope));
  }
};

}  // namespace

TermPtr gen_term(std::uint64_t seed, int max_size) {
  if (max_size < 1) throw std::runtime_error("gen_term: max_size must be >= 1");
  TermGen g{std::mt19937_64(seed), 0};
  std::vector<std::string> scope;
  return g.gen(max_size, scope);
}

bool differential_check(const TermPtr& t) { return run_cont(t) == run_hist(t); }

}  // namespace thermo::machine
