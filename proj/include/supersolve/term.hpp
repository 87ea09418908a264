#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supersolve/algebra.hpp"
#include "supersolve/error.hpp"

namespace supersolve {

/// Polynomial term: a variable x_i (1-based), an element constant #k, or an
/// operation applied to subterms.
struct Term {
  enum class Kind { variable, constant, apply };

  Kind kind = Kind::constant;
  std::size_t index = 0;  // variable index or constant element
  std::string op;
  std::vector<Term> children;

  static Term var(std::size_t i) { return Term{Kind::variable, i, {}, {}}; }
  static Term constant(std::size_t c) { return Term{Kind::constant, c, {}, {}}; }
  static Term apply(std::string op, std::vector<Term> children) {
    return Term{Kind::apply, 0, std::move(op), std::move(children)};
  }

  bool operator==(const Term&) const = default;
};

struct Equation {
  Term lhs;
  Term rhs;

  bool operator==(const Equation&) const = default;
};

struct EquationSystem {
  std::vector<Equation> equations;
  std::size_t num_variables = 0;  // highest variable index occurring

  std::size_t size() const noexcept { return equations.size(); }
};

using Assignment = std::vector<Element>;

// Number of AST nodes.
inline std::size_t term_length(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += term_length(c);
  return n;
}

inline std::size_t system_length(const EquationSystem& sys) {
  std::size_t n = 0;
  for (const auto& eq : sys.equations) n += term_length(eq.lhs) + term_length(eq.rhs);
  return n;
}

inline std::size_t max_variable(const Term& t) {
  if (t.kind == Term::Kind::variable) return t.index;
  std::size_t m = 0;
  for (const auto& c : t.children) m = std::max(m, max_variable(c));
  return m;
}

inline void print_term(const Term& t, std::string& out) {
  switch (t.kind) {
    case Term::Kind::variable:
      out += 'x';
      out += std::to_string(t.index);
      return;
    case Term::Kind::constant:
      out += '#';
      out += std::to_string(t.index);
      return;
    case Term::Kind::apply:
      out += t.op;
      out += '(';
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i > 0) out += ", ";
        print_term(t.children[i], out);
      }
      out += ')';
      return;
  }
}

inline std::string print_term(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

inline std::string print_system(const EquationSystem& sys) {
  std::string out;
  for (const auto& eq : sys.equations) {
    print_term(eq.lhs, out);
    out += " = ";
    print_term(eq.rhs, out);
    out += '\n';
  }
  return out;
}

namespace detail {

class TermParser {
 public:
  TermParser(std::string_view text, std::size_t line = 1) : text_(text), line_(line) {}

  Term parse_complete() {
    Term t = parse_term();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' after term");
    return t;
  }

  Term parse_term() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a term");
    const char c = text_[pos_];
    if (c == '#') {
      ++pos_;
      return Term::constant(parse_number("constant"));
    }
    if (!is_ident_start(c)) fail("expected a term, found '" + std::string(1, c) + "'");

    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);

    if (is_variable(ident)) {
      std::size_t index = 0;
      for (char d : ident.substr(1)) {
        if (index > (SIZE_MAX - 9) / 10) fail_at(start, "variable index too large");
        index = index * 10 + static_cast<std::size_t>(d - '0');
      }
      if (index == 0) fail_at(start, "variable indices start at x1");
      return Term::var(index);
    }

    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      fail("expected '(' after operation name '" + std::string(ident) + "'");
    }
    ++pos_;
    std::vector<Term> children;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
      return Term::apply(std::string(ident), std::move(children));
    }
    while (true) {
      children.push_back(parse_term());
      skip_space();
      if (pos_ >= text_.size()) fail("unclosed application of '" + std::string(ident) + "'");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      fail("expected ',' or ')' in arguments of '" + std::string(ident) + "'");
    }
    return Term::apply(std::string(ident), std::move(children));
  }

  std::size_t position() const noexcept { return pos_; }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    auto [line, column] = line_column(text_, at);
    throw ParseError(msg, line_ + line - 1, column);
  }

 private:
  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_variable(std::string_view ident) {
    return ident.size() >= 2 && ident[0] == 'x' &&
           std::all_of(ident.begin() + 1, ident.end(),
                       [](char d) { return std::isdigit(static_cast<unsigned char>(d)); });
  }

  std::size_t parse_number(const char* what) {
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (value > (SIZE_MAX - 9) / 10) fail_at(start, std::string(what) + " too large");
      value = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected digits after '#' in ") + what);
    return value;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `term := var | const | opname '(' [term (',' term)*] ')'`.
inline Term parse_term(std::string_view text) {
  return detail::TermParser(text).parse_complete();
}

/// One equation `lhs = rhs` per line; ';' comments and blank lines are ignored.
inline EquationSystem parse_system(std::string_view text) {
  EquationSystem sys;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(begin, end - begin);
    if (auto semi = line.find(';'); semi != std::string_view::npos) line = line.substr(0, semi);

    detail::TermParser probe(line, line_no);
    probe.skip_space();
    if (probe.position() != line.size()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        probe.fail_at(line.size(), "expected '=' in equation");
      }
      if (line.find('=', eq + 1) != std::string_view::npos) {
        probe.fail_at(line.find('=', eq + 1), "more than one '=' in equation");
      }
      Term lhs = detail::TermParser(line.substr(0, eq), line_no).parse_complete();
      // Parse the right side against the whole line so columns stay correct.
      std::string padded(eq + 1, ' ');
      padded.append(line.substr(eq + 1));
      Term rhs = detail::TermParser(padded, line_no).parse_complete();
      sys.num_variables = std::max({sys.num_variables, max_variable(lhs), max_variable(rhs)});
      sys.equations.push_back({std::move(lhs), std::move(rhs)});
    }
    if (end == text.size()) break;
    begin = end + 1;
  }
  if (sys.equations.empty()) throw ParseError("empty system: no equations found", line_no, 1);
  return sys;
}

/// Reference evaluator: walks the AST and checks every precondition.
inline Element eval_term(const FiniteAlgebra& alg, const Term& t, std::span<const Element> a) {
  switch (t.kind) {
    case Term::Kind::variable:
      if (t.index == 0 || t.index > a.size()) {
        throw EvalError("variable x" + std::to_string(t.index) + " is not covered by an assignment of length " +
                        std::to_string(a.size()));
      }
      if (a[t.index - 1] >= alg.size()) {
        throw EvalError("assignment value " + std::to_string(a[t.index - 1]) + " out of range");
      }
      return a[t.index - 1];
    case Term::Kind::constant:
      if (t.index >= alg.size()) {
        throw EvalError("constant #" + std::to_string(t.index) + " out of range for size " +
                        std::to_string(alg.size()));
      }
      return static_cast<Element>(t.index);
    case Term::Kind::apply: {
      std::vector<Element> args;
      args.reserve(t.children.size());
      for (const auto& c : t.children) args.push_back(eval_term(alg, c, a));
      return alg.apply(t.op, args);
    }
  }
  return 0;
}

/// A term flattened into postfix form with operation names resolved.
///
/// Validation happens once at construction; evaluation is then a tight loop
/// over table lookups. Instances are immutable; the scratch stack is owned by
/// the caller so one compiled term can serve several threads.
class CompiledTerm {
 public:
  CompiledTerm(const FiniteAlgebra& alg, const Term& t) : alg_(&alg) {
    compile(t);
    std::size_t depth = 0;
    for (const auto& ins : code_) {
      depth = ins.kind == Op::apply ? depth - arity(ins) + 1 : depth + 1;
      max_stack_ = std::max(max_stack_, depth);
    }
  }

  std::size_t length() const noexcept { return code_.size(); }
  std::size_t max_variable() const noexcept { return max_var_; }
  std::size_t stack_size() const noexcept { return max_stack_; }

  /// `a` must cover max_variable() and hold in-range values; `stack` must
  /// have at least stack_size() slots.
  Element eval(std::span<const Element> a, std::span<Element> stack) const noexcept {
    std::size_t top = 0;
    for (const auto& ins : code_) {
      switch (ins.kind) {
        case Op::variable:
          stack[top++] = a[ins.value];
          break;
        case Op::constant:
          stack[top++] = static_cast<Element>(ins.value);
          break;
        case Op::apply: {
          const std::size_t r = arity(ins);
          top -= r;
          stack[top] = alg_->apply_unchecked(ins.value, stack.subspan(top, r));
          ++top;
          break;
        }
      }
    }
    return stack[0];
  }

  Element eval(std::span<const Element> a) const {
    std::vector<Element> stack(std::max<std::size_t>(max_stack_, 1));
    return eval(a, stack);
  }

 private:
  enum class Op : std::uint8_t { variable, constant, apply };
  struct Instruction {
    Op kind;
    std::size_t value;
  };

  std::size_t arity(const Instruction& ins) const noexcept {
    return alg_->operations()[ins.value].arity;
  }

  void compile(const Term& t) {
    switch (t.kind) {
      case Term::Kind::variable:
        if (t.index == 0) throw EvalError("variable indices start at x1");
        max_var_ = std::max(max_var_, t.index);
        code_.push_back({Op::variable, t.index - 1});
        return;
      case Term::Kind::constant:
        if (t.index >= alg_->size()) {
          throw EvalError("constant #" + std::to_string(t.index) + " out of range for size " +
                          std::to_string(alg_->size()));
        }
        code_.push_back({Op::constant, t.index});
        return;
      case Term::Kind::apply: {
        auto op = alg_->find(t.op);
        if (!op) throw EvalError("unknown operation '" + t.op + "'");
        const auto& table = alg_->operations()[*op];
        if (table.arity != t.children.size()) {
          throw EvalError("operation '" + t.op + "' expects " + std::to_string(table.arity) +
                          " arguments, got " + std::to_string(t.children.size()));
        }
        for (const auto& c : t.children) compile(c);
        code_.push_back({Op::apply, *op});
        return;
      }
    }
  }

  const FiniteAlgebra* alg_;
  std::vector<Instruction> code_;
  std::size_t max_var_ = 0;
  std::size_t max_stack_ = 0;
};

}  // namespace supersolve
