#pragma once

// Non-ground abstract syntax: terms, atoms, literals, built-in comparisons,
// rules and programs. Values of these types are immutable once built by the
// parser and can be shared freely.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace microasp {

struct Term {
  enum class Kind : std::uint8_t { Variable, Symbol, Integer };

  Kind kind = Kind::Symbol;
  std::string name;          // variable or symbol name; decimal text for integers
  std::int64_t value = 0;    // meaningful for Kind::Integer only

  static Term variable(std::string name);
  static Term symbol(std::string name);
  static Term integer(std::int64_t v);

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind != Kind::Variable; }
  bool is_integer() const { return kind == Kind::Integer; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Sum of terms; a single term is the common case.
struct Expr {
  std::vector<Term> terms;

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

struct Comparison {
  CmpOp op = CmpOp::Eq;
  Expr lhs;
  Expr rhs;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

using BodyElement = std::variant<Literal, Comparison>;

struct Rule {
  std::optional<Atom> head;
  std::vector<BodyElement> body;
  int line = 0;  // source line, 0 when built programmatically

  bool is_constraint() const { return !head.has_value(); }
  bool is_fact() const { return head.has_value() && body.empty(); }

  // Structural equality ignores the source line.
  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.body == b.body;
  }
};

struct Program {
  std::vector<Rule> rules;
  /// Indices into `rules` of constraints that are kept out of grounding.
  std::set<std::size_t> deferred;
  /// `%@meta key=value` annotations (generator metadata).
  std::map<std::string, std::string> meta;

  friend bool operator==(const Program& a, const Program& b) {
    return a.rules == b.rules && a.deferred == b.deferred && a.meta == b.meta;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Raised for unsafe variables; carries the offending rule text.
class SafetyError : public ParseError {
 public:
  SafetyError(const std::string& what, int line, std::string variable)
      : ParseError(what, line, 0), variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

Program parse_program(const std::string& text);

/// Variables that are not bound by a positive literal or by an `=` whose
/// other side is bound. Empty for safe rules.
std::vector<std::string> unsafe_variables(const Rule& rule);

std::string predicate_key(const std::string& name, std::size_t arity);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(CmpOp op);
std::string to_string(const Expr& e);
std::string to_string(const Comparison& c);
std::string to_string(const Rule& r);
/// Pretty-prints a program in the input syntax; deferred constraints get
/// their annotation line back, so the output reparses to an equal Program.
std::string to_string(const Program& p);

}  // namespace microasp
