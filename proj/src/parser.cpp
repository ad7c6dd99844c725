#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <string_view>

#include "microasp/syntax.hpp"

namespace microasp {
namespace {

enum class Tok {
  Ident,     // lowercase-initial identifier
  Variable,  // uppercase- or underscore-initial identifier
  Integer,
  Not,
  If,  // :-
  Dot,
  Comma,
  LParen,
  RParen,
  Plus,
  Cmp,
  Bar,  // | or ; in a head
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
  CmpOp op = CmpOp::Eq;
};

struct Annotation {
  bool deferred = false;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  /// Returns the next token; `%@` annotations seen on the way are reported
  /// through `pending`.
  Token next(Annotation& pending, std::map<std::string, std::string>& meta) {
    skip_space_and_comments(pending, meta);
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
      return t;
    };
    if (std::islower(static_cast<unsigned char>(c))) {
      t.text = identifier();
      t.kind = t.text == "not" ? Tok::Not : Tok::Ident;
      return t;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      t.text = identifier();
      t.kind = Tok::Variable;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      std::string digits(1, c);
      advance();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_];
        advance();
      }
      t.kind = Tok::Integer;
      t.text = digits;
      return t;
    }
    auto peek2 = [&](char second) {
      return pos_ + 1 < text_.size() && text_[pos_ + 1] == second;
    };
    auto cmp = [&](CmpOp op, std::size_t len) {
      t.kind = Tok::Cmp;
      t.op = op;
      t.text = std::string(text_.substr(pos_, len));
      for (std::size_t i = 0; i < len; ++i) advance();
      return t;
    };
    switch (c) {
      case ':':
        if (peek2('-')) {
          t.kind = Tok::If;
          t.text = ":-";
          advance();
          advance();
          return t;
        }
        break;
      case '.':
        return single(Tok::Dot);
      case ',':
        return single(Tok::Comma);
      case '(':
        return single(Tok::LParen);
      case ')':
        return single(Tok::RParen);
      case '+':
        return single(Tok::Plus);
      case '|':
      case ';':
        return single(Tok::Bar);
      case '=':
        return cmp(CmpOp::Eq, peek2('=') ? 2 : 1);
      case '!':
        if (peek2('=')) return cmp(CmpOp::Ne, 2);
        break;
      case '<':
        if (peek2('=')) return cmp(CmpOp::Le, 2);
        if (peek2('>')) return cmp(CmpOp::Ne, 2);
        return cmp(CmpOp::Lt, 1);
      case '>':
        if (peek2('=')) return cmp(CmpOp::Ge, 2);
        return cmp(CmpOp::Gt, 1);
      default:
        break;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'",
                     line_, column_);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string identifier() {
    std::string out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') break;
      out += c;
      advance();
    }
    return out;
  }

  void skip_space_and_comments(Annotation& pending,
                               std::map<std::string, std::string>& meta) {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c != '%') return;
      int comment_line = line_;
      std::string comment;
      while (pos_ < text_.size() && text_[pos_] != '\n') {
        comment += text_[pos_];
        advance();
      }
      while (!comment.empty() &&
             std::isspace(static_cast<unsigned char>(comment.back()))) {
        comment.pop_back();
      }
      if (comment == "%@deferred") {
        pending.deferred = true;
        pending.line = comment_line;
      } else if (comment.rfind("%@meta ", 0) == 0) {
        std::string_view rest(comment);
        rest.remove_prefix(7);
        std::size_t start = 0;
        while (start < rest.size()) {
          std::size_t end = rest.find(' ', start);
          if (end == std::string_view::npos) end = rest.size();
          std::string_view kv = rest.substr(start, end - start);
          std::size_t eq = kv.find('=');
          if (eq != std::string_view::npos) {
            meta[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
          }
          start = end + 1;
        }
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  Program parse() {
    Program program;
    while (cur_.kind != Tok::End) {
      Annotation annotation = pending_;
      pending_ = {};
      Rule rule = parse_rule();
      if (annotation.deferred) {
        if (!rule.is_constraint()) {
          throw ParseError("%@deferred must precede a constraint",
                           annotation.line, 1);
        }
        program.deferred.insert(program.rules.size());
      }
      check_arities(rule);
      auto unsafe = unsafe_variables(rule);
      if (!unsafe.empty()) {
        throw SafetyError("unsafe variable '" + unsafe.front() +
                              "' in rule at line " + std::to_string(rule.line) +
                              ": " + to_string(rule),
                          rule.line, unsafe.front());
      }
      program.rules.push_back(std::move(rule));
    }
    if (pending_.deferred) {
      throw ParseError("%@deferred at end of input", pending_.line, 1);
    }
    program.meta = std::move(meta_);
    return program;
  }

 private:
  void shift() { cur_ = lexer_.next(pending_, meta_); }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
    throw ParseError(what + ", got " + got, cur_.line, cur_.column);
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what);
    shift();
  }

  Rule parse_rule() {
    Rule rule;
    rule.line = cur_.line;
    if (cur_.kind != Tok::If) {
      if (cur_.kind != Tok::Ident) fail("expected head atom or ':-'");
      rule.head = parse_atom();
      if (cur_.kind == Tok::Bar) {
        throw ParseError("disjunctive heads are not supported", cur_.line,
                         cur_.column);
      }
      if (cur_.kind == Tok::Dot) {
        shift();
        return rule;
      }
    }
    expect(Tok::If, "':-' or '.'");
    if (cur_.kind == Tok::Dot) {
      shift();
      return rule;
    }
    for (;;) {
      rule.body.push_back(parse_body_element());
      if (cur_.kind == Tok::Comma) {
        shift();
        continue;
      }
      expect(Tok::Dot, "',' or '.'");
      return rule;
    }
  }

  Atom parse_atom() {
    Atom atom;
    atom.predicate = cur_.text;
    shift();
    if (cur_.kind == Tok::LParen) {
      shift();
      for (;;) {
        atom.args.push_back(parse_term());
        if (cur_.kind == Tok::Comma) {
          shift();
          continue;
        }
        expect(Tok::RParen, "',' or ')'");
        break;
      }
    }
    return atom;
  }

  Term parse_term() {
    Term t;
    switch (cur_.kind) {
      case Tok::Ident:
        t = Term::symbol(cur_.text);
        break;
      case Tok::Variable:
        t = Term::variable(cur_.text);
        break;
      case Tok::Integer: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(cur_.text.data(),
                                         cur_.text.data() + cur_.text.size(), v);
        if (ec != std::errc{}) fail("integer out of range");
        t = Term::integer(v);
        break;
      }
      default:
        fail("expected term");
    }
    shift();
    return t;
  }

  Expr parse_expr_tail(Term first) {
    Expr e;
    e.terms.push_back(std::move(first));
    while (cur_.kind == Tok::Plus) {
      shift();
      e.terms.push_back(parse_term());
    }
    return e;
  }

  BodyElement parse_body_element() {
    if (cur_.kind == Tok::Not) {
      shift();
      if (cur_.kind != Tok::Ident) fail("expected atom after 'not'");
      return Literal{parse_atom(), true};
    }
    if (cur_.kind == Tok::Ident) {
      Token start = cur_;
      Atom atom = parse_atom();
      if (atom.args.empty() && (cur_.kind == Tok::Cmp || cur_.kind == Tok::Plus)) {
        return parse_comparison(parse_expr_tail(Term::symbol(start.text)));
      }
      return Literal{std::move(atom), false};
    }
    if (cur_.kind == Tok::Variable || cur_.kind == Tok::Integer) {
      Term first = parse_term();
      return parse_comparison(parse_expr_tail(std::move(first)));
    }
    fail("expected body literal or comparison");
  }

  Comparison parse_comparison(Expr lhs) {
    if (cur_.kind != Tok::Cmp) fail("expected comparison operator");
    Comparison c;
    c.op = cur_.op;
    c.lhs = std::move(lhs);
    shift();
    c.rhs = parse_expr_tail(parse_term());
    return c;
  }

  void check_arity(const Atom& a, int line) {
    auto [it, inserted] = arities_.emplace(a.predicate, a.arity());
    if (!inserted && it->second != a.arity()) {
      throw ParseError("predicate '" + a.predicate + "' used with arity " +
                           std::to_string(a.arity()) + " and " +
                           std::to_string(it->second),
                       line, 0);
    }
  }

  void check_arities(const Rule& rule) {
    if (rule.head) check_arity(*rule.head, rule.line);
    for (const auto& el : rule.body) {
      if (auto* lit = std::get_if<Literal>(&el)) check_arity(lit->atom, rule.line);
    }
  }

  Lexer lexer_;
  Token cur_;
  Annotation pending_;
  std::map<std::string, std::string> meta_;
  std::map<std::string, std::size_t> arities_;
};

}  // namespace

Program parse_program(const std::string& text) { return Parser(text).parse(); }

std::vector<std::string> unsafe_variables(const Rule& rule) {
  std::set<std::string> bound;
  std::vector<std::string> seen;  // first-occurrence order for stable messages
  auto note = [&](const Term& t) {
    if (t.is_variable() &&
        std::find(seen.begin(), seen.end(), t.name) == seen.end()) {
      seen.push_back(t.name);
    }
  };
  if (rule.head) {
    for (const auto& t : rule.head->args) note(t);
  }
  for (const auto& el : rule.body) {
    if (auto* lit = std::get_if<Literal>(&el)) {
      for (const auto& t : lit->atom.args) {
        note(t);
        if (!lit->negated && t.is_variable()) bound.insert(t.name);
      }
    } else {
      const auto& cmp = std::get<Comparison>(el);
      for (const auto& t : cmp.lhs.terms) note(t);
      for (const auto& t : cmp.rhs.terms) note(t);
    }
  }
  auto all_bound = [&](const Expr& e) {
    for (const auto& t : e.terms) {
      if (t.is_variable() && !bound.count(t.name)) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& el : rule.body) {
      const auto* cmp = std::get_if<Comparison>(&el);
      if (!cmp || cmp->op != CmpOp::Eq) continue;
      auto bind = [&](const Expr& target, const Expr& source) {
        if (target.terms.size() == 1 && target.terms[0].is_variable() &&
            !bound.count(target.terms[0].name) && all_bound(source)) {
          bound.insert(target.terms[0].name);
          changed = true;
        }
      };
      bind(cmp->lhs, cmp->rhs);
      bind(cmp->rhs, cmp->lhs);
    }
  }
  std::vector<std::string> unsafe;
  for (const auto& v : seen) {
    if (!bound.count(v)) unsafe.push_back(v);
  }
  return unsafe;
}

}  // namespace microasp
