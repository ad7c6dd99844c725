#include "microasp/syntax.hpp"

#include <sstream>

namespace microasp {

Term Term::variable(std::string name) {
  return Term{Kind::Variable, std::move(name), 0};
}

Term Term::symbol(std::string name) {
  return Term{Kind::Symbol, std::move(name), 0};
}

Term Term::integer(std::int64_t v) {
  return Term{Kind::Integer, std::to_string(v), v};
}

std::string predicate_key(const std::string& name, std::size_t arity) {
  return name + "/" + std::to_string(arity);
}

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      out += to_string(a.args[i]);
    }
    out += ')';
  }
  return out;
}

std::string to_string(const Literal& l) {
  return (l.negated ? "not " : "") + to_string(l.atom);
}

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string to_string(const Expr& e) {
  std::string out;
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    if (i) out += '+';
    out += to_string(e.terms[i]);
  }
  return out;
}

std::string to_string(const Comparison& c) {
  return to_string(c.lhs) + " " + to_string(c.op) + " " + to_string(c.rhs);
}

std::string to_string(const Rule& r) {
  std::string out;
  if (r.head) out = to_string(*r.head);
  if (!r.body.empty() || !r.head) {
    out += r.head ? " :- " : ":- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      std::visit([&](const auto& el) { out += to_string(el); }, r.body[i]);
    }
  }
  out += '.';
  return out;
}

std::string to_string(const Program& p) {
  std::ostringstream out;
  if (!p.meta.empty()) {
    out << "%@meta";
    for (const auto& [k, v] : p.meta) out << ' ' << k << '=' << v;
    out << '\n';
  }
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    if (p.deferred.count(i)) out << "%@deferred\n";
    out << to_string(p.rules[i]) << '\n';
  }
  return out.str();
}

}  // namespace microasp
