#include "epscontact/expr.hpp"

#include <cctype>
#include <sstream>

namespace epc {

namespace {

Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

}  // namespace

Expr make_const(const Rational& q) { return node({NodeKind::Const, q, {}, 0, 0, {}}); }
Expr make_param(const std::string& name) { return node({NodeKind::Param, 0, name, 0, 0, {}}); }
Expr make_var(const std::string& name) { return node({NodeKind::Var, 0, name, 0, 0, {}}); }
Expr make_add(std::vector<Expr> terms) { return node({NodeKind::Add, 0, {}, 0, 0, std::move(terms)}); }
Expr make_mul(std::vector<Expr> factors) { return node({NodeKind::Mul, 0, {}, 0, 0, std::move(factors)}); }
Expr make_pow(Expr base, int exponent) { return node({NodeKind::Pow, 0, {}, 0, exponent, {std::move(base)}}); }
Expr make_exp(Expr arg) { return node({NodeKind::Exp, 0, {}, 0, 0, {std::move(arg)}}); }
Expr make_func(const std::string& name, int order, Expr arg) {
  return node({NodeKind::Func, 0, name, order, 0, {std::move(arg)}});
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a->kind != b->kind || a->name != b->name || a->order != b->order || a->exponent != b->exponent)
    return false;
  if (a->kind == NodeKind::Const && a->value != b->value) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  return true;
}

std::string to_string(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Const:
      return e->value < 0 || e->value.get_den() != 1 ? "(" + e->value.get_str() + ")" : e->value.get_str();
    case NodeKind::Param:
    case NodeKind::Var:
      return e->name;
    case NodeKind::Add:
    case NodeKind::Mul: {
      std::string sep = e->kind == NodeKind::Add ? " + " : "*";
      std::string out = "(";
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) out += sep;
        out += to_string(e->children[i]);
      }
      return out + ")";
    }
    case NodeKind::Pow:
      return to_string(e->children[0]) + "^" + std::to_string(e->exponent);
    case NodeKind::Exp:
      return "exp(" + to_string(e->children[0]) + ")";
    case NodeKind::Func:
      return e->name + std::string(static_cast<std::size_t>(e->order), '\'') + "(" + to_string(e->children[0]) + ")";
  }
  return {};
}

// ---------------------------------------------------------------- parser

ParseError::ParseError(const std::string& msg, std::size_t line, std::size_t column)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(make_mul({make_const(-1), term()}));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : make_add(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        factors.push_back(make_pow(unary(), -1));
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors[0] : make_mul(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return make_mul({make_const(-1), unary()});
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      bool negative = accept('-');
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int k = std::stoi(text_.substr(start, pos_ - start));
      return make_pow(std::move(base), negative ? -k : k);
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      return make_const(parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      int order = 0;
      while (pos_ < text_.size() && text_[pos_] == '\'') {
        ++pos_;
        ++order;
      }
      if (name == "exp" && !symbols_.declared("exp")) {
        if (order) fail("exp cannot carry derivative marks");
        expect('(');
        Expr arg = expr();
        expect(')');
        return make_exp(std::move(arg));
      }
      if (symbols_.funcs.count(name)) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return make_func(name, order, std::move(arg));
      }
      if (order) {
        pos_ = start;
        fail("derivative marks on non-function '" + name + "'");
      }
      if (symbols_.params.count(name)) return make_param(name);
      if (symbols_.vars.count(name)) return make_var(name);
      pos_ = start;
      fail("undeclared symbol '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const SymbolTable& symbols) { return Parser(text, symbols).parse(); }

Scalar parse_scalar(const std::string& text, const SymbolTable& symbols) {
  return to_scalar(parse_expr(text, symbols));
}

// ---------------------------------------------------------------- conversion

namespace {

Affine require_affine(const Expr& arg, const char* what) {
  auto a = to_scalar(arg).as_affine();
  if (!a) throw ExprError(std::string(what) + " argument must be affine in coordinate variables: " + to_string(arg));
  return *a;
}

}  // namespace

Scalar to_scalar(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Const:
      return Scalar(e->value);
    case NodeKind::Param:
      return Scalar::param(e->name);
    case NodeKind::Var:
      return Scalar::var(e->name);
    case NodeKind::Add: {
      Scalar s;
      for (const auto& c : e->children) s += to_scalar(c);
      return s;
    }
    case NodeKind::Mul: {
      Scalar s = 1;
      for (const auto& c : e->children) s *= to_scalar(c);
      return s;
    }
    case NodeKind::Pow:
      return to_scalar(e->children[0]).pow(e->exponent);
    case NodeKind::Exp:
      return Scalar::exp(require_affine(e->children[0], "exp"));
    case NodeKind::Func:
      return Scalar::func(e->name, e->order, require_affine(e->children[0], "function"));
  }
  return {};
}

namespace {

Expr affine_expr(const Affine& a) {
  std::vector<Expr> terms;
  for (const auto& [v, c] : a.coeffs) {
    if (c == 1)
      terms.push_back(make_var(v));
    else
      terms.push_back(make_mul({make_const(c), make_var(v)}));
  }
  if (a.constant != 0 || terms.empty()) terms.push_back(make_const(a.constant));
  return terms.size() == 1 ? terms[0] : make_add(std::move(terms));
}

Expr atom_expr(const Atom& atom) {
  switch (atom->kind) {
    case AtomKind::Param:
      return make_param(atom->name);
    case AtomKind::Var:
      return make_var(atom->name);
    case AtomKind::Func:
      return make_func(atom->name, atom->order, affine_expr(atom->arg));
    case AtomKind::Recip:
      return to_expr(*atom->inner);
  }
  return {};
}

}  // namespace

Expr to_expr(const Scalar& s) {
  if (s.is_zero()) return make_const(0);
  std::vector<Expr> terms;
  for (const auto& [m, c] : s.terms()) {
    std::vector<Expr> factors;
    if (c != 1 || m.is_one()) factors.push_back(make_const(c));
    for (const auto& [atom, e] : m.factors) {
      const int k = atom->kind == AtomKind::Recip ? -e : e;
      Expr base = atom_expr(atom);
      factors.push_back(k == 1 ? base : make_pow(base, k));
    }
    if (!m.exp_arg.is_zero()) factors.push_back(make_exp(affine_expr(m.exp_arg)));
    terms.push_back(factors.size() == 1 ? factors[0] : make_mul(std::move(factors)));
  }
  return terms.size() == 1 ? terms[0] : make_add(std::move(terms));
}

Expr simplify(const Expr& e) { return to_expr(to_scalar(e)); }

Expr differentiate(const Expr& e, const std::string& var) { return to_expr(to_scalar(e).diff(var)); }

Rational eval_rational(const Expr& e, const Binding& b) {
  switch (e->kind) {
    case NodeKind::Const:
      return e->value;
    case NodeKind::Param:
    case NodeKind::Var: {
      auto it = b.values.find(e->name);
      if (it == b.values.end()) throw EvalError("unbound symbol '" + e->name + "'");
      return it->second;
    }
    case NodeKind::Add: {
      Rational r = 0;
      for (const auto& c : e->children) r += eval_rational(c, b);
      return r;
    }
    case NodeKind::Mul: {
      Rational r = 1;
      for (const auto& c : e->children) r *= eval_rational(c, b);
      return r;
    }
    case NodeKind::Pow: {
      Rational base = eval_rational(e->children[0], b);
      int k = e->exponent;
      if (k < 0) {
        if (base == 0) throw EvalError("division by zero in negative power");
        base = 1 / base;
        k = -k;
      }
      Rational r = 1;
      for (int i = 0; i < k; ++i) r *= base;
      return r;
    }
    case NodeKind::Exp:
      // The opaque exp model is defined on the affine form of the argument.
      return Scalar::exp(require_affine(e->children[0], "exp")).eval(b);
    case NodeKind::Func: {
      auto it = b.functions.find(e->name);
      if (it == b.functions.end()) throw EvalError("unbound function '" + e->name + "'");
      return eval_poly_derivative(it->second, e->order, eval_rational(e->children[0], b));
    }
  }
  return 0;
}

}  // namespace epc
