#pragma once

// Expression trees, the literal grammar used in manifests, and the
// tree-level operations (simplify, differentiate, eval_rational).
//
// Grammar (whitespace insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | symbol | call | '(' expr ')'
//   call    := 'exp' '(' expr ')' | func '\''* '(' expr ')'
//   number  := digits ['.' digits]
//
// Symbols must be declared in a SymbolTable as parameters, coordinate
// variables or abstract functions.  Function and exp arguments must reduce to
// affine combinations of coordinate variables.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "epscontact/scalar.hpp"

namespace epc {

enum class NodeKind { Const, Param, Var, Add, Mul, Pow, Exp, Func };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  Rational value;            // Const
  std::string name;          // Param, Var, Func
  int order = 0;             // Func derivative order
  int exponent = 0;          // Pow
  std::vector<Expr> children;  // Add, Mul operands; Pow base; Exp/Func argument
};

Expr make_const(const Rational& q);
Expr make_param(const std::string& name);
Expr make_var(const std::string& name);
Expr make_add(std::vector<Expr> terms);
Expr make_mul(std::vector<Expr> factors);
Expr make_pow(Expr base, int exponent);
Expr make_exp(Expr arg);
Expr make_func(const std::string& name, int order, Expr arg);

bool structurally_equal(const Expr& a, const Expr& b);
std::string to_string(const Expr& e);

struct SymbolTable {
  std::set<std::string> params;
  std::set<std::string> vars;
  std::set<std::string> funcs;

  bool declared(const std::string& name) const {
    return params.count(name) || vars.count(name) || funcs.count(name);
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Expr parse_expr(const std::string& text, const SymbolTable& symbols);
/// Parses straight to canonical form.
Scalar parse_scalar(const std::string& text, const SymbolTable& symbols);

Scalar to_scalar(const Expr& e);
Expr to_expr(const Scalar& s);

/// Canonical form as a tree; idempotent node-for-node.
Expr simplify(const Expr& e);
Expr differentiate(const Expr& e, const std::string& var);
/// Evaluates the tree directly, without canonicalizing it first.
Rational eval_rational(const Expr& e, const Binding& bindings);

}  // namespace epc
