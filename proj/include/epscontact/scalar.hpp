#pragma once

// Canonical exact scalars.
//
// A Scalar is a finite sum of terms  c * m  where c is a nonzero rational and
// m is a Laurent monomial over "atoms" times an optional exponential factor.
// Atoms are parameters, coordinate variables, derivatives of abstract
// univariate functions applied to an affine argument, and opaque reciprocals
// of multi-term sums.  Terms are stored in a sorted map, so two Scalars built
// from the same polynomial content compare equal structurally.

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace epc {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Affine combination  sum_v c_v * v + c_0  of coordinate variables.
struct Affine {
  std::map<std::string, Rational> coeffs;
  Rational constant = 0;

  bool is_zero() const { return coeffs.empty() && constant == 0; }
  bool is_constant() const { return coeffs.empty(); }
  Rational coeff(const std::string& var) const;

  Affine operator+(const Affine& o) const;
  Affine operator-() const;
  Affine scaled(const Rational& k) const;
  std::string to_string() const;

  friend bool operator==(const Affine& a, const Affine& b) {
    return a.constant == b.constant && a.coeffs == b.coeffs;
  }
  friend std::strong_ordering operator<=>(const Affine& a, const Affine& b);
};

enum class AtomKind { Param, Var, Func, Recip };

class Scalar;
struct AtomData;
using Atom = std::shared_ptr<const AtomData>;

Atom make_param_atom(const std::string& name);
Atom make_var_atom(const std::string& name);
Atom make_func_atom(const std::string& name, int order, const Affine& arg);

/// Ordering of atoms: by kind, then by canonical key text.
bool atom_less(const Atom& a, const Atom& b);
bool atom_equal(const Atom& a, const Atom& b);

struct Monomial {
  std::vector<std::pair<Atom, int>> factors;  // sorted by atom_less, exponents != 0
  Affine exp_arg;                             // exp(exp_arg); zero means absent

  bool is_one() const { return factors.empty() && exp_arg.is_zero(); }
  Monomial operator*(const Monomial& o) const;
  std::string to_string() const;
};

bool operator<(const Monomial& a, const Monomial& b);
bool operator==(const Monomial& a, const Monomial& b);

/// Instantiation data for evaluating a Scalar at an exact rational point.
///
/// Exponentials are rational only at argument zero.  When `exp_model` is set,
/// exp(u) is treated as an opaque positive symbol: each coordinate variable v
/// gets a positive base b_v and exp(sum c_v v + c_0) evaluates to
/// prod b_v^(c_v * denom) * b_1^(c_0 * denom); every c * denom must be an
/// integer.
struct Binding {
  std::map<std::string, Rational> values;                  // params and vars
  std::map<std::string, std::vector<Rational>> functions;  // polynomial coefficients, low degree first
  struct ExpModel {
    std::map<std::string, Rational> base;  // per variable, key "1" for the constant
    long denom = 1;
  };
  std::optional<ExpModel> exp_model;
};

/// Evaluates an abstract function instance (polynomial) derivative at a point.
Rational eval_poly_derivative(const std::vector<Rational>& coeffs, int order, const Rational& at);

class Scalar {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Scalar() = default;
  Scalar(long v);  // NOLINT: implicit from integers is convenient in tables
  Scalar(const Rational& q);  // NOLINT

  static Scalar param(const std::string& name);
  static Scalar var(const std::string& name);
  static Scalar func(const std::string& name, int order, const Affine& arg);
  static Scalar exp(const Affine& arg);
  static Scalar from_terms(TermMap terms);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<Rational> as_rational() const;
  bool is_single_term() const { return terms_.size() == 1; }
  /// Affine form in coordinate variables, if this Scalar is one.
  std::optional<Affine> as_affine() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }

  /// Multiplicative inverse.  Single terms invert exactly as Laurent
  /// monomials; sums become an opaque reciprocal atom.
  Scalar inverse() const;
  Scalar pow(int k) const;

  Scalar diff(const std::string& var) const;
  /// Replaces a parameter or variable by a Scalar.  Variables occurring in
  /// function or exp arguments may only be replaced by affine expressions.
  Scalar substitute(const std::string& name, const Scalar& value) const;
  /// Rewrites sym^e as value^(e div 2) * sym^(e mod 2), i.e. reduces modulo
  /// the relation sym^2 = value.
  Scalar reduce_square(const std::string& sym, const Scalar& value) const;
  /// Replaces every atom for which `f` returns a value (recursing into
  /// reciprocal atoms).  Exponential factors are kept.
  Scalar replace_atoms(const std::function<std::optional<Scalar>(const AtomData&)>& f) const;

  /// Parameter, variable, function and exp-variable names appearing anywhere.
  std::set<std::string> params() const;
  std::set<std::string> vars() const;
  std::set<std::string> funcs() const;
  bool depends_on_coordinates() const;
  /// Highest exponent of a parameter (after expansion), 0 if absent.
  int degree_in(const std::string& param) const;
  /// Coefficient of param^k, treating every other atom as a coefficient.
  Scalar coefficient(const std::string& param, int k) const;

  Rational eval(const Binding& b) const;
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  static Scalar raw_product(const Scalar& a, const Scalar& b);
  static std::tuple<Rational, Monomial, Scalar> split_content(const Scalar& s);
  void cancel_reciprocals();
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

struct AtomData {
  AtomKind kind;
  std::string name;   // Param, Var, Func
  int order = 0;      // Func derivative order
  Affine arg;         // Func argument
  std::shared_ptr<const Scalar> inner;  // Recip: the (normalized) sum
  std::string key;    // canonical text, used for ordering
};

}  // namespace epc
