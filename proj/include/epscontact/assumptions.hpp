#pragma once

// Parameter assumptions and the tri-state zero test.
//
// Verdicts:
//   Zero     the canonical form is the zero polynomial.
//   NonZero  not identically zero: some admissible binding evaluates to a
//            nonzero value, and no probed specialization of the structure
//            data (parameter boundary values, degenerate function choices)
//            makes it vanish.
//   Unknown  neither could be established; in particular, expressions that
//            vanish for some admissible parameter value or admissible
//            function choice land here, since their status depends on which
//            member of the family is meant.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "epscontact/scalar.hpp"

namespace epc {

enum class ZeroVerdict { Zero, NonZero, Unknown };

const char* to_string(ZeroVerdict v);

class InconsistentAssumptions : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bound {
  Rational value;
  bool strict = false;
};

/// Constraints on one real parameter.  `square_*` bound the square of the
/// parameter (e.g. 1 >= lam^2 > 0).
struct ParamConstraint {
  bool nonzero = false;
  std::optional<Bound> lower, upper;
  std::optional<Bound> square_lower, square_upper;

  bool admits(const Rational& v) const;
};

class Assumptions {
 public:
  void declare(const std::string& param) { params_[param]; }
  void declare_function(const std::string& f, bool nonzero = false);

  /// Adds one constraint written as e.g. "a != 0", "lam^2 <= 1",
  /// "1 >= lam^2 > 0", "x > 0", or "q nonzero" for a declared function.
  void add(const std::string& text);
  void add_param_constraint(const std::string& param, const ParamConstraint& c);
  /// Drops a parameter and its constraints (after substituting it away).
  void erase(const std::string& param);

  const std::map<std::string, ParamConstraint>& params() const { return params_; }
  const std::map<std::string, bool>& functions() const { return funcs_; }
  bool function_nonzero(const std::string& f) const;
  const ParamConstraint& constraint(const std::string& param) const;

  /// Intersection of both constraint sets.
  Assumptions merged(const Assumptions& other) const;
  /// Throws InconsistentAssumptions if some parameter admits no rational value.
  void check_consistent() const;
  bool admits(const std::string& param, const Rational& value) const;
  /// The original constraint strings, for serialization.
  const std::vector<std::string>& texts() const { return texts_; }

 private:
  std::map<std::string, ParamConstraint> params_;
  std::map<std::string, bool> funcs_;
  std::vector<std::string> texts_;
};

/// Draws admissible bindings for the symbols of an expression.
class BindingSampler {
 public:
  BindingSampler(const Assumptions& a, std::uint64_t seed);

  /// A random admissible binding covering the given symbols.  Abstract
  /// functions are instantiated as random polynomials of degree <= 4
  /// (sign-definite ones when assumed nonzero); exponentials use the opaque
  /// exp model.
  Binding random(const std::set<std::string>& params, const std::set<std::string>& vars,
                 const std::set<std::string>& funcs, long exp_denom = 1);
  /// Boundary values to probe for a parameter: 0, +-1, and rational bound
  /// values (and their square roots when rational), filtered by admissibility.
  std::vector<Rational> special_values(const std::string& param) const;
  Rational random_value(const std::string& param);

 private:
  Rational random_rational(const Rational& radius);
  const Assumptions& assumptions_;
  std::mt19937_64 rng_;
};

struct ZeroTest {
  ZeroVerdict verdict = ZeroVerdict::Unknown;
  std::optional<Binding> witness;   // binding where the value is nonzero
  std::optional<Rational> witness_value;
  std::optional<Binding> vanishing;  // admissible specialization where it vanishes
  std::string note;
};

inline constexpr int kWitnessAttempts = 32;

ZeroTest is_zero(const Scalar& e, const Assumptions& a, std::uint64_t seed);

enum class SignVerdict { NonNegative, Negative, Unknown };

/// Whether e >= 0 on every probed admissible binding (e must not depend on
/// coordinates).
SignVerdict sign_check(const Scalar& e, const Assumptions& a, std::uint64_t seed, Binding* witness = nullptr);

/// Whether a single-term expression is certified nowhere zero from its atoms
/// alone: nonzero constant times exponentials, nonzero-assumed parameters and
/// nonzero-assumed functions.
bool certified_nowhere_zero(const Scalar& e, const Assumptions& a);

/// Smallest integer D such that every exp-argument coefficient times D is an
/// integer.
long exp_denominator(const Scalar& e);

std::string describe(const Binding& b);

}  // namespace epc
