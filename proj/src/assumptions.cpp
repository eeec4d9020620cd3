#include "epscontact/assumptions.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <sstream>

namespace epc {

const char* to_string(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::Zero:
      return "Zero";
    case ZeroVerdict::NonZero:
      return "NonZero";
    case ZeroVerdict::Unknown:
      return "Unknown";
  }
  return "?";
}

// ---------------------------------------------------------------- constraints

namespace {

bool above(const Rational& v, const std::optional<Bound>& lo) {
  if (!lo) return true;
  return lo->strict ? v > lo->value : v >= lo->value;
}

bool below(const Rational& v, const std::optional<Bound>& hi) {
  if (!hi) return true;
  return hi->strict ? v < hi->value : v <= hi->value;
}

void tighten_lower(std::optional<Bound>& slot, const Bound& b) {
  if (!slot || b.value > slot->value || (b.value == slot->value && b.strict)) slot = b;
}

void tighten_upper(std::optional<Bound>& slot, const Bound& b) {
  if (!slot || b.value < slot->value || (b.value == slot->value && b.strict)) slot = b;
}

void intersect(ParamConstraint& into, const ParamConstraint& c) {
  into.nonzero = into.nonzero || c.nonzero;
  if (c.lower) tighten_lower(into.lower, *c.lower);
  if (c.upper) tighten_upper(into.upper, *c.upper);
  if (c.square_lower) tighten_lower(into.square_lower, *c.square_lower);
  if (c.square_upper) tighten_upper(into.square_upper, *c.square_upper);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

struct Operand {
  bool is_symbol = false;
  std::string name;
  bool squared = false;
  Rational value;
};

Operand parse_operand(const std::string& raw, const std::string& whole) {
  const std::string s = trim(raw);
  Operand op;
  std::string base = s;
  if (s.size() > 2 && s.substr(s.size() - 2) == "^2") {
    base = trim(s.substr(0, s.size() - 2));
    op.squared = true;
  }
  if (is_identifier(base)) {
    op.is_symbol = true;
    op.name = base;
    return op;
  }
  if (op.squared) throw ExprError("cannot parse assumption '" + whole + "'");
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
      op.value = parse_rational(s);
    } else {
      op.value = parse_rational(trim(s.substr(0, slash))) / parse_rational(trim(s.substr(slash + 1)));
    }
  } catch (const std::exception&) {
    throw ExprError("cannot parse assumption '" + whole + "'");
  }
  return op;
}

}  // namespace

bool ParamConstraint::admits(const Rational& v) const {
  if (nonzero && v == 0) return false;
  if (!above(v, lower) || !below(v, upper)) return false;
  const Rational sq = v * v;
  return above(sq, square_lower) && below(sq, square_upper);
}

void Assumptions::declare_function(const std::string& f, bool nonzero) {
  bool& slot = funcs_[f];
  slot = slot || nonzero;
}

bool Assumptions::function_nonzero(const std::string& f) const {
  auto it = funcs_.find(f);
  return it != funcs_.end() && it->second;
}

const ParamConstraint& Assumptions::constraint(const std::string& param) const {
  static const ParamConstraint none;
  auto it = params_.find(param);
  return it == params_.end() ? none : it->second;
}

bool Assumptions::admits(const std::string& param, const Rational& value) const {
  return constraint(param).admits(value);
}

void Assumptions::add_param_constraint(const std::string& param, const ParamConstraint& c) {
  intersect(params_[param], c);
}

void Assumptions::add(const std::string& raw) {
  const std::string text = trim(raw);
  // Word forms: "<name> nonzero", "<name> positive".
  {
    std::istringstream is(text);
    std::string name, word, extra;
    is >> name >> word;
    if (!(is >> extra) && (word == "nonzero" || word == "positive") && is_identifier(name)) {
      if (funcs_.count(name)) {
        if (word != "nonzero") throw ExprError("only 'nonzero' applies to functions: '" + text + "'");
        funcs_[name] = true;
      } else {
        ParamConstraint c;
        c.nonzero = true;
        if (word == "positive") c.lower = Bound{0, true};
        add_param_constraint(name, c);
      }
      texts_.push_back(text);
      return;
    }
  }
  // Comparison chains.
  static const char* const kOps[] = {"!=", "<=", ">=", "==", "<", ">"};
  std::vector<std::string> operands;
  std::vector<std::string> ops;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size();) {
    bool matched = false;
    for (const char* op : kOps) {
      const std::string o(op);
      if (text.compare(i, o.size(), o) == 0) {
        operands.push_back(text.substr(start, i - start));
        ops.push_back(o);
        i += o.size();
        start = i;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  operands.push_back(text.substr(start));
  if (ops.empty()) throw ExprError("cannot parse assumption '" + text + "'");
  for (std::size_t k = 0; k < ops.size(); ++k) {
    Operand lhs = parse_operand(operands[k], text);
    Operand rhs = parse_operand(operands[k + 1], text);
    std::string op = ops[k];
    if (lhs.is_symbol == rhs.is_symbol) throw ExprError("assumption must compare a symbol with a number: '" + text + "'");
    if (!lhs.is_symbol) {
      std::swap(lhs, rhs);
      if (op == "<") op = ">";
      else if (op == ">") op = "<";
      else if (op == "<=") op = ">=";
      else if (op == ">=") op = "<=";
    }
    if (funcs_.count(lhs.name)) throw ExprError("functions only accept 'nonzero': '" + text + "'");
    ParamConstraint c;
    auto& lo = lhs.squared ? c.square_lower : c.lower;
    auto& hi = lhs.squared ? c.square_upper : c.upper;
    const Rational& v = rhs.value;
    if (op == "!=") {
      if (v != 0 || lhs.squared) throw ExprError("only '!= 0' is supported: '" + text + "'");
      c.nonzero = true;
    } else if (op == "==") {
      lo = Bound{v, false};
      hi = Bound{v, false};
    } else if (op == "<") {
      hi = Bound{v, true};
    } else if (op == "<=") {
      hi = Bound{v, false};
    } else if (op == ">") {
      lo = Bound{v, true};
    } else {
      lo = Bound{v, false};
    }
    add_param_constraint(lhs.name, c);
  }
  texts_.push_back(text);
}

void Assumptions::erase(const std::string& param) {
  params_.erase(param);
  const std::regex word("(^|[^A-Za-z0-9_])" + param + "([^A-Za-z0-9_]|$)");
  texts_.erase(std::remove_if(texts_.begin(), texts_.end(), [&](const std::string& t) { return std::regex_search(t, word); }),
               texts_.end());
}

Assumptions Assumptions::merged(const Assumptions& other) const {
  Assumptions r = *this;
  for (const auto& [p, c] : other.params_) intersect(r.params_[p], c);
  for (const auto& [f, nz] : other.funcs_) r.declare_function(f, nz);
  for (const auto& t : other.texts_)
    if (std::find(r.texts_.begin(), r.texts_.end(), t) == r.texts_.end()) r.texts_.push_back(t);
  return r;
}

void Assumptions::check_consistent() const {
  BindingSampler sampler(*this, 0x5eed);
  for (const auto& [p, c] : params_) {
    if (!sampler.special_values(p).empty()) continue;
    try {
      sampler.random_value(p);
    } catch (const InconsistentAssumptions&) {
      throw InconsistentAssumptions("assumptions on '" + p + "' admit no rational value");
    }
  }
}

// ---------------------------------------------------------------- sampling

BindingSampler::BindingSampler(const Assumptions& a, std::uint64_t seed) : assumptions_(a), rng_(seed) {}

Rational BindingSampler::random_rational(const Rational& radius) {
  std::uniform_int_distribution<long> den_dist(1, 8);
  const long den = den_dist(rng_);
  Rational span = radius * den;
  const long lim = std::max<long>(1, static_cast<long>(span.get_d()));
  std::uniform_int_distribution<long> num_dist(-lim, lim);
  Rational q(num_dist(rng_), den);
  q.canonicalize();
  return q;
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn = sqrt(n), rd = sqrt(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace

std::vector<Rational> BindingSampler::special_values(const std::string& param) const {
  const ParamConstraint& c = assumptions_.constraint(param);
  std::vector<Rational> cands{0, 1, -1};
  for (const auto* b : {&c.lower, &c.upper})
    if (*b) cands.push_back((*b)->value);
  for (const auto* b : {&c.square_lower, &c.square_upper})
    if (*b)
      if (auto r = rational_sqrt((*b)->value)) {
        cands.push_back(*r);
        cands.push_back(-*r);
      }
  std::vector<Rational> out;
  for (const auto& v : cands)
    if (c.admits(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

Rational BindingSampler::random_value(const std::string& param) {
  const ParamConstraint& c = assumptions_.constraint(param);
  Rational radius = 4;
  for (const auto* b : {&c.lower, &c.upper})
    if (*b) radius = std::max(radius, Rational(abs((*b)->value) + 2));
  for (const auto* b : {&c.square_lower, &c.square_upper})
    if (*b) radius = std::max(radius, Rational(abs((*b)->value) + 2));
  for (int attempt = 0; attempt < 4000; ++attempt) {
    Rational v = random_rational(radius);
    if (c.admits(v)) return v;
  }
  auto specials = special_values(param);
  if (!specials.empty()) return specials.front();
  throw InconsistentAssumptions("no admissible value found for '" + param + "'");
}

Binding BindingSampler::random(const std::set<std::string>& params, const std::set<std::string>& vars,
                               const std::set<std::string>& funcs, long exp_denom) {
  Binding b;
  for (const auto& p : params) b.values[p] = random_value(p);
  for (const auto& v : vars) b.values[v] = random_rational(5);
  std::uniform_int_distribution<int> deg_dist(0, 4);
  for (const auto& f : funcs) {
    std::vector<Rational> coeffs;
    if (assumptions_.function_nonzero(f)) {
      // c0 + c2 s^2 + c4 s^4 with positive c_i never vanishes.
      const int sign = std::uniform_int_distribution<int>(0, 1)(rng_) ? 1 : -1;
      coeffs.assign(5, 0);
      for (int k : {0, 2, 4}) {
        Rational c = abs(random_rational(3));
        if (c == 0) c = Rational(1, 3);
        coeffs[static_cast<std::size_t>(k)] = c * sign;
      }
    } else {
      const int deg = deg_dist(rng_);
      for (int k = 0; k <= deg; ++k) coeffs.push_back(random_rational(3));
    }
    b.functions[f] = std::move(coeffs);
  }
  Binding::ExpModel model;
  model.denom = exp_denom;
  auto positive = [&] {
    Rational r = abs(random_rational(4));
    return r == 0 ? Rational(3, 2) : r;
  };
  model.base["1"] = positive();
  for (const auto& v : vars) model.base[v] = positive();
  b.exp_model = model;
  return b;
}

long exp_denominator(const Scalar& e) {
  mpz_class lcm = 1;
  for (const auto& [m, c] : e.terms()) {
    for (const auto& [v, k] : m.exp_arg.coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), k.get_den().get_mpz_t());
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m.exp_arg.constant.get_den().get_mpz_t());
    for (const auto& [atom, k] : m.factors)
      if (atom->kind == AtomKind::Recip) {
        mpz_class inner = exp_denominator(*atom->inner);
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), inner.get_mpz_t());
      }
  }
  return lcm.get_si();
}

std::string describe(const Binding& b) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : b.values) {
    os << (first ? "" : ", ") << k << "=" << v.get_str();
    first = false;
  }
  for (const auto& [f, coeffs] : b.functions) {
    os << (first ? "" : ", ") << f << "(s)=";
    bool any = false;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0) continue;
      os << (any && coeffs[k] > 0 ? "+" : "") << coeffs[k].get_str();
      if (k) os << "*s^" << k;
      any = true;
    }
    if (!any) os << "0";
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- zero test

namespace {

std::vector<std::map<std::string, Rational>> special_combinations(const std::set<std::string>& params,
                                                                   const BindingSampler& sampler) {
  std::vector<std::map<std::string, Rational>> combos{{}};
  constexpr std::size_t kMaxCombos = 512;
  // Single-parameter specializations first, then the joint grid.
  std::vector<std::map<std::string, Rational>> singles;
  for (const auto& p : params)
    for (const auto& v : sampler.special_values(p)) singles.push_back({{p, v}});
  for (const auto& p : params) {
    auto values = sampler.special_values(p);
    if (values.empty()) continue;
    std::vector<std::map<std::string, Rational>> next;
    for (const auto& c : combos)
      for (const auto& v : values) {
        if (next.size() >= kMaxCombos) break;
        auto d = c;
        d[p] = v;
        next.push_back(std::move(d));
      }
    combos = std::move(next);
  }
  if (params.size() > 1) singles.insert(singles.end(), combos.begin(), combos.end());
  return singles;
}

Scalar degenerate_function(const Scalar& e, const std::string& f, bool nonzero) {
  const std::string constant_name = f + "#const";
  return e.replace_atoms([&](const AtomData& a) -> std::optional<Scalar> {
    if (a.kind != AtomKind::Func || a.name != f) return std::nullopt;
    if (a.order == 0 && nonzero) return Scalar::param(constant_name);
    return Scalar(0L);
  });
}

}  // namespace

ZeroTest is_zero(const Scalar& e, const Assumptions& a, std::uint64_t seed) {
  ZeroTest result;
  if (e.is_zero()) {
    result.verdict = ZeroVerdict::Zero;
    return result;
  }
  a.check_consistent();
  const auto params = e.params();
  const auto vars = e.vars();
  const auto funcs = e.funcs();
  BindingSampler sampler(a, seed);
  const long denom = exp_denominator(e);
  for (int attempt = 0; attempt < kWitnessAttempts && !result.witness; ++attempt) {
    Binding b = sampler.random(params, vars, funcs, denom);
    try {
      Rational v = e.eval(b);
      if (v != 0) {
        result.witness = std::move(b);
        result.witness_value = v;
      }
    } catch (const EvalError&) {
    }
  }
  if (!result.witness) {
    result.verdict = ZeroVerdict::Unknown;
    result.note = "not canonically zero but vanished at every sampled binding";
    return result;
  }
  for (const auto& combo : special_combinations(params, sampler)) {
    Scalar s = e;
    try {
      for (const auto& [p, v] : combo) s = s.substitute(p, Scalar(v));
    } catch (const EvalError&) {
      continue;
    }
    if (s.is_zero()) {
      Binding where;
      where.values = combo;
      result.vanishing = std::move(where);
      result.verdict = ZeroVerdict::Unknown;
      result.note = "vanishes identically at admissible parameter values " + describe(*result.vanishing);
      return result;
    }
  }
  for (const auto& f : funcs) {
    const bool nz = a.function_nonzero(f);
    Scalar s;
    try {
      s = degenerate_function(e, f, nz);
    } catch (const EvalError&) {
      continue;
    }
    if (s.is_zero()) {
      result.verdict = ZeroVerdict::Unknown;
      result.note = nz ? "vanishes when " + f + " is constant" : "vanishes when " + f + " is identically zero";
      return result;
    }
  }
  result.verdict = ZeroVerdict::NonZero;
  return result;
}

SignVerdict sign_check(const Scalar& e, const Assumptions& a, std::uint64_t seed, Binding* witness) {
  if (e.depends_on_coordinates()) return SignVerdict::Unknown;
  const auto params = e.params();
  BindingSampler sampler(a, seed);
  bool evaluated = false;
  auto probe = [&](const Binding& b) -> bool {
    try {
      Rational v = e.eval(b);
      evaluated = true;
      if (v < 0) {
        if (witness) *witness = b;
        return true;
      }
    } catch (const EvalError&) {
    }
    return false;
  };
  for (const auto& combo : special_combinations(params, sampler)) {
    Binding b = sampler.random(params, {}, {});
    for (const auto& [p, v] : combo) b.values[p] = v;
    if (probe(b)) return SignVerdict::Negative;
  }
  for (int k = 0; k < kWitnessAttempts; ++k)
    if (probe(sampler.random(params, {}, {}))) return SignVerdict::Negative;
  return evaluated ? SignVerdict::NonNegative : SignVerdict::Unknown;
}

bool certified_nowhere_zero(const Scalar& e, const Assumptions& a) {
  if (!e.is_single_term()) return false;
  for (const auto& [atom, k] : e.terms().begin()->first.factors) {
    switch (atom->kind) {
      case AtomKind::Param:
        if (a.admits(atom->name, 0)) return false;
        break;
      case AtomKind::Func:
        if (atom->order != 0 || !a.function_nonzero(atom->name)) return false;
        break;
      case AtomKind::Var:
      case AtomKind::Recip:
        return false;
    }
  }
  return true;
}

}  // namespace epc
