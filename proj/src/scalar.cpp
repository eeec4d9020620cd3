#include "epscontact/scalar.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace epc {

Rational parse_rational(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational q(text, 10);
    q.canonicalize();
    return q;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const auto decimals = text.size() - dot - 1;
  Rational q(digits, 10);
  mpz_class scale = 1;
  for (std::size_t i = 0; i < decimals; ++i) scale *= 10;
  q /= scale;
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

std::strong_ordering compare_rational(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string factor_text(const std::string& base, int e, bool needs_parens) {
  std::string b = needs_parens ? "(" + base + ")" : base;
  if (e == 1) return b;
  return b + "^" + std::to_string(e);
}

}  // namespace

// ---------------------------------------------------------------- Affine

Rational Affine::coeff(const std::string& var) const {
  auto it = coeffs.find(var);
  return it == coeffs.end() ? Rational(0) : it->second;
}

Affine Affine::operator+(const Affine& o) const {
  Affine r = *this;
  r.constant += o.constant;
  for (const auto& [v, c] : o.coeffs) {
    Rational& slot = r.coeffs[v];
    slot += c;
    if (slot == 0) r.coeffs.erase(v);
  }
  return r;
}

Affine Affine::operator-() const { return scaled(-1); }

Affine Affine::scaled(const Rational& k) const {
  Affine r;
  if (k == 0) return r;
  r.constant = constant * k;
  for (const auto& [v, c] : coeffs) r.coeffs[v] = c * k;
  return r;
}

std::string Affine::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& sym) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (sym.empty()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << sym;
    }
  };
  for (const auto& [v, c] : coeffs) emit(c, v);
  if (constant != 0 || first) emit(constant, "");
  return os.str();
}

std::strong_ordering operator<=>(const Affine& a, const Affine& b) {
  auto ia = a.coeffs.begin();
  auto ib = b.coeffs.begin();
  for (; ia != a.coeffs.end() && ib != b.coeffs.end(); ++ia, ++ib) {
    if (auto c = ia->first <=> ib->first; c != 0) return c;
    if (auto c = compare_rational(ia->second, ib->second); c != 0) return c;
  }
  if (ia != a.coeffs.end()) return std::strong_ordering::greater;
  if (ib != b.coeffs.end()) return std::strong_ordering::less;
  return compare_rational(a.constant, b.constant);
}

// ---------------------------------------------------------------- Atoms

Atom make_param_atom(const std::string& name) {
  return std::make_shared<const AtomData>(AtomData{AtomKind::Param, name, 0, {}, nullptr, name});
}

Atom make_var_atom(const std::string& name) {
  return std::make_shared<const AtomData>(AtomData{AtomKind::Var, name, 0, {}, nullptr, name});
}

Atom make_func_atom(const std::string& name, int order, const Affine& arg) {
  std::string key = name + std::string(static_cast<std::size_t>(order), '\'') + "(" + arg.to_string() + ")";
  return std::make_shared<const AtomData>(AtomData{AtomKind::Func, name, order, arg, nullptr, key});
}

namespace {

Atom make_recip_atom(const Scalar& inner) {
  return std::make_shared<const AtomData>(
      AtomData{AtomKind::Recip, "", 0, {}, std::make_shared<const Scalar>(inner), inner.to_string()});
}

}  // namespace

bool atom_less(const Atom& a, const Atom& b) {
  if (a->kind != b->kind) return a->kind < b->kind;
  return a->key < b->key;
}

bool atom_equal(const Atom& a, const Atom& b) {
  return a == b || (a->kind == b->kind && a->key == b->key);
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors.reserve(factors.size() + o.factors.size());
  auto i = factors.begin();
  auto j = o.factors.begin();
  while (i != factors.end() || j != o.factors.end()) {
    if (j == o.factors.end() || (i != factors.end() && atom_less(i->first, j->first))) {
      r.factors.push_back(*i++);
    } else if (i == factors.end() || atom_less(j->first, i->first)) {
      r.factors.push_back(*j++);
    } else {
      const int e = i->second + j->second;
      if (e != 0) r.factors.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  r.exp_arg = exp_arg + o.exp_arg;
  return r;
}

std::string Monomial::to_string() const {
  std::vector<std::string> parts;
  for (const auto& [atom, e] : factors) {
    switch (atom->kind) {
      case AtomKind::Param:
      case AtomKind::Var:
      case AtomKind::Func:
        parts.push_back(factor_text(atom->key, e, false));
        break;
      case AtomKind::Recip:
        parts.push_back(factor_text(atom->key, -e, true));
        break;
    }
  }
  if (!exp_arg.is_zero()) parts.push_back("exp(" + exp_arg.to_string() + ")");
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += "*";
    out += parts[k];
  }
  return out;
}

bool operator<(const Monomial& a, const Monomial& b) {
  const auto n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& fa = a.factors[k];
    const auto& fb = b.factors[k];
    if (!atom_equal(fa.first, fb.first)) return atom_less(fa.first, fb.first);
    if (fa.second != fb.second) return fa.second > fb.second;
  }
  if (a.factors.size() != b.factors.size()) return a.factors.size() > b.factors.size();
  return (a.exp_arg <=> b.exp_arg) > 0;
}

bool operator==(const Monomial& a, const Monomial& b) {
  if (a.factors.size() != b.factors.size()) return false;
  for (std::size_t k = 0; k < a.factors.size(); ++k) {
    if (a.factors[k].second != b.factors[k].second) return false;
    if (!atom_equal(a.factors[k].first, b.factors[k].first)) return false;
  }
  return a.exp_arg == b.exp_arg;
}

// ---------------------------------------------------------------- Scalar

namespace {

bool has_recip(const Scalar::TermMap& terms) {
  for (const auto& [m, c] : terms)
    for (const auto& [atom, e] : m.factors)
      if (atom->kind == AtomKind::Recip) return true;
  return false;
}

Monomial inverse_monomial(const Monomial& m) {
  Monomial r;
  for (const auto& [atom, e] : m.factors) r.factors.emplace_back(atom, -e);
  r.exp_arg = -m.exp_arg;
  return r;
}

Scalar monomial_scalar(const Monomial& m, const Rational& c) {
  Scalar::TermMap t;
  t.emplace(m, c);
  return Scalar::from_terms(std::move(t));
}

}  // namespace


Scalar::Scalar(long v) {
  if (v != 0) terms_.emplace(Monomial{}, Rational(v));
}

Scalar::Scalar(const Rational& q) {
  if (q == 0) return;
  Rational c = q;
  c.canonicalize();
  terms_.emplace(Monomial{}, std::move(c));
}

Scalar Scalar::param(const std::string& name) {
  Monomial m;
  m.factors.emplace_back(make_param_atom(name), 1);
  Scalar s;
  s.terms_.emplace(std::move(m), 1);
  return s;
}

Scalar Scalar::var(const std::string& name) {
  Monomial m;
  m.factors.emplace_back(make_var_atom(name), 1);
  Scalar s;
  s.terms_.emplace(std::move(m), 1);
  return s;
}

Scalar Scalar::func(const std::string& name, int order, const Affine& arg) {
  Monomial m;
  m.factors.emplace_back(make_func_atom(name, order, arg), 1);
  Scalar s;
  s.terms_.emplace(std::move(m), 1);
  return s;
}

Scalar Scalar::exp(const Affine& arg) {
  Monomial m;
  m.exp_arg = arg;
  Scalar s;
  s.terms_.emplace(std::move(m), 1);
  return s;
}

Scalar Scalar::from_terms(TermMap terms) {
  Scalar s;
  for (auto& [m, c] : terms)
    if (c != 0) s.terms_.emplace(m, c);
  return s;
}

void Scalar::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Scalar::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

std::optional<Rational> Scalar::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

std::optional<Affine> Scalar::as_affine() const {
  Affine a;
  for (const auto& [m, c] : terms_) {
    if (!m.exp_arg.is_zero()) return std::nullopt;
    if (m.factors.empty()) {
      a.constant += c;
    } else if (m.factors.size() == 1 && m.factors[0].second == 1 &&
               m.factors[0].first->kind == AtomKind::Var) {
      a.coeffs[m.factors[0].first->name] += c;
    } else {
      return std::nullopt;
    }
  }
  return a;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  if (has_recip(o.terms_)) cancel_reciprocals();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  if (has_recip(o.terms_)) cancel_reciprocals();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  *this = *this * o;
  return *this;
}

Scalar Scalar::raw_product(const Scalar& a, const Scalar& b) {
  Scalar r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r = Scalar::raw_product(a, b);
  r.cancel_reciprocals();
  return r;
}


// Rewrites  C * (1/P)^e  as  k * m * (1/P)^(e-1)  whenever the cofactor C of a
// reciprocal power is a monomial multiple k * m * P of its inner sum.
void Scalar::cancel_reciprocals() {
  bool changed = has_recip(terms_);
  while (changed) {
    changed = false;
    std::vector<Atom> recips;
    for (const auto& [m, c] : terms_)
      for (const auto& [atom, e] : m.factors)
        if (atom->kind == AtomKind::Recip && e > 0 &&
            std::none_of(recips.begin(), recips.end(), [&](const Atom& a) { return atom_equal(a, atom); }))
          recips.push_back(atom);
    for (const Atom& r : recips) {
      std::map<int, Scalar> cofactors;
      for (const auto& [m, c] : terms_) {
        for (std::size_t k = 0; k < m.factors.size(); ++k) {
          if (!atom_equal(m.factors[k].first, r)) continue;
          Monomial rest = m;
          rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(k));
          cofactors[m.factors[k].second].add_term(rest, c);
        }
      }
      for (const auto& [e, cof] : cofactors) {
        if (e <= 0 || cof.terms_.size() < 2) continue;
        auto [lead, common, normalized] = split_content(cof);
        if (!(normalized == *r->inner)) continue;
        Monomial power;
        power.factors.emplace_back(r, e);
        for (const auto& [m, c] : cof.terms_) add_term(m * power, -c);
        Monomial lower;
        if (e > 1) lower.factors.emplace_back(r, e - 1);
        add_term(common * lower, lead);
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
}

// Writes a multi-term s as lead * common * normalized, where common is the
// shared monomial factor and normalized has leading coefficient 1.
std::tuple<Rational, Monomial, Scalar> Scalar::split_content(const Scalar& s) {
  const auto& terms = s.terms_;
  Monomial common;
  std::vector<Atom> atoms;
  for (const auto& [m, c] : terms)
    for (const auto& [atom, e] : m.factors)
      if (atom->kind != AtomKind::Recip &&
          std::none_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return atom_equal(a, atom); }))
        atoms.push_back(atom);
  std::sort(atoms.begin(), atoms.end(), atom_less);
  for (const Atom& atom : atoms) {
    int lowest = 0;
    bool first = true;
    for (const auto& [m, c] : terms) {
      int e = 0;
      for (const auto& f : m.factors)
        if (atom_equal(f.first, atom)) e = f.second;
      lowest = first ? e : std::min(lowest, e);
      first = false;
    }
    if (lowest != 0) common.factors.emplace_back(atom, lowest);
  }
  const Affine& e0 = terms.begin()->first.exp_arg;
  bool same_exp = true;
  for (const auto& [m, c] : terms) same_exp = same_exp && m.exp_arg == e0;
  if (same_exp) common.exp_arg = e0;
  Scalar reduced = common.is_one() ? s : raw_product(s, monomial_scalar(inverse_monomial(common), 1));
  const Rational lead = reduced.terms_.begin()->second;
  for (auto& [m, c] : reduced.terms_) c /= lead;
  return {lead, common, reduced};
}

Scalar Scalar::inverse() const {
  if (terms_.empty()) throw EvalError("division by zero");
  if (terms_.size() == 1) {
    const auto& [m, c] = *terms_.begin();
    Monomial inv;
    inv.exp_arg = -m.exp_arg;
    Scalar expand = 1;
    for (const auto& [atom, e] : m.factors) {
      if (atom->kind == AtomKind::Recip)
        expand *= atom->inner->pow(e);
      else
        inv.factors.emplace_back(atom, -e);
    }
    Scalar r;
    r.terms_.emplace(std::move(inv), 1 / c);
    return r * expand;
  }
  auto [lead, common, normalized] = split_content(*this);
  Monomial rm;
  rm.factors.emplace_back(make_recip_atom(normalized), 1);
  Scalar r;
  r.terms_.emplace(std::move(rm), 1 / lead);
  return common.is_one() ? r : raw_product(r, monomial_scalar(inverse_monomial(common), 1));
}

Scalar Scalar::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Scalar result = 1;
  Scalar base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

namespace {


Monomial drop_one_power(const Monomial& m, std::size_t idx) {
  Monomial r = m;
  r.factors[idx].second -= 1;
  if (r.factors[idx].second == 0) r.factors.erase(r.factors.begin() + static_cast<long>(idx));
  return r;
}

}  // namespace

Scalar Scalar::diff(const std::string& var) const {
  Scalar out;
  for (const auto& [m, c] : terms_) {
    for (std::size_t k = 0; k < m.factors.size(); ++k) {
      const auto& [atom, e] = m.factors[k];
      Scalar d_atom;
      switch (atom->kind) {
        case AtomKind::Param:
          continue;
        case AtomKind::Var:
          if (atom->name != var) continue;
          d_atom = 1;
          break;
        case AtomKind::Func: {
          const Rational a = atom->arg.coeff(var);
          if (a == 0) continue;
          d_atom = Scalar(a) * Scalar::func(atom->name, atom->order + 1, atom->arg);
          break;
        }
        case AtomKind::Recip: {
          // Recip atom r = 1/P, dr = -r^2 dP
          Scalar dp = atom->inner->diff(var);
          if (dp.is_zero()) continue;
          Monomial rm;
          rm.factors.emplace_back(atom, 2);
          d_atom = -(monomial_scalar(rm, 1) * dp);
          break;
        }
      }
      out += monomial_scalar(drop_one_power(m, k), c * e) * d_atom;
    }
    const Rational a = m.exp_arg.coeff(var);
    if (a != 0) out.add_term(m, c * a);
  }
  return out;
}

namespace {

Affine substitute_affine(const Affine& arg, const std::string& name, const Affine& value) {
  const Rational c = arg.coeff(name);
  if (c == 0) return arg;
  Affine rest = arg;
  rest.coeffs.erase(name);
  return rest + value.scaled(c);
}

}  // namespace

Scalar Scalar::substitute(const std::string& name, const Scalar& value) const {
  std::optional<Affine> value_affine;
  bool affine_checked = false;
  auto need_affine = [&]() -> const Affine& {
    if (!affine_checked) {
      value_affine = value.as_affine();
      affine_checked = true;
    }
    if (!value_affine)
      throw ExprError("cannot substitute non-affine value for '" + name + "' inside a function or exp argument");
    return *value_affine;
  };
  Scalar out;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    Scalar factor = 1;
    bool changed = false;
    for (const auto& [atom, e] : m.factors) {
      switch (atom->kind) {
        case AtomKind::Param:
        case AtomKind::Var:
          if (atom->name == name) {
            factor *= value.pow(e);
            changed = true;
          } else {
            kept.factors.emplace_back(atom, e);
          }
          break;
        case AtomKind::Func:
          if (atom->arg.coeff(name) != 0) {
            Affine na = substitute_affine(atom->arg, name, need_affine());
            factor *= Scalar::func(atom->name, atom->order, na).pow(e);
            changed = true;
          } else {
            kept.factors.emplace_back(atom, e);
          }
          break;
        case AtomKind::Recip: {
          Scalar inner = atom->inner->substitute(name, value);
          if (inner == *atom->inner) {
            kept.factors.emplace_back(atom, e);
          } else {
            factor *= inner.inverse().pow(e);
            changed = true;
          }
          break;
        }
      }
    }
    if (m.exp_arg.coeff(name) != 0) {
      factor *= Scalar::exp(substitute_affine(m.exp_arg, name, need_affine()));
      changed = true;
    } else {
      kept.exp_arg = m.exp_arg;
    }
    if (!changed) {
      out.add_term(m, c);
    } else {
      out += monomial_scalar(kept, c) * factor;
    }
  }
  return out;
}

Scalar Scalar::reduce_square(const std::string& sym, const Scalar& value) const {
  Scalar out;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    kept.exp_arg = m.exp_arg;
    Scalar factor = 1;
    bool changed = false;
    for (const auto& [atom, e] : m.factors) {
      if (atom->kind == AtomKind::Param && atom->name == sym && (e >= 2 || e <= -1)) {
        int q = e / 2;
        int r = e % 2;
        if (r < 0) {
          q -= 1;
          r += 2;
        }
        factor *= value.pow(q);
        if (r) kept.factors.emplace_back(atom, r);
        changed = true;
      } else if (atom->kind == AtomKind::Recip) {
        Scalar inner = atom->inner->reduce_square(sym, value);
        if (inner == *atom->inner) {
          kept.factors.emplace_back(atom, e);
        } else {
          factor *= inner.inverse().pow(e);
          changed = true;
        }
      } else {
        kept.factors.emplace_back(atom, e);
      }
    }
    if (!changed)
      out.add_term(m, c);
    else
      out += monomial_scalar(kept, c) * factor;
  }
  return out;
}

Scalar Scalar::replace_atoms(const std::function<std::optional<Scalar>(const AtomData&)>& f) const {
  Scalar out;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    kept.exp_arg = m.exp_arg;
    Scalar factor = 1;
    bool changed = false;
    for (const auto& [atom, e] : m.factors) {
      if (auto r = f(*atom)) {
        factor *= r->pow(e);
        changed = true;
      } else if (atom->kind == AtomKind::Recip) {
        Scalar inner = atom->inner->replace_atoms(f);
        if (inner == *atom->inner) {
          kept.factors.emplace_back(atom, e);
        } else {
          factor *= inner.inverse().pow(e);
          changed = true;
        }
      } else {
        kept.factors.emplace_back(atom, e);
      }
    }
    if (!changed)
      out.add_term(m, c);
    else
      out += monomial_scalar(kept, c) * factor;
  }
  return out;
}

namespace {

void collect(const Scalar& s, std::set<std::string>* params, std::set<std::string>* vars,
             std::set<std::string>* funcs) {
  for (const auto& [m, c] : s.terms()) {
    for (const auto& [atom, e] : m.factors) {
      switch (atom->kind) {
        case AtomKind::Param:
          if (params) params->insert(atom->name);
          break;
        case AtomKind::Var:
          if (vars) vars->insert(atom->name);
          break;
        case AtomKind::Func:
          if (funcs) funcs->insert(atom->name);
          if (vars)
            for (const auto& [v, k] : atom->arg.coeffs) vars->insert(v);
          break;
        case AtomKind::Recip:
          collect(*atom->inner, params, vars, funcs);
          break;
      }
    }
    if (vars)
      for (const auto& [v, k] : m.exp_arg.coeffs) vars->insert(v);
  }
}

}  // namespace

std::set<std::string> Scalar::params() const {
  std::set<std::string> r;
  collect(*this, &r, nullptr, nullptr);
  return r;
}

std::set<std::string> Scalar::vars() const {
  std::set<std::string> r;
  collect(*this, nullptr, &r, nullptr);
  return r;
}

std::set<std::string> Scalar::funcs() const {
  std::set<std::string> r;
  collect(*this, nullptr, nullptr, &r);
  return r;
}

bool Scalar::depends_on_coordinates() const { return !vars().empty() || !funcs().empty(); }

int Scalar::degree_in(const std::string& param) const {
  int deg = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [atom, e] : m.factors)
      if (atom->kind == AtomKind::Param && atom->name == param) deg = std::max(deg, e);
  return deg;
}

Scalar Scalar::coefficient(const std::string& param, int k) const {
  Scalar out;
  for (const auto& [m, c] : terms_) {
    int e = 0;
    Monomial rest;
    rest.exp_arg = m.exp_arg;
    for (const auto& f : m.factors) {
      if (f.first->kind == AtomKind::Param && f.first->name == param)
        e = f.second;
      else
        rest.factors.push_back(f);
    }
    if (e == k) out.add_term(rest, c);
  }
  return out;
}

Rational eval_poly_derivative(const std::vector<Rational>& coeffs, int order, const Rational& at) {
  Rational result = 0;
  Rational power = 1;
  for (std::size_t n = static_cast<std::size_t>(order); n < coeffs.size(); ++n) {
    // d^order/ds^order s^n = n!/(n-order)! s^(n-order)
    mpz_class falling = 1;
    for (std::size_t j = 0; j < static_cast<std::size_t>(order); ++j) falling *= static_cast<unsigned long>(n - j);
    result += coeffs[n] * Rational(falling) * power;
    power *= at;
  }
  return result;
}

namespace {

Rational rational_pow(const Rational& base, int e) {
  if (e < 0) {
    if (base == 0) throw EvalError("division by zero in negative power");
    return rational_pow(Rational(1 / base), -e);
  }
  Rational r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

Rational eval_affine(const Affine& a, const Binding& b) {
  Rational r = a.constant;
  for (const auto& [v, c] : a.coeffs) {
    auto it = b.values.find(v);
    if (it == b.values.end()) throw EvalError("unbound symbol '" + v + "'");
    r += c * it->second;
  }
  return r;
}

Rational eval_exp(const Affine& a, const Binding& b) {
  if (!b.exp_model) {
    if (eval_affine(a, b) == 0) return 1;
    throw EvalError("exp(" + a.to_string() + ") is not rational at this binding");
  }
  const auto& model = *b.exp_model;
  auto power = [&](const std::string& key, const Rational& c) -> Rational {
    if (c == 0) return 1;
    Rational scaled = c * Rational(model.denom);
    scaled.canonicalize();
    if (scaled.get_den() != 1) throw EvalError("exp coefficient not compatible with exp model denominator");
    auto it = model.base.find(key);
    if (it == model.base.end()) throw EvalError("exp model lacks base for '" + key + "'");
    return rational_pow(it->second, static_cast<int>(scaled.get_num().get_si()));
  };
  Rational r = power("1", a.constant);
  for (const auto& [v, c] : a.coeffs) r *= power(v, c);
  return r;
}

}  // namespace

Rational Scalar::eval(const Binding& b) const {
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (const auto& [atom, e] : m.factors) {
      Rational v;
      switch (atom->kind) {
        case AtomKind::Param:
        case AtomKind::Var: {
          auto it = b.values.find(atom->name);
          if (it == b.values.end()) throw EvalError("unbound symbol '" + atom->name + "'");
          v = it->second;
          break;
        }
        case AtomKind::Func: {
          auto it = b.functions.find(atom->name);
          if (it == b.functions.end()) throw EvalError("unbound function '" + atom->name + "'");
          v = eval_poly_derivative(it->second, atom->order, eval_affine(atom->arg, b));
          break;
        }
        case AtomKind::Recip: {
          Rational inner = atom->inner->eval(b);
          if (inner == 0) throw EvalError("division by zero");
          v = 1 / inner;
          break;
        }
      }
      term *= rational_pow(v, e);
    }
    if (!m.exp_arg.is_zero()) term *= eval_exp(m.exp_arg, b);
    total += term;
  }
  return total;
}

std::string Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const Rational mag = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (m.is_one()) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << m.to_string();
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace epc
