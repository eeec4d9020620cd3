#include "epscontact/contact.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace epc {

namespace {

IdentityCheck check(const std::string& name, const TensorField& lhs, const TensorField& rhs, const Assumptions& a,
                    std::uint64_t seed) {
  return {name, zero_verdict(lhs - rhs, a, seed), lhs, rhs};
}

IdentityCheck check(const std::string& name, const TensorField& lhs, const Assumptions& a, std::uint64_t seed) {
  return check(name, lhs, TensorField(lhs.host(), lhs.up(), lhs.down(), lhs.is_form()), a, seed);
}

TensorField endo_product(const TensorField& vec, const TensorField& form) { return tensor_product(vec, form); }

ZeroVerdict combine(std::initializer_list<ZeroVerdict> vs) {
  bool unknown = false;
  for (auto v : vs) {
    if (v == ZeroVerdict::NonZero) return ZeroVerdict::NonZero;
    if (v == ZeroVerdict::Unknown) unknown = true;
  }
  return unknown ? ZeroVerdict::Unknown : ZeroVerdict::Zero;
}

}  // namespace

bool IdentityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

ZeroVerdict IdentityReport::overall() const {
  bool unknown = false;
  for (const auto& c : checks) {
    if (c.verdict.verdict == ZeroVerdict::NonZero) return ZeroVerdict::NonZero;
    if (c.verdict.verdict == ZeroVerdict::Unknown) unknown = true;
  }
  return unknown ? ZeroVerdict::Unknown : ZeroVerdict::Zero;
}

const IdentityCheck* IdentityReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

// ---------------------------------------------------------------- structure

EpsilonContactStructure::EpsilonContactStructure(ManifoldPtr m, TensorField alpha, int epsilon, std::uint64_t seed)
    : m_(std::move(m)),
      alpha_(std::move(alpha)),
      epsilon_(epsilon),
      seed_(seed),
      xi_(sharp(alpha_)),
      phi_(m_, 1, 1),
      h_(m_, 1, 1) {
  // phi^a_b = -s_g g^{ac} (*alpha)_{bc}
  const TensorField star_alpha = hodge(alpha_);
  const int n = m_->dim();
  const Scalar s(static_cast<long>(-m_->signature()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Scalar v;
      for (int c = 0; c < n; ++c)
        if (!m_->ginv(a, c).is_zero()) v += m_->ginv(a, c) * star_alpha.at({b, c});
      phi_.at({a, b}) = s * v;
    }
  h_ = lie_derivative(xi_, phi_);
}

ContactVerification verify_epsilon_contact(const ManifoldPtr& m, const TensorField& alpha_in, std::uint64_t seed,
                                           bool auto_orientation) {
  ContactVerification out;
  if (m->dim() != 3) throw GeometryError("epsilon-contact structures live on 3-manifolds");
  if (alpha_in.up() != 0 || alpha_in.down() != 1) throw GeometryError("alpha must be a 1-form");
  TensorField alpha = alpha_in.host() == m ? alpha_in : rehost(alpha_in, m);
  const Assumptions& a = m->assumptions();

  bool nonvanishing = false;
  for (const auto& c : alpha.components())
    if (!c.is_zero() && certified_nowhere_zero(c, a)) nonvanishing = true;
  if (!nonvanishing) {
    out.failure = ContactFailure{"alpha nowhere zero",
                                 alpha.is_zero() ? "alpha = 0 is degenerate"
                                                 : "no component of alpha is certified nowhere zero under the assumptions",
                                 {}};
    return out;
  }

  const Scalar norm = form_inner(alpha, alpha);
  const auto eps = norm.as_rational();
  if (!eps) {
    out.failure = ContactFailure{"|alpha|^2 = eps", "|alpha|^2 = " + norm.to_string() + " is not constant", {}};
    return out;
  }
  if (*eps != 0 && *eps != 1 && *eps != -1) {
    out.failure = ContactFailure{"|alpha|^2 = eps", "|alpha|^2 = " + eps->get_str() + " is not in {-1, 0, 1}", {}};
    return out;
  }

  auto residual = [&](const ManifoldPtr& host) {
    const TensorField al = rehost(alpha, host);
    return al - hodge(ext_d(al));
  };
  ManifoldPtr host = m;
  TensorField r = residual(host);
  if (!r.is_zero() && auto_orientation) {
    ManifoldPtr flipped = m->with_orientation(-m->orientation());
    TensorField r2 = residual(flipped);
    if (r2.is_zero()) {
      out.notes.push_back("orientation " + std::string(flipped->orientation() > 0 ? "+1" : "-1") +
                          " chosen automatically (alpha = *d alpha fails for the other sign)");
      host = flipped;
      r = r2;
    }
  } else if (r.is_zero() && auto_orientation) {
    out.notes.push_back("orientation " + std::string(m->orientation() > 0 ? "+1" : "-1") + " satisfies alpha = *d alpha");
  }
  if (!r.is_zero()) {
    out.failure = ContactFailure{"alpha = *d alpha", "alpha - *d alpha does not vanish", zero_verdict(r, a, seed)};
    return out;
  }
  out.structure = EpsilonContactStructure(host, rehost(alpha, host), static_cast<int>(eps->get_num().get_si()), seed);
  return out;
}

ContactVerification substitute(const EpsilonContactStructure& s, const std::string& param, const Scalar& value) {
  ManifoldPtr m = substitute_parameter(s.manifold(), param, value);
  TensorField alpha = rehost(s.alpha().map([&](const Scalar& c) { return c.substitute(param, value); }), m);
  return verify_epsilon_contact(m, alpha, s.seed());
}

const TensorField& reeb(const EpsilonContactStructure& s) { return s.xi(); }
const TensorField& phi_endo(const EpsilonContactStructure& s) { return s.phi(); }
const TensorField& h_tensor(const EpsilonContactStructure& s) { return s.h(); }

// ---------------------------------------------------------------- identity suites

IdentityReport structure_tensor_report(const EpsilonContactStructure& s) {
  const auto& m = s.manifold();
  const auto& a = s.assumptions();
  const auto seed = s.seed();
  const TensorField g = TensorField::metric(m);
  const TensorField da = ext_d(s.alpha());
  const TensorField id = TensorField::identity(m);
  const Scalar sg(static_cast<long>(s.signature()));
  const Scalar eps(static_cast<long>(s.epsilon()));
  const TensorField xa = endo_product(s.xi(), s.alpha());
  IdentityReport r;
  r.checks.push_back(check("g(Id x phi) = d alpha", precompose(g, s.phi(), true), da, a, seed));
  r.checks.push_back(check("-g(phi x Id) = d alpha", -precompose(g, s.phi()), da, a, seed));
  r.checks.push_back(check("phi(xi) = 0", apply(s.phi(), s.xi()), a, seed));
  r.checks.push_back(check("alpha o phi = 0", pullback_form(s.alpha(), s.phi()), a, seed));
  const TensorField phi2 = compose(s.phi(), s.phi());
  r.checks.push_back(check("phi^2 = s_g(-eps Id + xi x alpha)", phi2, sg * (xa - eps * id), a, seed));
  const TensorField gpp = precompose(precompose(g, s.phi()), s.phi(), true);
  r.checks.push_back(check("g(phi x phi) = s_g(eps g - alpha x alpha)",
                           gpp, sg * (eps * g - tensor_product(s.alpha(), s.alpha())), a, seed));
  if (s.epsilon() == 0) r.checks.push_back(check("phi^3 = 0", compose(phi2, s.phi()), a, seed));
  return r;
}

IdentityReport derived_tensor_report(const EpsilonContactStructure& s) {
  const auto& m = s.manifold();
  const auto& a = s.assumptions();
  const auto seed = s.seed();
  const Connection lc = levi_civita(m);
  const TensorField g = TensorField::metric(m);
  IdentityReport r;
  r.checks.push_back(check("nabla_xi xi = 0", covariant_derivative(lc, s.xi(), s.xi()), a, seed));
  r.checks.push_back(check("nabla_xi phi = 0", covariant_derivative_tensor(lc, s.xi(), s.phi()), a, seed));
  r.checks.push_back(check("h(xi) = 0", apply(s.h(), s.xi()), a, seed));
  r.checks.push_back(check("Tr h = 0", TensorField::function(m, trace(s.h())), a, seed));
  r.checks.push_back(check("L_xi alpha = 0", lie_derivative(s.xi(), s.alpha()), a, seed));
  const TensorField hp = compose(s.h(), s.phi());
  const TensorField ph = compose(s.phi(), s.h());
  r.checks.push_back(check("h o phi = -phi o h", hp, -ph, a, seed));
  r.checks.push_back(check("h is g-symmetric", precompose(g, s.h()), precompose(g, s.h(), true), a, seed));
  if (s.epsilon() == 0) {
    r.checks.push_back(check("h o phi = 0", hp, a, seed));
    r.checks.push_back(check("phi o h = 0", ph, a, seed));
  }
  return r;
}

IdentityReport structure_invariants(const EpsilonContactStructure& s) {
  const auto& a = s.assumptions();
  const TensorField da = ext_d(s.alpha());
  const Scalar sg(static_cast<long>(s.signature()));
  IdentityReport r;
  r.checks.push_back(check("alpha ^ d alpha = s_g alpha ^ *alpha",
                           wedge(s.alpha(), da), sg * wedge(s.alpha(), hodge(s.alpha())), a, s.seed()));
  r.checks.push_back(check("i_xi d alpha = 0", interior(s.xi(), da), a, s.seed()));
  if (s.epsilon() == 0) r.checks.push_back(check("alpha ^ d alpha = 0", wedge(s.alpha(), da), a, s.seed()));
  return r;
}

// ---------------------------------------------------------------- contact frames

namespace {

std::vector<Rational> rationals_of_height(int h) {
  std::vector<Rational> out;
  if (h == 0) return {Rational(0)};
  for (int d = 1; d <= h; ++d)
    for (int n = -h; n <= h; ++n) {
      if (std::max(std::abs(n), d) != h || n == 0) continue;
      if (std::gcd(n, d) != 1) continue;
      out.emplace_back(n, d);
    }
  std::stable_sort(out.begin(), out.end(), [](const Rational& x, const Rational& y) {
    if (x.get_den() != y.get_den()) return x.get_den() < y.get_den();
    return abs(x) < abs(y) || (abs(x) == abs(y) && x > y);
  });
  return out;
}

// Calls f on every tuple of `count` rationals whose maximum height is h.
template <class F>
bool for_each_tuple(int count, int h, F&& f) {
  std::vector<std::vector<Rational>> levels;
  for (int k = 0; k <= h; ++k) levels.push_back(rationals_of_height(k));
  std::vector<Rational> pool;
  std::vector<int> heights;
  for (int k = 0; k <= h; ++k)
    for (const auto& q : levels[static_cast<std::size_t>(k)]) {
      pool.push_back(q);
      heights.push_back(k);
    }
  std::vector<std::size_t> idx(static_cast<std::size_t>(count), 0);
  if (count == 0) return h == 0 && f(std::vector<Rational>{});
  for (;;) {
    int top = 0;
    for (auto i : idx) top = std::max(top, heights[i]);
    if (top == h) {
      std::vector<Rational> w;
      for (auto i : idx) w.push_back(pool[i]);
      if (f(w)) return true;
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

}  // namespace

ContactFrame find_contact_frame(const EpsilonContactStructure& s, const std::vector<TensorField>& basis_in, int max_height) {
  const auto& m = s.manifold();
  const int n = m->dim();
  std::vector<TensorField> basis = basis_in;
  if (basis.empty())
    for (int i = 0; i < n; ++i) basis.push_back(TensorField::basis_vector(m, i));
  const TensorField& xi = s.xi();
  const Rational eps = s.epsilon();
  const Rational target_lin = 1 - eps * eps;
  const Rational target_quad = eps * s.signature();

  std::vector<Scalar> scales{Scalar(1L)};
  for (const auto& c : xi.components()) {
    if (c.is_zero()) continue;
    if (!c.is_constant()) {
      bool proportional = true;
      const Scalar inv = c.inverse();
      for (const auto& d : xi.components()) proportional = proportional && (d * inv).is_constant();
      if (proportional) scales.push_back(inv);
    }
    break;
  }

  for (const Scalar& scale : scales) {
    std::vector<Rational> lin;
    bool ok = true;
    for (const auto& b : basis) {
      auto v = (scale * metric_pairing(b, xi)).as_rational();
      if (!v) ok = false;
      else lin.push_back(*v);
    }
    const Scalar quad_scale = eps == 0 ? Scalar(1L) : scale * scale;
    std::vector<Rational> quad;
    for (const auto& b1 : basis)
      for (const auto& b2 : basis) {
        auto v = (quad_scale * metric_pairing(b1, b2)).as_rational();
        if (!v) ok = false;
        else quad.push_back(*v);
      }
    if (!ok) continue;
    const auto nb = basis.size();
    std::optional<std::size_t> pivot;
    for (std::size_t i = 0; i < nb; ++i)
      if (lin[i] != 0) {
        pivot = i;
        break;
      }
    if (!pivot && target_lin != 0) continue;
    const int free_count = static_cast<int>(nb) - (pivot ? 1 : 0);
    std::optional<ContactFrame> found;
    for (int h = 0; h <= max_height && !found; ++h) {
      for_each_tuple(free_count, h, [&](const std::vector<Rational>& free) {
        std::vector<Rational> w(nb);
        std::size_t k = 0;
        for (std::size_t i = 0; i < nb; ++i)
          if (!pivot || i != *pivot) w[i] = free[k++];
        if (pivot) {
          Rational rest = target_lin;
          for (std::size_t i = 0; i < nb; ++i)
            if (i != *pivot) rest -= lin[i] * w[i];
          w[*pivot] = rest / lin[*pivot];
        }
        Rational q = 0;
        for (std::size_t i = 0; i < nb; ++i)
          for (std::size_t j = 0; j < nb; ++j) q += quad[i * nb + j] * w[i] * w[j];
        if (q != target_quad) return false;
        if (std::all_of(w.begin(), w.end(), [](const Rational& x) { return x == 0; })) return false;
        TensorField u(m, 1, 0);
        for (std::size_t i = 0; i < nb; ++i)
          if (w[i] != 0) u += (scale * Scalar(w[i])) * basis[i];
        TensorField pu = apply(s.phi(), u);
        std::vector<Scalar> frame;
        for (int r = 0; r < n; ++r) {
          frame.push_back(xi[static_cast<std::size_t>(r)]);
          frame.push_back(u[static_cast<std::size_t>(r)]);
          frame.push_back(pu[static_cast<std::size_t>(r)]);
        }
        if (determinant(frame, 3).is_zero()) return false;
        found = ContactFrame{xi, u, pu, {}, h};
        return true;
      });
    }
    if (found) {
      const auto& a = s.assumptions();
      auto pair_check = [&](const std::string& name, const Scalar& lhs, const Rational& rhs) {
        return check(name, TensorField::function(m, lhs), TensorField::function(m, Scalar(rhs)), a, s.seed());
      };
      auto& f = *found;
      auto& p = f.pairings.checks;
      p.push_back(pair_check("g(u, xi) = 1 - eps^2", metric_pairing(f.u, xi), target_lin));
      p.push_back(pair_check("g(u, u) = s_g eps", metric_pairing(f.u, f.u), target_quad));
      p.push_back(pair_check("g(xi, xi) = eps", metric_pairing(xi, xi), eps));
      p.push_back(pair_check("g(xi, phi u) = 0", metric_pairing(xi, f.phi_u), 0));
      p.push_back(pair_check("g(u, phi u) = 0", metric_pairing(f.u, f.phi_u), 0));
      p.push_back(pair_check("g(phi u, phi u) = 1", metric_pairing(f.phi_u, f.phi_u), 1));
      return f;
    }
  }
  throw SearchFailure("no contact frame vector u with rational coefficients of height <= " + std::to_string(max_height) +
                      " found (scales tried: " + std::to_string(scales.size()) + ")");
}

// ---------------------------------------------------------------- predicates

std::string PredicateResult::describe(const ManifoldPtr& host) const {
  switch (verdict) {
    case ZeroVerdict::Zero:
      return "holds";
    case ZeroVerdict::NonZero: {
      std::string out = "fails: component " + index_label(host, witness.index) + " = " + witness.value.to_string();
      if (witness.test.witness) out += " (nonzero at " + epc::describe(*witness.test.witness) + ")";
      return out;
    }
    case ZeroVerdict::Unknown:
      return "unknown: component " + index_label(host, witness.index) + " = " + witness.value.to_string() +
             (witness.test.note.empty() ? "" : " (" + witness.test.note + ")");
  }
  return {};
}

PredicateResult is_sasaki(const EpsilonContactStructure& s, const Assumptions& extra) {
  auto v = zero_verdict(s.h(), s.assumptions().merged(extra), s.seed());
  return {v.verdict, v};
}

TensorField killing_defect(const EpsilonContactStructure& s) {
  return lie_derivative(s.xi(), TensorField::metric(s.manifold()));
}

PredicateResult is_k_contact(const EpsilonContactStructure& s, const Assumptions& extra) {
  auto v = zero_verdict(killing_defect(s), s.assumptions().merged(extra), s.seed());
  return {v.verdict, v};
}

Scalar null_mu(const EpsilonContactStructure& s) {
  if (s.epsilon() != 0) throw NullStructureError("mu is defined for null contact structures only");
  const TensorField xa = tensor_product(s.xi(), s.alpha());
  if (s.h().is_zero()) return {};
  std::optional<std::size_t> best;
  for (std::size_t f = 0; f < xa.size(); ++f) {
    if (xa[f].is_zero()) continue;
    if (!best || (xa[f].is_single_term() && !xa[*best].is_single_term())) best = f;
  }
  if (!best) throw NullStructureError("xi (x) alpha vanishes identically");
  const Scalar mu = s.h()[*best] * xa[*best].inverse();
  if (!(s.h() - mu * xa).is_zero())
    throw NullStructureError("internal inconsistency: h is not a multiple of xi (x) alpha");
  return mu;
}

// ---------------------------------------------------------------- J on M x R

ExtendedJ extend_j(const EpsilonContactStructure& s) {
  if (s.epsilon() != 0) throw NullStructureError("J is built for null contact structures only");
  FrameManifold::Data line;
  line.name = "R";
  line.labels = {"d_tau"};
  line.metric = {Scalar(1L)};
  line.coordinates = {"tau"};
  ManifoldPtr m4 = product_manifold(s.manifold(), FrameManifold::make(std::move(line)), false);
  const int n = s.manifold()->dim();
  TensorField j(m4, 1, 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) j.at({a, b}) = s.phi().at({a, b});
  for (int b = 0; b < n; ++b) j.at({n, b}) = s.alpha()[static_cast<std::size_t>(b)];
  for (int a = 0; a < n; ++a) j.at({a, n}) = s.xi()[static_cast<std::size_t>(a)];
  return {m4, j, compose(j, j)};
}

std::vector<Scalar> j_matrix_in_frame(const ExtendedJ& j, const EpsilonContactStructure&, const ContactFrame& f) {
  const auto& m4 = j.manifold;
  std::vector<TensorField> cols{promote(f.xi, m4), promote(f.u, m4), promote(f.phi_u, m4),
                                TensorField::basis_vector(m4, m4->dim() - 1)};
  const int n = m4->dim();
  std::vector<Scalar> P(static_cast<std::size_t>(n * n)), JP(static_cast<std::size_t>(n * n));
  for (int c = 0; c < n; ++c) {
    const TensorField jc = apply(j.j, cols[static_cast<std::size_t>(c)]);
    for (int r = 0; r < n; ++r) {
      P[static_cast<std::size_t>(r * n + c)] = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
      JP[static_cast<std::size_t>(r * n + c)] = jc[static_cast<std::size_t>(r)];
    }
  }
  const auto Pinv = inverse_matrix(P, n);
  std::vector<Scalar> out(static_cast<std::size_t>(n * n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      Scalar v;
      for (int k = 0; k < n; ++k) v += Pinv[static_cast<std::size_t>(r * n + k)] * JP[static_cast<std::size_t>(k * n + c)];
      out[static_cast<std::size_t>(r * n + c)] = v;
    }
  return out;
}

TensorField nijenhuis(const ManifoldPtr& m, const TensorField& j) {
  const int n = m->dim();
  std::vector<TensorField> e, je;
  for (int i = 0; i < n; ++i) {
    e.push_back(TensorField::basis_vector(m, i));
    je.push_back(apply(j, e.back()));
  }
  TensorField N(m, 1, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& ei = e[static_cast<std::size_t>(i)];
      const auto& ek = e[static_cast<std::size_t>(k)];
      const auto& jei = je[static_cast<std::size_t>(i)];
      const auto& jek = je[static_cast<std::size_t>(k)];
      const TensorField v = lie_bracket(jei, jek) - apply(j, lie_bracket(ei, jek)) - apply(j, lie_bracket(jei, ek)) +
                            apply(j, apply(j, lie_bracket(ei, ek)));
      for (int l = 0; l < n; ++l) N.at({l, i, k}) = v[static_cast<std::size_t>(l)];
    }
  return N;
}

namespace {

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Scalar minor_of(const TensorField& endo, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  std::vector<Scalar> m;
  for (int r : rows)
    for (int c : cols) m.push_back(endo.at({r, c}));
  return determinant(m, k);
}

}  // namespace

RankResult constant_rank(const TensorField& endo, const Assumptions& a, std::uint64_t) {
  const int n = endo.dim();
  for (int r = n; r >= 1; --r) {
    std::vector<Scalar> nonzero;
    for (const auto& rows : subsets(n, r))
      for (const auto& cols : subsets(n, r)) {
        Scalar d = minor_of(endo, rows, cols);
        if (!d.is_zero()) nonzero.push_back(std::move(d));
      }
    if (nonzero.empty()) continue;
    for (const auto& d : nonzero)
      if (certified_nowhere_zero(d, a)) return {ZeroVerdict::Zero, r, "rank " + std::to_string(r) + " everywhere"};
    return {ZeroVerdict::Unknown, r,
            "generic rank " + std::to_string(r) + " but no " + std::to_string(r) + "x" + std::to_string(r) +
                " minor is certified nowhere zero (e.g. " + nonzero.front().to_string() + ")"};
  }
  return {ZeroVerdict::Zero, 0, "rank 0"};
}

ZeroDeformability zero_deformable(const ExtendedJ& j, const Assumptions& a, std::uint64_t seed) {
  ZeroDeformability z{ZeroVerdict::Zero, constant_rank(j.j, a, seed), constant_rank(j.j_squared, a, seed)};
  z.verdict = combine({z.rank_j.verdict, z.rank_j2.verdict});
  return z;
}

KernelInvolutivity kernel_involutive(const ExtendedJ& j, const EpsilonContactStructure& s, const ContactFrame& f) {
  const auto& m4 = j.manifold;
  const int n = m4->dim();
  TensorField k1 = promote(f.xi, m4);
  TensorField k2 = promote(f.phi_u, m4) + TensorField::basis_vector(m4, n - 1);
  if (!apply(j.j, k1).is_zero() || !apply(j.j, k2).is_zero())
    throw GeometryError("kernel basis (xi, phi u + d_tau) is not annihilated by J");
  TensorField b = lie_bracket(k1, k2);
  // Minors of the n x 3 matrix (k1, k2, b), one per omitted row.
  TensorField minors(m4, 1, 0);
  for (int omit = 0; omit < n; ++omit) {
    std::vector<Scalar> mat;
    for (int r = 0; r < n; ++r) {
      if (r == omit) continue;
      mat.push_back(k1[static_cast<std::size_t>(r)]);
      mat.push_back(k2[static_cast<std::size_t>(r)]);
      mat.push_back(b[static_cast<std::size_t>(r)]);
    }
    minors[static_cast<std::size_t>(omit)] = determinant(mat, 3);
  }
  auto v = zero_verdict(minors, s.assumptions(), s.seed());
  return {v.verdict, {k1, k2}, b, v};
}

ZeroVerdict is_integrable(const IntegrabilityReport& r) {
  return combine({r.nijenhuis.verdict, r.zero_deformable.verdict, r.kernel.verdict});
}

IntegrabilityReport sasaki_iff_integrable_report(const EpsilonContactStructure& s, const ContactFrame& f,
                                                 const Assumptions& extra) {
  const Assumptions a = s.assumptions().merged(extra);
  const ExtendedJ j = extend_j(s);
  IntegrabilityReport r{zero_verdict(nijenhuis(j.manifold, j.j), a, s.seed()),
                        zero_deformable(j, a, s.seed()),
                        kernel_involutive(j, s, f),
                        ZeroVerdict::Unknown,
                        is_sasaki(s, extra),
                        false};
  r.integrable = is_integrable(r);
  r.agrees = (r.integrable == ZeroVerdict::Zero && r.sasaki.verdict == ZeroVerdict::Zero) ||
             (r.integrable == ZeroVerdict::NonZero && r.sasaki.verdict == ZeroVerdict::NonZero);
  return r;
}

Scalar saskc_criterion(const EpsilonContactStructure& s, const ContactFrame& f) {
  if (s.epsilon() != 0) throw NullStructureError("the K-contact criterion applies to null structures");
  if (!s.h().is_zero()) throw NullStructureError("the K-contact criterion requires a Sasaki structure");
  return metric_pairing(lie_bracket(f.xi, f.u), f.u);
}

}  // namespace epc
