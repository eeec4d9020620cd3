#include "epscontact/sugra6.hpp"

namespace epc {

namespace {

constexpr const char* kFluxSymbol = "flux_c";

Rational binomial(int n, int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn = sqrt(n), rd = sqrt(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  return Rational(rn, rd);
}

FluxTerms flux_terms(const ManifoldPtr& p, const EpsilonContactStructure& n, const EpsilonContactStructure& x) {
  const TensorField an = promote(n.alpha(), p), ax = promote(x.alpha(), p);
  return {promote(TensorField::volume(n.manifold()), p), wedge(promote(hodge(n.alpha()), p), ax),
          wedge(an, promote(hodge(x.alpha()), p)), promote(TensorField::volume(x.manifold()), p)};
}

Scalar kappa_of(const EpsilonContactStructure& s) {
  const Classification c = classify(s);
  if (!c.ok()) throw SugraError("factor " + s.manifold()->name() + " is not eta-Einstein: " + c.failure->reason);
  return c.certificate->kappa;
}

Assumptions product_assumptions(const ManifoldPtr& p, const std::string& l) {
  Assumptions a = p->assumptions();
  a.declare(l);
  return a;
}

}  // namespace

TensorField circ(const TensorField& rho, const TensorField& sigma) {
  if (rho.down() != 3 || sigma.down() != 3 || rho.up() != 0 || sigma.up() != 0)
    throw GeometryError("circ takes two 3-forms");
  const auto& m = rho.host();
  const int n = m->dim();
  // sigma_Y^{ab}
  TensorField raised(m, 0, 3);
  for (int y = 0; y < n; ++y)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Scalar s;
        for (int c = 0; c < n; ++c) {
          if (m->ginv(a, c).is_zero()) continue;
          for (int d = 0; d < n; ++d) {
            if (m->ginv(b, d).is_zero()) continue;
            const Scalar& v = sigma.at({y, c, d});
            if (!v.is_zero()) s += m->ginv(a, c) * m->ginv(b, d) * v;
          }
        }
        raised.at({y, a, b}) = s;
      }
  TensorField out(m, 0, 2);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Scalar s;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Scalar& r = rho.at({x, a, b});
          if (!r.is_zero()) s += r * raised.at({y, a, b});
        }
      out.at({x, y}) = s;
    }
  return out;
}

TensorField wedge_multinomial(const TensorField& w, const TensorField& v) {
  return Scalar(binomial(w.down() + v.down(), w.down())) * wedge(w, v);
}

TensorField flux(const FluxTerms& t, const Scalar& lambda, const Scalar& l, const Scalar& c) {
  return lambda * t.vol_n + (c * l) * t.star_an_ax + (c * l) * t.an_star_ax + lambda * t.vol_x;
}

Scalar SupergravityConfig::reduce(const Scalar& s) const {
  return l_squared ? s.reduce_square(l_symbol, *l_squared) : s;
}

TensorField SupergravityConfig::reduce(const TensorField& t) const {
  return t.map([&](const Scalar& s) { return reduce(s); });
}

SupergravityConfig make_config(const ManifoldPtr& m, const TensorField& h) {
  SupergravityConfig cfg{m, TensorField::metric(m), h, Scalar(), "l", std::nullopt, 1, m->assumptions(), {}, {}, {}};
  return cfg;
}

Calibration calibrate_flux(const EpsilonContactStructure& n, const EpsilonContactStructure& x, const Scalar& lambda,
                           Exec exec) {
  const ManifoldPtr p = product_manifold(n.manifold(), x.manifold());
  const Scalar kappa = kappa_of(n);
  const FluxTerms t = flux_terms(p, n, x);
  const TensorField h = flux(t, lambda, Scalar::param("l"), Scalar::param(kFluxSymbol));
  const TensorField ric = ricci_of(levi_civita(p, exec), exec).ricci;
  const TensorField e = (ric - Scalar(Rational(1, 4)) * circ(h, h)).map([&](const Scalar& s) {
    return s.reduce_square("l", kappa);
  });

  for (std::size_t f = 0; f < e.size(); ++f) {
    if (e[f].degree_in(kFluxSymbol) > 2) throw SugraError("Einstein residual is not quadratic in the flux coefficient");
    const Scalar p2 = e[f].coefficient(kFluxSymbol, 2);
    if (p2.is_zero()) continue;
    const Scalar p1 = e[f].coefficient(kFluxSymbol, 1), p0 = e[f].coefficient(kFluxSymbol, 0);
    const Scalar inv = p2.inverse();
    const auto q1 = (p1 * inv).as_rational(), q0 = (p0 * inv).as_rational();
    if (!q1 || !q0)
      throw SugraError("the flux equation at " + index_label(p, e.unflatten(f)) + " has non-constant coefficients: " +
                       e[f].to_string());
    const auto root = rational_sqrt(*q1 * *q1 - 4 * *q0);
    if (!root) throw SugraError("no rational flux coefficient solves " + e[f].to_string() + " = 0");
    std::vector<Rational> positive;
    for (const Rational& r : std::initializer_list<Rational>{Rational((-*q1 + *root) / 2), Rational((-*q1 - *root) / 2)})
      if (r > 0 && std::find(positive.begin(), positive.end(), r) == positive.end()) positive.push_back(r);
    if (positive.size() != 1) throw SugraError("the flux equation has no unique positive root");
    const Rational c = positive.front();
    const TensorField at_c = e.map([&](const Scalar& s) { return s.substitute(kFluxSymbol, Scalar(c)); });
    if (!at_c.is_zero()) {
      const auto v = zero_verdict(at_c, product_assumptions(p, "l"), 0);
      throw SugraError("c = " + to_string(c) + " leaves the Einstein residual " + v.value.to_string() + " at " +
                       index_label(p, v.index));
    }
    return {c, e.unflatten(f), p2, p1, p0};
  }
  throw SugraError("the Einstein residual does not depend on the flux coefficient");
}

SupergravityConfig build_solution(const EpsilonContactStructure& n, const EpsilonContactStructure& x,
                                  const Scalar& lambda, std::optional<Rational> c, Exec exec) {
  const Classification cn = classify(n, exec), cx = classify(x, exec);
  if (!cn.ok()) throw SugraError("the Lorentzian factor is not eta-Einstein: " + cn.failure->reason);
  if (!cx.ok()) throw SugraError("the Riemannian factor is not eta-Einstein: " + cx.failure->reason);
  const Assumptions joint = n.assumptions().merged(x.assumptions());
  const PairCompatibility pc = compatible_pair(*cn.certificate, *cx.certificate, joint, n.seed());
  if (!pc.compatible) throw SugraError("incompatible factors: " + pc.failed);
  if (!(lambda * lambda - cn.certificate->lambda2).is_zero())
    throw SugraError("lambda^2 = " + (lambda * lambda).to_string() + " differs from the certified " +
                     cn.certificate->lambda2.to_string());
  const Rational coeff = c ? *c : calibrate_flux(n, x, lambda, exec).c;
  const ManifoldPtr p = product_manifold(n.manifold(), x.manifold());
  const FluxTerms t = flux_terms(p, n, x);
  SupergravityConfig cfg{p,
                         TensorField::metric(p),
                         flux(t, lambda, Scalar::param("l"), Scalar(coeff)),
                         lambda,
                         "l",
                         pc.l2,
                         coeff,
                         product_assumptions(p, "l"),
                         n,
                         x,
                         t};
  return cfg;
}

bool EomReport::all_zero() const {
  for (const auto* c : checks())
    if (c->verdict.verdict != ZeroVerdict::Zero) return false;
  return norm_contraction_verdict.verdict == ZeroVerdict::Zero;
}

EomReport verify_eom(const SupergravityConfig& cfg, Exec exec) {
  const auto& p = cfg.manifold;
  const auto& a = cfg.assumptions;
  const TensorField ric = ricci_of(levi_civita(p, exec), exec).ricci;
  auto make = [&](const std::string& name, const TensorField& residual) {
    const TensorField r = cfg.reduce(residual);
    return EomCheck{name, zero_verdict(r, a, 0), r};
  };
  const TensorField star = hodge(cfg.h, exec);
  std::vector<int> top(static_cast<std::size_t>(p->dim()));
  for (int i = 0; i < p->dim(); ++i) top[static_cast<std::size_t>(i)] = i;
  const Scalar norm_hodge = cfg.reduce(wedge(cfg.h, star).at(top) * p->volume_factor().inverse());
  const Scalar norm_contraction = cfg.reduce(form_inner(cfg.h, cfg.h));
  EomReport r{make("Ric = 1/4 H o H", ric - Scalar(Rational(1, 4)) * circ(cfg.h, cfg.h)),
              make("dH = 0", ext_d(cfg.h, exec)),
              make("d*H = 0", ext_d(star, exec)),
              make("|H|^2 = 0", TensorField::function(p, norm_hodge)),
              norm_hodge,
              norm_contraction,
              zero_verdict(TensorField::function(p, norm_contraction), a, 0)};
  return r;
}

bool TorsionReport::flat() const {
  return ricci.verdict == ZeroVerdict::Zero && antisymmetric.verdict == ZeroVerdict::Zero &&
         isotropic == ZeroVerdict::Zero && closed == ZeroVerdict::Zero && coclosed == ZeroVerdict::Zero;
}

TorsionReport torsion_ricci_flat(const SupergravityConfig& cfg, const EomReport& eom, Exec exec) {
  const Connection c = with_skew_torsion(cfg.manifold, cfg.h, exec);
  const TensorField ric = cfg.reduce(ricci_of(c, exec).ricci);
  return {zero_verdict(ric, cfg.assumptions, 0), zero_verdict(antisymmetric_part(ric), cfg.assumptions, 0),
          eom.isotropic.verdict.verdict, eom.closed.verdict.verdict, eom.coclosed.verdict.verdict};
}

TensorField star_block_residual(const SupergravityConfig& cfg) {
  if (!cfg.terms || !cfg.n || !cfg.x) throw SugraError("the configuration has no product structure");
  const auto& p = cfg.manifold;
  const auto& n = *cfg.n;
  const auto& x = *cfg.x;
  const Scalar cl = Scalar(cfg.c) * Scalar::param(cfg.l_symbol);
  const TensorField expected = -cfg.lambda * cfg.terms->vol_x + cl * cfg.terms->an_star_ax +
                               cl * wedge(promote(hodge(n.alpha()), p), promote(x.alpha(), p)) -
                               cfg.lambda * cfg.terms->vol_n;
  return cfg.reduce(hodge(cfg.h) - expected);
}

AlternateBookkeeping alternate_bookkeeping(const SupergravityConfig& cfg) {
  if (!cfg.terms || !cfg.n || !cfg.x) throw SugraError("the configuration has no product structure");
  const auto& p = cfg.manifold;
  const auto& n = *cfg.n;
  const auto& x = *cfg.x;
  const TensorField an = promote(n.alpha(), p), ax = promote(x.alpha(), p);
  const TensorField t = wedge_multinomial(an, promote(hodge(x.alpha()), p));
  const TensorField tt = circ(t, t);
  const TensorField aa = tensor_product(an, an);
  const int dn = n.manifold()->dim();
  std::optional<Scalar> factor;
  for (int i = 0; i < dn && !factor; ++i)
    for (int j = 0; j < dn && !factor; ++j)
      if (!aa.at({i, j}).is_zero()) factor = tt.at({i, j}) * aa.at({i, j}).inverse();
  if (!factor) throw SugraError("alpha_N vanishes");
  for (int i = 0; i < dn; ++i)
    for (int j = 0; j < dn; ++j)
      if (!(tt.at({i, j}) - *factor * aa.at({i, j})).is_zero())
        throw SugraError("the alternate contraction is not proportional to alpha_N (x) alpha_N");

  const Scalar l3 = Scalar(Rational(1, 3)) * Scalar::param(cfg.l_symbol);
  const TensorField h = cfg.lambda * cfg.terms->vol_n + l3 * wedge_multinomial(promote(hodge(n.alpha()), p), ax) +
                        l3 * wedge_multinomial(an, promote(hodge(x.alpha()), p)) + cfg.lambda * cfg.terms->vol_x;
  return {*factor, h == cfg.h};
}

}  // namespace epc
