// Runs each acceptance criterion at its stated tolerance (exact: canonical
// zero) and runtime budget, printing one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "epscontact/expr.hpp"
#include "epscontact/sugra6.hpp"
#include "support/oracles.hpp"

using namespace epc;
using namespace epc::oracle;

namespace {

// Collects failed expectations for one criterion.
struct Ledger {
  std::vector<std::string> failures, notes;
  int checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

Scalar P(const std::string& name) { return Scalar::param(name); }

const std::vector<std::string> kNonNull{"su2", "sl2-lor", "sl2-para", "sl2-null"};

void ricci_reproduction(Ledger& l) {
  for (const auto& name : kNonNull) {
    const auto e = catalog(name);
    const auto ric = ricci_of(levi_civita(e.structure.manifold())).ricci;
    l.expect(e.displayed_ricci.has_value(), name + ": documented Ricci tensor present");
    if (e.displayed_ricci) l.expect((ric - *e.displayed_ricci).is_zero(), name + ": Ric - documented = 0");
    const auto c = classify(e.structure);
    l.expect(c.ok(), name + ": classify returns a certificate");
    if (!c.ok()) continue;
    l.expect(c.certificate->residual.is_zero(), name + ": certificate residual = 0");
    l.expect(cont_space_membership(*c.certificate, *e.expected), name + ": certificate matches documented space");
  }
}

void contact_verification(Ledger& l) {
  for (const auto& name : catalog_names()) {
    const Manifest m = parse_manifest(catalog_source(name));
    const BuiltManifest b = build_manifest(m);
    const auto v = verify_epsilon_contact(b.manifold, b.alpha, 0, b.auto_orientation);
    l.expect(v.ok(), name + ": alpha = *d alpha and |alpha|^2 = eps");
    if (!v.ok()) continue;
    const auto& s = *v.structure;
    for (const auto& rep : {structure_tensor_report(s), derived_tensor_report(s), structure_invariants(s)})
      for (const auto& c : rep.checks)
        l.expect(c.verdict.verdict == ZeroVerdict::Zero && (*c.lhs - *c.rhs).is_zero(), name + ": " + c.name);
  }
}

void null_theory(Ledger& l) {
  const auto sas = catalog("sl2-sasnokc");
  const auto& s = sas.structure;
  l.expect(is_sasaki(s).verdict == ZeroVerdict::Zero, "sasnokc is Sasaki");
  Assumptions nonzero_a;
  nonzero_a.declare("a");
  nonzero_a.add("a != 0");
  const auto kc = is_k_contact(s, nonzero_a);
  l.expect(kc.verdict == ZeroVerdict::NonZero, "sasnokc is not K-contact for a != 0");
  l.expect(kc.witness.index == std::vector<int>{1, 1} && kc.witness.value == Scalar(-2L) * P("a"),
           "witness (L_xi g)(e-, e-) = -2a");
  l.expect(killing_defect(s).at({1, 1}) == Scalar(-2L) * P("a"), "(L_xi g)(e-, e-) = -2a exactly");
  const auto at_zero = substitute(s, "a", Scalar(0L));
  l.expect(at_zero.ok() && is_k_contact(*at_zero.structure).verdict == ZeroVerdict::Zero, "a = 0 is K-contact");

  const auto r3 = catalog("r3-null");
  const auto& m = r3.structure;
  l.expect(m.h() == -tensor_product(m.xi(), m.alpha()), "r3: h = -xi (x) alpha");
  const ExtendedJ j = extend_j(m);
  l.expect(zero_verdict(nijenhuis(j.manifold, j.j), m.assumptions(), 0).verdict == ZeroVerdict::NonZero,
           "r3: N_J != 0");
  l.expect(is_sasaki(m).verdict == ZeroVerdict::NonZero, "r3: not Sasaki");
  l.expect(is_k_contact(m).verdict == ZeroVerdict::NonZero, "r3: not K-contact");

  int null_entries = 0;
  for (const auto& name : catalog_names()) {
    const auto e = catalog(name);
    if (e.structure.epsilon() != 0) continue;
    ++null_entries;
    const auto r = sasaki_iff_integrable_report(e.structure, find_contact_frame(e.structure));
    l.expect(r.agrees, name + ": Sasaki iff J integrable");
  }
  l.expect(null_entries == 3, "three null catalog entries");
}

struct Pair {
  std::string name;
  CatalogEntry n, x;
  Scalar lambda;
};

std::vector<Pair> product_pairs() {
  return {{"lor x riem", catalog("sl2-lor"), catalog("su2"), P("lam")},
          {"para x riem", catalog("sl2-para"), catalog("su2"), P("lam")},
          {"null x riem", catalog("sl2-null"), catalog("su2", {{"lam", Rational(1)}}), Scalar(1L)}};
}

void product_solutions(Ledger& l) {
  for (const auto& p : product_pairs()) {
    const auto cfg = build_solution(p.n.structure, p.x.structure, p.lambda);
    const auto eom = verify_eom(cfg);
    for (const auto* c : eom.checks())
      l.expect(c->verdict.verdict == ZeroVerdict::Zero && c->residual.is_zero(), p.name + ": " + c->name);
    l.expect(eom.norm_contraction.is_zero(), p.name + ": H_abc H^abc = 0");
    const auto tor = torsion_ricci_flat(cfg, eom);
    l.expect(tor.flat(), p.name + ": Ric(nabla^H) = 0");
  }
}

void calibration(Ledger& l) {
  std::optional<Rational> common;
  for (const auto& p : product_pairs()) {
    const auto c = calibrate_flux(p.n.structure, p.x.structure, p.lambda);
    if (!common) common = c.c;
    l.expect(c.c == *common, p.name + ": c = " + to_string(c.c));
    const auto cfg = build_solution(p.n.structure, p.x.structure, p.lambda, c.c + 1);
    const auto eom = verify_eom(cfg);
    l.expect(!eom.einstein.residual.is_zero(), p.name + ": c + 1 leaves a nonzero Einstein residual");
    l.expect(eom.einstein.verdict.verdict != ZeroVerdict::Zero && !eom.einstein.verdict.index.empty(),
             p.name + ": negative control names a witness component");
    if (!eom.einstein.verdict.index.empty())
      l.notes.push_back(p.name + ": c + 1 witness " + index_label(cfg.manifold, eom.einstein.verdict.index) + " = " +
                        eom.einstein.verdict.value.to_string() + " (" + to_string(eom.einstein.verdict.verdict) + ")");
  }
}

void property_suites(Ledger& l) {
  // ** = s (-1)^{p(n-p)} on every basis form
  for (const auto& m : hodge_manifolds()) {
    const int n = m->dim();
    for (int p = 0; p <= n; ++p)
      for (const auto& I : increasing(n, p)) {
        const auto w = basis_p_form(m, I);
        const long sign = m->signature() * ((p * (n - p)) % 2 ? -1 : 1);
        l.expect(hodge(hodge(w)) == Scalar(sign) * w, "** sign law, dim " + std::to_string(n));
        l.expect(hodge(w) == hodge_oracle(w), "* matches oracle, dim " + std::to_string(n));
      }
  }

  SymbolTable sym;
  sym.params = {"lam", "a", "alpha0"};
  sym.vars = {"t", "x", "y"};
  sym.funcs = {"q"};
  std::vector<ManifoldPtr> ms;
  for (const auto& name : catalog_names()) ms.push_back(catalog(name).structure.manifold());
  // d o d = 0
  for (const auto& m : ms) {
    std::vector<Scalar> coeffs{Scalar(1L), P("lam")};
    if (m->has_coordinates())
      coeffs = {parse_scalar("exp(y)*q(t - x)", sym), parse_scalar("t*x - y^2", sym), parse_scalar("q'(x + y)*exp(2*t)", sym)};
    for (const auto& c : coeffs) {
      l.expect(ext_d(ext_d(TensorField::function(m, c))).is_zero(), m->name() + ": dd f = 0");
      for (int i = 0; i < m->dim(); ++i)
        l.expect(ext_d(ext_d(c * TensorField::basis_form(m, i))).is_zero(), m->name() + ": dd(f e^i) = 0");
    }
  }

  auto koszul = ms;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) koszul.push_back(heisenberg(seed));
  koszul.push_back(product_manifold(catalog("sl2-lor").structure.manifold(), catalog("su2").structure.manifold()));
  for (const auto& m : koszul) {
    const Connection lc = levi_civita(m, Exec::Parallel);
    l.expect(torsion(lc).is_zero(), m->name() + ": torsion-free");
    l.expect(metricity_residual(lc).is_zero(), m->name() + ": metric");
  }

  for (const auto& m : ms)
    l.expect(first_bianchi_residual(riemann(levi_civita(m)).riemann).is_zero(), m->name() + ": first Bianchi");

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = heisenberg(seed);
    const Connection lc = levi_civita(m);
    const auto gamma = gamma_linear_solve(m);
    l.expect(gamma.has_value(), m->name() + ": linear solve");
    if (gamma)
      for (std::size_t f = 0; f < gamma->size(); ++f)
        l.expect(lc.gamma[f] == Scalar((*gamma)[f]), m->name() + ": Gamma matches linear solve");
    const auto fast = riemann(lc, Exec::Parallel), serial = riemann(lc, Exec::Serial), ref = riemann_reference(lc);
    l.expect(fast.riemann == ref.riemann && serial.riemann == ref.riemann, m->name() + ": Riemann matches reference");
  }

  // every symbolic-zero verdict, re-evaluated at 10 admissible bindings
  auto evaluate = [&](const TensorField& lhs, const TensorField& rhs, const Assumptions& a, const std::string& what) {
    const auto cmp = compare_at_bindings(lhs, rhs, a, 23, 10);
    l.expect(cmp.used >= 10 && cmp.mismatches == 0, what + " " + cmp.first_mismatch);
  };
  for (const auto& name : catalog_names()) {
    const auto e = catalog(name);
    const auto& s = e.structure;
    for (const auto& rep : {structure_tensor_report(s), derived_tensor_report(s), structure_invariants(s), find_contact_frame(s).pairings})
      for (const auto& c : rep.checks)
        if (c.verdict.verdict == ZeroVerdict::Zero) evaluate(*c.lhs, *c.rhs, s.assumptions(), name + ": " + c.name);
    if (e.displayed_ricci)
      evaluate(ricci_of(levi_civita(s.manifold())).ricci, *e.displayed_ricci, s.assumptions(), name + ": Ricci");
  }
  for (const auto& p : product_pairs()) {
    const auto cfg = build_solution(p.n.structure, p.x.structure, p.lambda);
    const auto eom = verify_eom(cfg);
    for (const auto* c : eom.checks())
      evaluate(c->residual, TensorField(c->residual.host(), c->residual.up(), c->residual.down()), cfg.assumptions,
               p.name + ": " + c->name);
  }
}

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<void(Ledger&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Ricci reproduction on riem, lor, para, null", 5, ricci_reproduction},
      {2, "epsilon-contact verification and identity suites on all six entries", 5, contact_verification},
      {3, "null-contact theory (sasnokc, Minkowski example, Sasaki iff integrable)", 5, null_theory},
      {4, "six-dimensional solutions: four equations and Ric(nabla^H) = 0", 30, product_solutions},
      {5, "flux calibration and negative control", 10, calibration},
      {6, "property suites", 120, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Ledger l;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(l);
    } catch (const std::exception& e) {
      l.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool ok = l.failures.empty() && in_time;
    std::ostringstream line;
    line << "criterion " << c.id << " [PRIMARY] " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  (" << l.checks
         << " exact checks, " << std::fixed << std::setprecision(2) << secs << " s of " << std::setprecision(0) << c.budget_s << " s)";
    std::cout << line.str() << "\n";
    for (const auto& n : l.notes) std::cout << "    " << n << "\n";
    for (const auto& f : l.failures) std::cout << "    failed: " << f << "\n";
    if (!in_time) std::cout << "    over the runtime budget\n";
    failed += ok ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << "\n";
  return failed == 0 ? 0 : 1;
}
