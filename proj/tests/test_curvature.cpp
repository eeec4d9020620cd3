#include <gtest/gtest.h>

#include <random>

#include "epscontact/eta_einstein.hpp"
#include "epscontact/expr.hpp"
#include "support/oracles.hpp"

using namespace epc;
using namespace epc::oracle;

namespace {

Scalar P(const std::string& name) { return Scalar::param(name); }

std::vector<ManifoldPtr> catalog_manifolds() {
  std::vector<ManifoldPtr> ms;
  for (const auto& name : catalog_names()) ms.push_back(catalog(name).structure.manifold());
  return ms;
}

}  // namespace

TEST(LeviCivita, HeisenbergLinearSolveOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = heisenberg(seed);
    const Connection lc = levi_civita(m);
    const auto oracle = gamma_linear_solve(m);
    ASSERT_TRUE(oracle.has_value()) << "the Levi-Civita system must be uniquely solvable";
    for (std::size_t f = 0; f < oracle->size(); ++f) EXPECT_EQ(lc.gamma[f], Scalar((*oracle)[f])) << m->name() << " " << f;
  }
}

TEST(LeviCivita, KoszulResidualsVanish) {
  auto ms = catalog_manifolds();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) ms.push_back(heisenberg(seed));
  ms.push_back(product_manifold(catalog("sl2-lor").structure.manifold(), catalog("su2").structure.manifold()));
  for (const auto& m : ms) {
    const Connection lc = levi_civita(m, Exec::Parallel);
    EXPECT_TRUE(torsion(lc).is_zero()) << m->name();
    EXPECT_TRUE(metricity_residual(lc).is_zero()) << m->name();
  }
}

TEST(Riemann, OracleEquivalenceOnHeisenbergMetrics) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = heisenberg(seed);
    const Connection lc = levi_civita(m);
    const auto fast = riemann(lc, Exec::Parallel);
    const auto ref = riemann_reference(lc);
    EXPECT_EQ(fast.riemann, ref.riemann) << m->name();
    EXPECT_EQ(fast.ricci, ref.ricci);
    EXPECT_EQ(fast.scalar, ref.scalar);
    EXPECT_EQ(riemann(lc, Exec::Serial).riemann, fast.riemann);
  }
}

TEST(Riemann, OracleEquivalenceOnCatalog) {
  for (const auto& m : catalog_manifolds()) {
    const Connection lc = levi_civita(m);
    EXPECT_EQ(riemann(lc).riemann, riemann_reference(lc).riemann) << m->name();
  }
}

TEST(Riemann, BianchiIdentities) {
  auto ms = catalog_manifolds();
  for (std::uint64_t seed = 1; seed <= 2; ++seed) ms.push_back(heisenberg(seed));
  for (const auto& m : ms) {
    const Connection lc = levi_civita(m);
    const auto R = riemann(lc);
    EXPECT_TRUE(first_bianchi_residual(R.riemann).is_zero()) << m->name();
    EXPECT_TRUE(second_bianchi_residual(lc, R.riemann).is_zero()) << m->name();
    EXPECT_TRUE(antisymmetric_part(R.ricci).is_zero()) << m->name();
    // R_lkij = -R_lkji and pair symmetry after lowering
    EXPECT_EQ(R.scalar, scalar_curvature(R.ricci));
  }
}

TEST(Riemann, MinkowskiIsFlat) {
  const auto m = catalog("r3-null").structure.manifold();
  EXPECT_TRUE(riemann(levi_civita(m)).riemann.is_zero());
}

TEST(Classify, RicciReproduction) {
  for (const std::string name : {"su2", "sl2-lor", "sl2-para", "sl2-null"}) {
    const auto e = catalog(name);
    const auto ric = ricci_of(levi_civita(e.structure.manifold())).ricci;
    ASSERT_TRUE(e.displayed_ricci.has_value());
    EXPECT_EQ(ric, *e.displayed_ricci) << name;
    const auto cmp = compare_at_bindings(ric, *e.displayed_ricci, e.structure.assumptions(), 17);
    EXPECT_GE(cmp.used, 10) << name;
    EXPECT_EQ(cmp.mismatches, 0) << name << ": " << cmp.first_mismatch;
    const auto c = classify(e.structure);
    ASSERT_TRUE(c.ok()) << name;
    EXPECT_TRUE(c.certificate->residual.is_zero());
    EXPECT_TRUE(cont_space_membership(*c.certificate, *e.expected));
  }
}

TEST(Classify, Certificates) {
  const Scalar lam2 = P("lam").pow(2);
  const auto riem = classify(catalog("su2").structure);
  ASSERT_TRUE(riem.ok());
  EXPECT_EQ(riem.certificate->epsilon, 1);
  EXPECT_EQ(riem.certificate->lambda2, lam2);
  EXPECT_EQ(riem.certificate->kappa, lam2 - 1);

  const auto null = classify(catalog("sl2-null").structure);
  ASSERT_TRUE(null.ok());
  EXPECT_EQ(null.certificate->epsilon, 0);
  EXPECT_EQ(null.certificate->lambda2, Scalar(1L));
  EXPECT_EQ(null.certificate->kappa, P("alpha0").pow(-2));

  // Round case: Einstein with kappa = 0.
  const auto round = catalog("su2", {{"lam", Rational(1)}});
  const auto rc = classify(round.structure);
  ASSERT_TRUE(rc.ok());
  EXPECT_TRUE(rc.certificate->kappa.is_zero());
  const auto ric = ricci_of(levi_civita(round.structure.manifold())).ricci;
  EXPECT_EQ(ric, Scalar(Rational(1, 2)) * TensorField::metric(round.structure.manifold()));

  const auto lor = classify(catalog("sl2-lor").structure);
  const auto para = classify(catalog("sl2-para").structure);
  EXPECT_TRUE(cont_space_membership(*lor.certificate, {-1, -1, lam2, 1 - lam2}));
  EXPECT_TRUE(cont_space_membership(*para.certificate, {-1, 1, lam2, lam2 - 1}));
  EXPECT_FALSE(cont_space_membership(*riem.certificate, {-1, 1, lam2, lam2 - 1}));
}

TEST(Classify, ScalarCurvatureMatchesCertificate) {
  for (const std::string name : {"su2", "sl2-lor", "sl2-para", "sl2-null"}) {
    const auto e = catalog(name);
    const auto c = classify(e.structure);
    const Scalar sg(static_cast<long>(c.certificate->signature));
    const Scalar eps(static_cast<long>(c.certificate->epsilon));
    const Scalar expected =
        sg * (Scalar(Rational(3, 2)) * c.certificate->lambda2 + Scalar(Rational(1, 2)) * c.certificate->kappa * eps);
    EXPECT_EQ(ricci_of(levi_civita(e.structure.manifold())).scalar, expected) << name;
  }
}

TEST(Classify, NotEtaEinstein) {
  // sasnokc: the residual vanishes only at a = 0, which is admissible
  const auto c = classify(catalog("sl2-sasnokc").structure);
  ASSERT_FALSE(c.ok());
  EXPECT_FALSE(c.failure->reason.empty());
  EXPECT_EQ(c.failure->witness.verdict, ZeroVerdict::Unknown);
  const auto c1 = classify(catalog("sl2-sasnokc", {{"a", Rational(1)}}).structure);
  ASSERT_FALSE(c1.ok());
  EXPECT_EQ(c1.failure->witness.verdict, ZeroVerdict::NonZero);
  // Minkowski space is flat: eta-Einstein with lambda^2 = kappa = 0.
  const auto flat = classify(catalog("r3-null").structure);
  ASSERT_TRUE(flat.ok());
  EXPECT_TRUE(flat.certificate->lambda2.is_zero());
  EXPECT_TRUE(flat.certificate->kappa.is_zero());
}

TEST(Classify, CompatiblePairs) {
  const auto riem = classify(catalog("su2").structure).certificate.value();
  const auto lor = classify(catalog("sl2-lor").structure).certificate.value();
  const auto para = classify(catalog("sl2-para").structure).certificate.value();
  const auto null = classify(catalog("sl2-null").structure).certificate.value();
  const auto round = classify(catalog("su2", {{"lam", Rational(1)}}).structure).certificate.value();

  Assumptions lor_a = catalog("sl2-lor").structure.assumptions();
  EXPECT_TRUE(compatible_pair(lor, riem, lor_a).compatible);
  EXPECT_TRUE(compatible_pair(para, riem, catalog("sl2-para").structure.assumptions()).compatible);
  const Assumptions null_a = catalog("sl2-null").structure.assumptions();
  EXPECT_TRUE(compatible_pair(null, round, null_a).compatible);
  const auto bad = compatible_pair(null, riem, null_a);
  EXPECT_FALSE(bad.compatible);
  EXPECT_FALSE(bad.failed.empty());
  EXPECT_FALSE(compatible_pair(riem, lor).compatible);
}

TEST(Identities, RandomizedEvaluationOfEveryZeroVerdict) {
  for (const auto& name : catalog_names()) {
    const auto e = catalog(name);
    std::vector<IdentityReport> reports{structure_tensor_report(e.structure), derived_tensor_report(e.structure),
                                        structure_invariants(e.structure), find_contact_frame(e.structure).pairings};
    for (const auto& r : reports)
      for (const auto& c : r.checks) {
        ASSERT_EQ(c.verdict.verdict, ZeroVerdict::Zero) << name << ": " << c.name;
        const auto cmp = compare_at_bindings(*c.lhs, *c.rhs, e.structure.assumptions(), 23);
        EXPECT_GE(cmp.used, 10) << name << ": " << c.name;
        EXPECT_EQ(cmp.mismatches, 0) << name << ": " << c.name << ": " << cmp.first_mismatch;
      }
  }
}
