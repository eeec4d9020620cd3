#include <gtest/gtest.h>

#include "epscontact/eta_einstein.hpp"
#include "epscontact/expr.hpp"

using namespace epc;

namespace {

Scalar P(const std::string& name) { return Scalar::param(name); }

void expect_all_pass(const IdentityReport& r, const std::string& entry) {
  for (const auto& c : r.checks)
    EXPECT_EQ(c.verdict.verdict, ZeroVerdict::Zero) << entry << ": " << c.name << " at "
                                                    << c.verdict.value.to_string();
}

}  // namespace

TEST(Catalog, AllEntriesVerify) {
  const std::map<std::string, int> eps{{"su2", 1},       {"sl2-lor", -1},    {"sl2-para", 1},
                                       {"sl2-null", 0},  {"sl2-sasnokc", 0}, {"r3-null", 0}};
  ASSERT_EQ(catalog_names().size(), eps.size());
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    EXPECT_EQ(e.structure.epsilon(), eps.at(name)) << name;
    expect_all_pass(structure_tensor_report(e.structure), name);
    expect_all_pass(derived_tensor_report(e.structure), name);
    expect_all_pass(structure_invariants(e.structure), name);
  }
}

TEST(Catalog, BracketTables) {
  const auto su2 = catalog("su2").structure.manifold();
  // [e2,e3] = e1, [e3,e1] = lam^2 e2, [e1,e2] = lam^2 e3
  EXPECT_EQ(su2->c(0, 1, 2), Scalar(1L));
  EXPECT_EQ(su2->c(1, 2, 0), P("lam").pow(2));
  EXPECT_EQ(su2->c(2, 0, 1), P("lam").pow(2));
  EXPECT_EQ(su2->c(2, 1, 0), -P("lam").pow(2));

  const auto null = catalog("sl2-null").structure.manifold();
  // [e1,e2] = -2 e0 - e2, [e1,e0] = e0, [e2,e0] = e1
  EXPECT_EQ(null->c(0, 1, 2), Scalar(-2L));
  EXPECT_EQ(null->c(2, 1, 2), Scalar(-1L));
  EXPECT_EQ(null->c(0, 1, 0), Scalar(1L));
  EXPECT_EQ(null->c(1, 2, 0), Scalar(1L));
}

TEST(Catalog, SasnokcStructureEquations) {
  // de+ = -a e+^e- - e+^e2, de- = e-^e2, de2 = e+^e- - a e-^e2
  const auto m = catalog("sl2-sasnokc").structure.manifold();
  auto e = [&](int i) { return TensorField::basis_form(m, i); };
  const Scalar a = P("a");
  EXPECT_EQ(ext_d(e(0)), -a * wedge(e(0), e(1)) - wedge(e(0), e(2)));
  EXPECT_EQ(ext_d(e(1)), wedge(e(1), e(2)));
  EXPECT_EQ(ext_d(e(2)), wedge(e(0), e(1)) - a * wedge(e(1), e(2)));
}

TEST(Catalog, ParameterRanges) {
  EXPECT_NO_THROW(catalog("sl2-lor", {{"lam", Rational(1, 2)}}));
  EXPECT_THROW(catalog("sl2-lor", {{"lam", Rational(2)}}), CatalogError);
  EXPECT_THROW(catalog("sl2-para", {{"lam", Rational(1, 2)}}), CatalogError);
  EXPECT_THROW(catalog("sl2-null", {{"alpha0", Rational(0)}}), CatalogError);
  EXPECT_THROW(catalog("su2", {{"mu", Rational(1)}}), CatalogError);
  EXPECT_THROW(catalog("nope"), CatalogError);
}

TEST(Contact, Failures) {
  const auto su2 = catalog("su2").structure.manifold();
  auto zero = verify_epsilon_contact(su2, TensorField(su2, 0, 1, true));
  ASSERT_FALSE(zero.ok());
  EXPECT_EQ(zero.failure->equation, "alpha nowhere zero");

  auto scaled = verify_epsilon_contact(su2, Scalar(2L) * TensorField::basis_form(su2, 0));
  ASSERT_FALSE(scaled.ok());
  EXPECT_EQ(scaled.failure->equation, "|alpha|^2 = eps");

  auto wrong = verify_epsilon_contact(su2, TensorField::basis_form(su2, 1));
  ASSERT_FALSE(wrong.ok());
  EXPECT_EQ(wrong.failure->equation, "alpha = *d alpha");

  // The opposite orientation fails, and auto-orientation recovers it.
  auto flipped = su2->with_orientation(1);
  EXPECT_FALSE(verify_epsilon_contact(flipped, TensorField::basis_form(flipped, 0)).ok());
  auto recovered = verify_epsilon_contact(flipped, TensorField::basis_form(flipped, 0), 0, true);
  ASSERT_TRUE(recovered.ok());
  EXPECT_EQ(recovered.structure->manifold()->orientation(), -1);
  EXPECT_FALSE(recovered.notes.empty());
}

TEST(Contact, NonConstantNorm) {
  const auto r3 = catalog("r3-null").structure.manifold();
  auto v = verify_epsilon_contact(r3, TensorField::one_form(r3, {Scalar::exp(Affine{{{"y", Rational(1)}}, Rational(0)}), Scalar(), Scalar()}));
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.failure->equation, "|alpha|^2 = eps");
}

TEST(Contact, ContactFrames) {
  for (const auto& name : catalog_names()) {
    const auto e = catalog(name);
    const ContactFrame f = find_contact_frame(e.structure);
    expect_all_pass(f.pairings, name + " frame");
  }
  const auto sas = catalog("sl2-sasnokc");
  const ContactFrame f = find_contact_frame(sas.structure);
  EXPECT_EQ(f.u, TensorField::basis_vector(sas.structure.manifold(), 1));
}

TEST(Null, Sasnokc) {
  const auto e = catalog("sl2-sasnokc");
  const auto& s = e.structure;
  EXPECT_EQ(s.xi(), TensorField::basis_vector(s.manifold(), 0));
  EXPECT_EQ(is_sasaki(s).verdict, ZeroVerdict::Zero);

  Assumptions nonzero_a;
  nonzero_a.declare("a");
  nonzero_a.add("a != 0");
  const PredicateResult kc = is_k_contact(s, nonzero_a);
  ASSERT_EQ(kc.verdict, ZeroVerdict::NonZero);
  EXPECT_EQ(kc.witness.index, (std::vector<int>{1, 1}));
  EXPECT_EQ(kc.witness.value, Scalar(-2L) * P("a"));
  // Without a != 0 the family contains the K-contact member a = 0.
  EXPECT_EQ(is_k_contact(s).verdict, ZeroVerdict::Unknown);

  const auto flat = substitute(s, "a", Scalar(0L));
  ASSERT_TRUE(flat.ok());
  EXPECT_EQ(is_k_contact(*flat.structure).verdict, ZeroVerdict::Zero);
  EXPECT_EQ(is_sasaki(*flat.structure).verdict, ZeroVerdict::Zero);

  const ContactFrame f = find_contact_frame(s);
  EXPECT_EQ(saskc_criterion(s, f), P("a"));
  const auto r = sasaki_iff_integrable_report(s, f);
  EXPECT_EQ(r.integrable, ZeroVerdict::Zero);
  EXPECT_TRUE(r.agrees);
}

TEST(Null, MinkowskiExample) {
  const auto e = catalog("r3-null");
  const auto& s = e.structure;
  const Scalar mu = null_mu(s);
  EXPECT_EQ(mu, Scalar(-1L));
  EXPECT_EQ(s.h(), -tensor_product(s.xi(), s.alpha()));
  EXPECT_EQ(is_sasaki(s).verdict, ZeroVerdict::NonZero);
  EXPECT_EQ(is_k_contact(s).verdict, ZeroVerdict::NonZero);

  const ExtendedJ j = extend_j(s);
  EXPECT_TRUE(j.j_squared.is_zero());
  const auto N = zero_verdict(nijenhuis(j.manifold, j.j), s.assumptions(), 0);
  EXPECT_EQ(N.verdict, ZeroVerdict::NonZero);

  const ContactFrame f = find_contact_frame(s);
  const auto r = sasaki_iff_integrable_report(s, f);
  EXPECT_EQ(r.integrable, ZeroVerdict::NonZero);
  EXPECT_EQ(r.zero_deformable.verdict, ZeroVerdict::Zero);
  EXPECT_EQ(r.zero_deformable.rank_j.rank, 2);
  EXPECT_EQ(r.zero_deformable.rank_j2.rank, 0);
  EXPECT_TRUE(r.agrees);

  // J in the frame (xi, u, phi u, d_tau).
  const auto mat = j_matrix_in_frame(j, s, f);
  const std::vector<long> expected{0, 0, -1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(mat[i], Scalar(expected[i])) << i;
}

TEST(Null, SasakiIffIntegrableOnAllNullEntries) {
  for (const auto& name : catalog_names()) {
    const auto e = catalog(name);
    if (e.structure.epsilon() != 0) {
      EXPECT_THROW(extend_j(e.structure), NullStructureError);
      continue;
    }
    const auto f = find_contact_frame(e.structure);
    const auto r = sasaki_iff_integrable_report(e.structure, f);
    EXPECT_TRUE(r.agrees) << name << " integrable " << to_string(r.integrable) << " sasaki "
                          << to_string(r.sasaki.verdict);
    EXPECT_TRUE(extend_j(e.structure).j_squared.is_zero()) << name;
  }
}

TEST(Null, MuOfSl2Null) {
  const auto e = catalog("sl2-null");
  EXPECT_NO_THROW(null_mu(e.structure));
  EXPECT_THROW(null_mu(catalog("su2").structure), NullStructureError);
}
