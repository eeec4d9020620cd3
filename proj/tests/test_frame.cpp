#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "epscontact/eta_einstein.hpp"
#include "epscontact/expr.hpp"
#include "support/oracles.hpp"

using namespace epc;
using namespace epc::oracle;

namespace {

TensorField random_form(const ManifoldPtr& m, int p, std::mt19937_64& rng, const std::vector<Scalar>& pool) {
  TensorField w(m, 0, p, true);
  if (p == 0) return TensorField::function(m, pool[rng() % pool.size()]);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (const auto& I : increasing(m->dim(), p)) {
    Scalar c = Scalar(static_cast<long>(coef(rng))) * pool[rng() % pool.size()];
    w = w + c * basis_p_form(m, I);
  }
  return w;
}

// Total antisymmetrization oracle: (w ^ v)(X_1..X_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) w(X_sigma..) v(X_sigma..).
TensorField wedge_oracle(const TensorField& w, const TensorField& v) {
  const int p = w.down(), q = v.down(), n = w.dim(), k = p + q;
  TensorField out(w.host(), 0, k, true);
  Rational norm = 1;
  for (int i = 2; i <= p; ++i) norm *= i;
  for (int i = 2; i <= q; ++i) norm *= i;
  for (std::size_t f = 0; f < ipow(n, k); ++f) {
    const auto idx = digits(f, n, k);
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    Scalar sum;
    do {
      std::vector<int> a, b;
      for (int i = 0; i < p; ++i) a.push_back(idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      for (int i = p; i < k; ++i) b.push_back(idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
      const Scalar wa = p == 0 ? w[0] : w.at(a);
      const Scalar vb = q == 0 ? v[0] : v.at(b);
      sum += Scalar(static_cast<long>(perm_sign(perm))) * wa * vb;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[f] = Scalar(1 / norm) * sum;
  }
  return out;
}

SymbolTable table() {
  SymbolTable s;
  s.params = {"lam", "a"};
  s.vars = {"t", "x", "y"};
  s.funcs = {"q"};
  return s;
}

}  // namespace

TEST(Wedge, ConventionAnchor) {
  const auto m = flat({1, 1, 1});
  const auto w = wedge(TensorField::basis_form(m, 0), TensorField::basis_form(m, 1));
  EXPECT_EQ(w.at({0, 1}), Scalar(1L));
  EXPECT_EQ(w.at({1, 0}), Scalar(-1L));
  EXPECT_TRUE(w.at({0, 0}).is_zero());
}

TEST(Wedge, MatchesAntisymmetrizationOracle) {
  std::mt19937_64 rng(7);
  const auto cat = catalog("r3-null").structure.manifold();
  const std::vector<Scalar> pool{Scalar(1L), parse_scalar("exp(y)*q(t-x)", table()), parse_scalar("x^2 - t", table())};
  // (dt - dx) ^ dy against the oracle
  const auto a = TensorField::basis_form(cat, 0) - TensorField::basis_form(cat, 1);
  EXPECT_EQ(wedge(a, TensorField::basis_form(cat, 2)),
            wedge_oracle(a, TensorField::basis_form(cat, 2)));
  for (const auto& m : {cat, flat({1, 1, 1, 1})}) {
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; p + q <= m->dim() && q <= 2; ++q)
        for (int trial = 0; trial < 3; ++trial) {
          const auto w = random_form(m, p, rng, m == cat ? pool : std::vector<Scalar>{Scalar(1L)});
          const auto v = random_form(m, q, rng, m == cat ? pool : std::vector<Scalar>{Scalar(1L)});
          EXPECT_EQ(wedge(w, v), wedge_oracle(w, v)) << p << "," << q;
          const Scalar graded((p * q) % 2 ? -1L : 1L);
          EXPECT_EQ(wedge(w, v), graded * wedge(v, w));
        }
  }
}

TEST(Hodge, MatchesBruteForceOracle) {
  for (const auto& m : hodge_manifolds())
    for (int p = 0; p <= m->dim(); ++p)
      for (const auto& I : increasing(m->dim(), p)) {
        const auto w = basis_p_form(m, I);
        EXPECT_EQ(hodge(w), hodge_oracle(w)) << "dim " << m->dim() << " p " << p;
        EXPECT_EQ(hodge(w, Exec::Parallel), hodge(w));
      }
}

TEST(Hodge, DoubleStarSignLaw) {
  // ** = s_g (-1)^{p(n-p)} on p-forms
  for (const auto& m : hodge_manifolds()) {
    const int n = m->dim();
    for (int p = 0; p <= n; ++p)
      for (const auto& I : increasing(n, p)) {
        const auto w = basis_p_form(m, I);
        const long sign = m->signature() * ((p * (n - p)) % 2 ? -1 : 1);
        EXPECT_EQ(hodge(hodge(w)), Scalar(sign) * w) << "dim " << n << " p " << p << " sig " << m->signature();
      }
  }
}

TEST(Hodge, IsometryAndVolume) {
  std::mt19937_64 rng(11);
  for (const auto& m : hodge_manifolds()) {
    const int n = m->dim();
    const Scalar s(static_cast<long>(m->signature()));
    for (int p = 0; p <= n; ++p) {
      const auto w = random_form(m, p, rng, {Scalar(1L)});
      const auto v = random_form(m, p, rng, {Scalar(1L)});
      EXPECT_EQ(form_inner(hodge(w), hodge(v)), s * form_inner(w, v));
      // w ^ *v = <w, v> nu
      EXPECT_EQ(wedge(w, hodge(v)), form_inner(w, v) * TensorField::volume(m));
    }
  }
}

TEST(ExteriorDerivative, SquaresToZero) {
  std::mt19937_64 rng(3);
  std::vector<ManifoldPtr> ms;
  for (const auto& name : catalog_names()) ms.push_back(catalog(name).structure.manifold());
  const std::vector<Scalar> pool{Scalar(1L), parse_scalar("exp(y)*q(t-x)", table()), parse_scalar("t*x - y^2", table()),
                                 parse_scalar("q'(x+y)*exp(2*t)", table())};
  for (const auto& m : ms)
    for (int p = 0; p <= 1; ++p)
      for (int trial = 0; trial < 3; ++trial) {
        const auto w = random_form(m, p, rng, m->has_coordinates() ? pool : std::vector<Scalar>{Scalar(1L), Scalar::param("lam")});
        EXPECT_TRUE(ext_d(ext_d(w)).is_zero()) << m->name();
        EXPECT_EQ(ext_d(w, Exec::Parallel), ext_d(w));
      }
}

TEST(ExteriorDerivative, InvariantFormulaOnOneForms) {
  // d alpha(X, Y) = X alpha(Y) - Y alpha(X) - alpha([X, Y])
  std::mt19937_64 rng(5);
  for (const auto& name : catalog_names()) {
    const auto m = catalog(name).structure.manifold();
    const auto alpha = catalog(name).structure.alpha();
    const auto da = ext_d(alpha);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto X = TensorField::basis_vector(m, i), Y = TensorField::basis_vector(m, j);
        const Scalar ay = alpha[static_cast<std::size_t>(j)], ax = alpha[static_cast<std::size_t>(i)];
        Scalar abr;
        const auto br = lie_bracket(X, Y);
        for (int k = 0; k < 3; ++k) abr += alpha[static_cast<std::size_t>(k)] * br[static_cast<std::size_t>(k)];
        EXPECT_EQ(da.at({i, j}), directional(X, ay) - directional(Y, ax) - abr) << name;
      }
  }
}

TEST(LieDerivative, CartanFormula) {
  std::mt19937_64 rng(9);
  for (const auto& name : catalog_names()) {
    const auto& s = catalog(name).structure;
    const auto& m = s.manifold();
    for (int p = 1; p <= 2; ++p) {
      const auto w = random_form(m, p, rng, {Scalar(1L)});
      EXPECT_EQ(lie_derivative(s.xi(), w), ext_d(interior(s.xi(), w)) + interior(s.xi(), ext_d(w))) << name;
    }
    // L_X Y = [X, Y]
    const auto Y = TensorField::basis_vector(m, 2);
    EXPECT_EQ(lie_derivative(s.xi(), Y), lie_bracket(s.xi(), Y));
    EXPECT_EQ(lie_derivative(s.xi(), s.phi(), Exec::Parallel), s.h());
  }
}

TEST(Interior, LeibnizRule) {
  std::mt19937_64 rng(13);
  const auto m = flat({-1, 1, 4, 1});
  const auto X = TensorField::vector(m, {Scalar(1L), Scalar(2L), Scalar(-1L), Scalar(3L)});
  for (int p = 1; p <= 2; ++p)
    for (int q = 1; q <= 2; ++q) {
      const auto w = random_form(m, p, rng, {Scalar(1L)});
      const auto v = random_form(m, q, rng, {Scalar(1L)});
      const Scalar sign(p % 2 ? -1L : 1L);
      EXPECT_EQ(interior(X, wedge(w, v)), wedge(interior(X, w), v) + sign * wedge(w, interior(X, v)));
    }
}

TEST(Manifold, Validation) {
  FrameManifold::Data d;
  d.name = "bad";
  d.labels = {"a", "b"};
  d.structure.assign(8, Scalar());
  d.metric = {Scalar(1L), Scalar(), Scalar(), Scalar(1L)};
  d.signature = -1;
  EXPECT_THROW(FrameManifold::make(d), GeometryError);
  d.signature = 1;
  d.metric = {Scalar(1L), Scalar(2L), Scalar(), Scalar(1L)};
  EXPECT_THROW(FrameManifold::make(d), GeometryError);
  d.metric = {Scalar(1L), Scalar(), Scalar(), Scalar(1L)};
  d.structure[1] = Scalar(1L);  // c^0_01 without its antisymmetric partner
  EXPECT_THROW(FrameManifold::make(d), GeometryError);
}

TEST(Products, BlockStructure) {
  const auto lor = catalog("sl2-lor").structure.manifold();
  const auto su2_entry = catalog("su2");
  const auto su2 = su2_entry.structure.manifold();
  const auto p = product_manifold(lor, su2);
  EXPECT_EQ(p->dim(), 6);
  EXPECT_EQ(p->signature(), -1);
  EXPECT_EQ(p->orientation(), lor->orientation() * su2->orientation());
  // nu = nu_N ^ nu_X
  EXPECT_EQ(TensorField::volume(p), wedge(promote(TensorField::volume(lor), p), promote(TensorField::volume(su2), p)));
  EXPECT_THROW(product_manifold(su2, lor), GeometryError);
  const auto a = su2_entry.structure.alpha();
  EXPECT_EQ(ext_d(promote(a, p)), promote(ext_d(a), p));
}
