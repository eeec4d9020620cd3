#include "epscontact/curvature.hpp"

namespace epc {

namespace {

std::size_t at3(int n, int k, int i, int j) { return static_cast<std::size_t>((k * n + i) * n + j); }

}  // namespace

Connection levi_civita(const ManifoldPtr& m, Exec exec) {
  const int n = m->dim();
  // Koszul: K_ijk = 2 g(nabla_i e_j, e_k).
  std::vector<Scalar> koszul(static_cast<std::size_t>(n * n * n));
  auto bracket_pair = [&](int i, int j, int k) {
    Scalar s;
    for (int l = 0; l < n; ++l)
      if (!m->c(l, i, j).is_zero()) s += m->c(l, i, j) * m->g(l, k);
    return s;
  };
  parallel_for(koszul.size(), exec, [&](std::size_t f) {
    const int i = static_cast<int>(f) / (n * n), j = (static_cast<int>(f) / n) % n, k = static_cast<int>(f) % n;
    koszul[f] = m->derive(i, m->g(j, k)) + m->derive(j, m->g(i, k)) - m->derive(k, m->g(i, j)) + bracket_pair(i, j, k) -
                bracket_pair(i, k, j) - bracket_pair(j, k, i);
  });
  Connection c{m, std::vector<Scalar>(koszul.size()), std::nullopt};
  const Scalar half(Rational(1, 2));
  parallel_for(koszul.size(), exec, [&](std::size_t f) {
    const int k = static_cast<int>(f) / (n * n), i = (static_cast<int>(f) / n) % n, j = static_cast<int>(f) % n;
    Scalar s;
    for (int l = 0; l < n; ++l)
      if (!m->ginv(k, l).is_zero()) s += m->ginv(k, l) * koszul[at3(n, i, j, l)];
    c.gamma[f] = half * s;
  });
  return c;
}

Connection with_skew_torsion(const ManifoldPtr& m, const TensorField& h, Exec exec) {
  if (h.host() != m || h.up() != 0 || h.down() != 3) throw GeometryError("skew torsion expects a 3-form on the manifold");
  if (auto bad = h.antisymmetry_violation())
    throw GeometryError("torsion is not totally antisymmetric at " + index_label(m, *bad));
  Connection c = levi_civita(m, exec);
  const int n = m->dim();
  const Scalar half(Rational(1, 2));
  parallel_for(c.gamma.size(), exec, [&](std::size_t f) {
    const int k = static_cast<int>(f) / (n * n), i = (static_cast<int>(f) / n) % n, j = static_cast<int>(f) % n;
    Scalar s;
    for (int l = 0; l < n; ++l)
      if (!m->ginv(k, l).is_zero()) s += m->ginv(k, l) * h.at({i, j, l});
    if (!s.is_zero()) c.gamma[f] += half * s;
  });
  c.torsion_form = h;
  return c;
}

TensorField covariant_derivative(const Connection& c, const TensorField& x, const TensorField& y) {
  const int n = c.host->dim();
  TensorField r(c.host, 1, 0);
  for (int k = 0; k < n; ++k) {
    Scalar s = directional(x, y[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n; ++i) {
      if (x[static_cast<std::size_t>(i)].is_zero()) continue;
      for (int j = 0; j < n; ++j)
        if (!y[static_cast<std::size_t>(j)].is_zero() && !c(k, i, j).is_zero())
          s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * c(k, i, j);
    }
    r[static_cast<std::size_t>(k)] = s;
  }
  return r;
}

TensorField covariant_derivative_tensor(const Connection& c, const TensorField& x, const TensorField& t) {
  const int n = c.host->dim();
  // A^a_m = Gamma^a_{X m}.
  std::vector<Scalar> A(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m) {
      Scalar s;
      for (int i = 0; i < n; ++i)
        if (!x[static_cast<std::size_t>(i)].is_zero()) s += x[static_cast<std::size_t>(i)] * c(a, i, m);
      A[static_cast<std::size_t>(a * n + m)] = s;
    }
  TensorField r(t.host(), t.up(), t.down(), t.is_form());
  for (std::size_t f = 0; f < t.size(); ++f) {
    const auto idx = t.unflatten(f);
    Scalar s = directional(x, t[f]);
    for (int slot = 0; slot < t.rank(); ++slot) {
      const bool upper = slot < t.up();
      auto other = idx;
      for (int m = 0; m < n; ++m) {
        const Scalar& coeff = upper ? A[static_cast<std::size_t>(idx[static_cast<std::size_t>(slot)] * n + m)]
                                    : A[static_cast<std::size_t>(m * n + idx[static_cast<std::size_t>(slot)])];
        if (coeff.is_zero()) continue;
        other[static_cast<std::size_t>(slot)] = m;
        const Scalar& v = t.at(other);
        if (v.is_zero()) continue;
        if (upper) s += coeff * v;
        else s -= coeff * v;
      }
    }
    r[f] = std::move(s);
  }
  return r;
}

TensorField torsion(const Connection& c) {
  const int n = c.host->dim();
  TensorField r(c.host, 1, 2);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.at({k, i, j}) = c(k, i, j) - c(k, j, i) - c.host->c(k, i, j);
  return r;
}

TensorField metricity_residual(const Connection& c) {
  const auto& m = *c.host;
  const int n = m.dim();
  TensorField r(c.host, 0, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Scalar s = m.derive(i, m.g(j, k));
        for (int l = 0; l < n; ++l) s -= c(l, i, j) * m.g(l, k) + c(l, i, k) * m.g(j, l);
        r.at({i, j, k}) = s;
      }
  return r;
}

CurvatureData riemann(const Connection& c, Exec exec) {
  const auto& m = *c.host;
  const int n = m.dim();
  TensorField R(c.host, 1, 3);
  const auto pairs = static_cast<std::size_t>(n * n);
  parallel_for(pairs, exec, [&](std::size_t f) {
    const int l = static_cast<int>(f) / n, k = static_cast<int>(f) % n;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Scalar s = m.derive(i, c(l, j, k)) - m.derive(j, c(l, i, k));
        for (int p = 0; p < n; ++p) {
          if (!c(p, j, k).is_zero() && !c(l, i, p).is_zero()) s += c(p, j, k) * c(l, i, p);
          if (!c(p, i, k).is_zero() && !c(l, j, p).is_zero()) s -= c(p, i, k) * c(l, j, p);
          if (!m.c(p, i, j).is_zero() && !c(l, p, k).is_zero()) s -= m.c(p, i, j) * c(l, p, k);
        }
        R.at({l, k, j, i}) = -s;
        R.at({l, k, i, j}) = std::move(s);
      }
  });
  CurvatureData out{R, ricci_from_riemann(R), Scalar()};
  out.scalar = scalar_curvature(out.ricci);
  return out;
}

CurvatureData riemann_reference(const Connection& c) {
  const int n = c.host->dim();
  TensorField R(c.host, 1, 3);
  for (int i = 0; i < n; ++i) {
    const auto ei = TensorField::basis_vector(c.host, i);
    for (int j = 0; j < n; ++j) {
      const auto ej = TensorField::basis_vector(c.host, j);
      const auto bracket = lie_bracket(ei, ej);
      for (int k = 0; k < n; ++k) {
        const auto ek = TensorField::basis_vector(c.host, k);
        const auto v = covariant_derivative(c, ei, covariant_derivative(c, ej, ek)) -
                       covariant_derivative(c, ej, covariant_derivative(c, ei, ek)) -
                       covariant_derivative(c, bracket, ek);
        for (int l = 0; l < n; ++l) R.at({l, k, i, j}) = v[static_cast<std::size_t>(l)];
      }
    }
  }
  CurvatureData out{R, ricci_from_riemann(R), Scalar()};
  out.scalar = scalar_curvature(out.ricci);
  return out;
}

CurvatureData ricci_of(const Connection& c, Exec exec) { return riemann(c, exec); }

TensorField ricci_from_riemann(const TensorField& R) {
  const int n = R.dim();
  TensorField ric(R.host(), 0, 2);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Scalar s;
      for (int i = 0; i < n; ++i) s += R.at({i, k, i, j});
      ric.at({j, k}) = s;
    }
  return ric;
}

Scalar scalar_curvature(const TensorField& ricci) {
  const auto& m = *ricci.host();
  Scalar s;
  for (int j = 0; j < m.dim(); ++j)
    for (int k = 0; k < m.dim(); ++k)
      if (!m.ginv(j, k).is_zero()) s += m.ginv(j, k) * ricci.at({j, k});
  return s;
}

TensorField symmetric_part(const TensorField& t) { return Scalar(Rational(1, 2)) * (t + transpose(t)); }

TensorField antisymmetric_part(const TensorField& t) { return Scalar(Rational(1, 2)) * (t - transpose(t)); }

TensorField first_bianchi_residual(const TensorField& R) {
  const int n = R.dim();
  TensorField r(R.host(), 1, 3);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at({l, k, i, j}) = R.at({l, k, i, j}) + R.at({l, i, j, k}) + R.at({l, j, k, i});
  return r;
}

TensorField second_bianchi_residual(const Connection& c, const TensorField& R) {
  const int n = R.dim();
  std::vector<TensorField> nablaR;
  for (int m = 0; m < n; ++m) nablaR.push_back(covariant_derivative_tensor(c, TensorField::basis_vector(c.host, m), R));
  TensorField r(R.host(), 1, 4);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int m = 0; m < n; ++m)
            r.at({l, k, i, j, m}) = nablaR[static_cast<std::size_t>(m)].at({l, k, i, j}) +
                                     nablaR[static_cast<std::size_t>(i)].at({l, k, j, m}) +
                                     nablaR[static_cast<std::size_t>(j)].at({l, k, m, i});
  return r;
}

}  // namespace epc
