#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "epscontact/expr.hpp"

namespace epc::oracle {

ManifoldPtr flat(const std::vector<Rational>& diag, const std::vector<Scalar>& metric) {
  const int n = static_cast<int>(diag.empty() ? std::lround(std::sqrt(metric.size())) : diag.size());
  FrameManifold::Data d;
  d.name = "flat";
  for (int i = 0; i < n; ++i) d.labels.push_back("f" + std::to_string(i));
  d.structure.assign(static_cast<std::size_t>(n * n * n), Scalar());
  if (metric.empty()) {
    d.metric.assign(static_cast<std::size_t>(n * n), Scalar());
    for (int i = 0; i < n; ++i) d.metric[static_cast<std::size_t>(i * n + i)] = Scalar(diag[static_cast<std::size_t>(i)]);
  } else {
    d.metric = metric;
  }
  d.signature = 1;
  for (const auto& v : diag)
    if (v < 0) d.signature = -d.signature;
  if (!metric.empty()) d.signature = sgn(determinant(metric, n).as_rational().value()) < 0 ? -1 : 1;
  return FrameManifold::make(std::move(d));
}

std::vector<std::vector<int>> increasing(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> sel(static_cast<std::size_t>(n), 0);
  std::fill(sel.begin(), sel.begin() + k, 1);
  do {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (sel[static_cast<std::size_t>(i)]) idx.push_back(i);
    out.push_back(idx);
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return out;
}

int perm_sign(std::vector<int> p) {
  int s = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
      s = -s;
    }
  return s;
}

int tuple_sign(const std::vector<int>& idx) {
  std::vector<int> order(idx.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return idx[static_cast<std::size_t>(a)] < idx[static_cast<std::size_t>(b)]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (idx[static_cast<std::size_t>(order[i])] == idx[static_cast<std::size_t>(order[i - 1])]) return 0;
  return perm_sign(order);
}

std::vector<int> digits(std::size_t flat, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::size_t ipow(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

TensorField basis_p_form(const ManifoldPtr& m, const std::vector<int>& I) {
  if (I.empty()) return TensorField::function(m, Scalar(1L));
  TensorField w = TensorField::basis_form(m, I[0]);
  for (std::size_t i = 1; i < I.size(); ++i) w = wedge(w, TensorField::basis_form(m, I[i]));
  return w;
}

TensorField hodge_oracle(const TensorField& w) {
  const auto& m = w.host();
  const int n = m->dim(), p = w.down();
  std::vector<Scalar> raised(ipow(n, p));
  std::vector<std::size_t> support;
  for (std::size_t g = 0; g < raised.size(); ++g)
    if (!w[g].is_zero()) support.push_back(g);
  for (std::size_t f = 0; f < raised.size(); ++f) {
    const auto I = digits(f, n, p);
    if (tuple_sign(I) == 0) continue;
    Scalar s;
    for (std::size_t g : support) {
      const auto K = digits(g, n, p);
      Scalar term = w[g];
      for (int i = 0; i < p && !term.is_zero(); ++i)
        term = term * m->ginv(I[static_cast<std::size_t>(i)], K[static_cast<std::size_t>(i)]);
      s += term;
    }
    raised[f] = s;
  }
  Rational fact = 1;
  for (int i = 2; i <= p; ++i) fact *= i;
  TensorField out(m, 0, n - p, true);
  for (std::size_t f = 0; f < ipow(n, n - p); ++f) {
    const auto J = digits(f, n, n - p);
    Scalar s;
    for (std::size_t g = 0; g < raised.size(); ++g) {
      if (raised[g].is_zero()) continue;
      auto IJ = digits(g, n, p);
      IJ.insert(IJ.end(), J.begin(), J.end());
      const int sign = tuple_sign(IJ);
      if (sign != 0) s += Scalar(static_cast<long>(sign)) * raised[g];
    }
    out[f] = Scalar(1 / fact) * m->volume_factor() * s;
  }
  return out;
}

std::vector<ManifoldPtr> hodge_manifolds() {
  const Rational q = Rational(1, 4), nine = 9;
  std::vector<ManifoldPtr> ms;
  ms.push_back(flat({1, 4, q}));
  ms.push_back(flat({-1, 4, 1}));
  ms.push_back(flat({1, 1, nine, q}));
  ms.push_back(flat({-1, 1, 4, q}));
  ms.push_back(flat({1, 4, 1, q, 1, nine}));
  ms.push_back(flat({-q, 1, 4, 1, nine, 1}));
  // hyperbolic block
  std::vector<Scalar> h4(16, Scalar());
  h4[1] = h4[4] = Scalar(1L);
  h4[10] = Scalar(1L);
  h4[15] = Scalar(4L);
  ms.push_back(flat({}, h4));
  return ms;
}

ManifoldPtr heisenberg(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), pos(1, 4);
  Rational L[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) L[i][j] = i == j ? Rational(pos(rng), den(rng)) : Rational(num(rng), den(rng));
  FrameManifold::Data d;
  d.name = "heisenberg-" + std::to_string(seed);
  d.labels = {"x1", "x2", "x3"};
  d.structure.assign(27, Scalar());
  d.structure[(2 * 3 + 0) * 3 + 1] = Scalar(1L);
  d.structure[(2 * 3 + 1) * 3 + 0] = Scalar(-1L);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rational s = 0;
      for (int k = 0; k < 3; ++k) s += L[i][k] * L[j][k];
      d.metric.push_back(Scalar(s));
    }
  return FrameManifold::make(std::move(d));
}

std::optional<std::vector<Rational>> gamma_linear_solve(const ManifoldPtr& m) {
  const int n = m->dim(), N = n * n * n;
  auto var = [&](int k, int i, int j) { return static_cast<std::size_t>((k * n + i) * n + j); };
  const auto col_n = static_cast<std::size_t>(N);
  std::vector<std::vector<Rational>> rows;
  // Gamma^k_ij - Gamma^k_ji = c^k_ij
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::vector<Rational> r(col_n + 1);
        r[var(k, i, j)] += 1;
        r[var(k, j, i)] -= 1;
        r[col_n] = m->c(k, i, j).as_rational().value();
        rows.push_back(r);
      }
  // g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k) = 0
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        std::vector<Rational> r(col_n + 1);
        for (int l = 0; l < n; ++l) {
          r[var(l, i, j)] += m->g(l, k).as_rational().value();
          r[var(l, i, k)] += m->g(j, l).as_rational().value();
        }
        rows.push_back(r);
      }
  const std::size_t R = rows.size();
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < col_n && row < R; ++col) {
    std::size_t p = row;
    while (p < R && rows[p][col] == 0) ++p;
    if (p == R) continue;
    std::swap(rows[p], rows[row]);
    const Rational inv = 1 / rows[row][col];
    for (auto& x : rows[row]) x *= inv;
    for (std::size_t q = 0; q < R; ++q)
      if (q != row && rows[q][col] != 0) {
        const Rational f = rows[q][col];
        for (std::size_t c = 0; c <= col_n; ++c) rows[q][c] -= f * rows[row][c];
      }
    pivots.push_back(col);
    ++row;
  }
  if (pivots.size() != col_n) return std::nullopt;
  std::vector<Rational> out(col_n);
  for (std::size_t r = 0; r < pivots.size(); ++r) out[pivots[r]] = rows[r][col_n];
  return out;
}

namespace {

std::set<std::string> symbols(const TensorField& t, std::set<std::string> (Scalar::*which)() const) {
  std::set<std::string> out;
  for (const auto& c : t.components()) out.merge((c.*which)());
  return out;
}

long exp_denom(const TensorField& t) {
  long d = 1;
  for (const auto& c : t.components()) d = std::lcm(d, exp_denominator(c));
  return d;
}

}  // namespace

BindingComparison compare_at_bindings(const TensorField& lhs, const TensorField& rhs, const Assumptions& a,
                                      std::uint64_t seed, int count) {
  auto params = symbols(lhs, &Scalar::params), vars = symbols(lhs, &Scalar::vars), funcs = symbols(lhs, &Scalar::funcs);
  params.merge(symbols(rhs, &Scalar::params));
  vars.merge(symbols(rhs, &Scalar::vars));
  funcs.merge(symbols(rhs, &Scalar::funcs));
  const long denom = std::lcm(exp_denom(lhs), exp_denom(rhs));
  BindingSampler sampler(a, seed);
  BindingComparison out;
  for (int trial = 0; trial < 4 * count && out.used < count; ++trial) {
    const Binding b = sampler.random(params, vars, funcs, denom);
    std::vector<std::pair<Rational, Rational>> values;
    try {
      for (std::size_t f = 0; f < lhs.size(); ++f)
        values.emplace_back(eval_rational(to_expr(lhs[f]), b), eval_rational(to_expr(rhs[f]), b));
    } catch (const EvalError&) {
      continue;
    }
    ++out.used;
    for (std::size_t f = 0; f < values.size(); ++f)
      if (values[f].first != values[f].second) {
        if (out.mismatches++ == 0)
          out.first_mismatch = "component " + std::to_string(f) + " at " + describe(b) + ": " +
                               to_string(values[f].first) + " vs " + to_string(values[f].second);
      }
  }
  return out;
}

}  // namespace epc::oracle
