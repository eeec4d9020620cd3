#include "epscontact/frame.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace epc {

namespace {

std::size_t ipow(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

int permutation_sign(std::vector<int> v) {
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) return 0;
      if (v[i] > v[j]) sign = -sign;
    }
  return sign;
}

// All increasing k-subsets of {0..n-1}.
std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// Builds a k-form from its values on increasing index tuples.
template <class F>
TensorField form_from_increasing(const ManifoldPtr& host, int k, Exec exec, F&& value) {
  TensorField r(host, 0, k, true);
  const auto subsets = combinations(host->dim(), k);
  std::vector<Scalar> values(subsets.size());
  parallel_for(subsets.size(), exec, [&](std::size_t s) { values[s] = value(subsets[s]); });
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (values[s].is_zero()) continue;
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<int> index(static_cast<std::size_t>(k));
      for (int p = 0; p < k; ++p) index[static_cast<std::size_t>(p)] = subsets[s][static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
      const int sign = permutation_sign(order);
      r.at(index) = sign > 0 ? values[s] : -values[s];
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return r;
}

void require_same_host(const TensorField& a, const TensorField& b) {
  if (a.host() != b.host()) throw GeometryError("tensors live on different manifolds");
}

void require_covariant(const TensorField& t, const char* what) {
  if (t.up() != 0) throw GeometryError(std::string(what) + " expects a covariant tensor");
}

void require_vector(const TensorField& x, const char* what) {
  if (x.up() != 1 || x.down() != 0) throw GeometryError(std::string(what) + " expects a vector field");
}

}  // namespace

// ---------------------------------------------------------------- scalars

std::optional<int> definite_sign(const Scalar& s, const Assumptions& a) {
  if (s.is_zero()) return 0;
  if (!s.is_single_term()) return std::nullopt;
  const auto& [m, c] = *s.terms().begin();
  int sign = c > 0 ? 1 : -1;
  for (const auto& [atom, e] : m.factors) {
    if (e % 2 == 0) {
      if (atom->kind == AtomKind::Param && a.admits(atom->name, 0)) return std::nullopt;
      if (atom->kind != AtomKind::Param) return std::nullopt;
      continue;
    }
    if (atom->kind != AtomKind::Param) return std::nullopt;
    const auto& pc = a.constraint(atom->name);
    const bool positive = pc.lower && (pc.lower->value > 0 || (pc.lower->value == 0 && pc.lower->strict));
    const bool negative = pc.upper && (pc.upper->value < 0 || (pc.upper->value == 0 && pc.upper->strict));
    if (positive) continue;
    if (negative) {
      sign = -sign;
      continue;
    }
    return std::nullopt;
  }
  return sign;
}

Scalar sqrt_abs(const Scalar& s) {
  if (!s.is_single_term()) throw GeometryError("sqrt|det g| needs a single-term determinant, got " + s.to_string());
  const auto& [m, c] = *s.terms().begin();
  const Rational ac = abs(c);
  mpz_class num = ac.get_num(), den = ac.get_den();
  mpz_class rn = sqrt(num), rd = sqrt(den);
  if (rn * rn != num || rd * rd != den)
    throw GeometryError("sqrt|det g| is irrational: |" + s.to_string() + "|");
  Monomial root;
  for (const auto& [atom, e] : m.factors) {
    if (e % 2 != 0) throw GeometryError("sqrt|det g| needs even powers: " + s.to_string());
    if ((e / 2) % 2 != 0 && atom->kind != AtomKind::Recip)
      throw GeometryError("sqrt|det g| has ambiguous sign: " + s.to_string());
    root.factors.emplace_back(atom, e / 2);
  }
  root.exp_arg = m.exp_arg.scaled(Rational(1, 2));
  Scalar::TermMap t;
  t.emplace(root, Rational(rn, rd));
  return Scalar::from_terms(std::move(t));
}

Scalar determinant(const std::vector<Scalar>& m, int n) {
  if (n == 0) return 1;
  if (n == 1) return m[0];
  Scalar det;
  for (int j = 0; j < n; ++j) {
    const Scalar& a = m[static_cast<std::size_t>(j)];
    if (a.is_zero()) continue;
    std::vector<Scalar> minor;
    minor.reserve(static_cast<std::size_t>((n - 1) * (n - 1)));
    for (int r = 1; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (c != j) minor.push_back(m[static_cast<std::size_t>(r * n + c)]);
    Scalar term = a * determinant(minor, n - 1);
    if (j % 2) det -= term;
    else det += term;
  }
  return det;
}

std::vector<Scalar> inverse_matrix(const std::vector<Scalar>& m, int n) {
  const auto N = static_cast<std::size_t>(n);
  std::vector<Scalar> a = m;
  std::vector<Scalar> inv(N * N);
  for (std::size_t i = 0; i < N; ++i) inv[i * N + i] = 1;
  for (std::size_t col = 0; col < N; ++col) {
    // Prefer constant pivots, then single terms.
    std::optional<std::size_t> pivot;
    int best = 3;
    for (std::size_t r = col; r < N; ++r) {
      const Scalar& v = a[r * N + col];
      if (v.is_zero()) continue;
      const int quality = v.is_constant() ? 0 : v.is_single_term() ? 1 : 2;
      if (quality < best) {
        best = quality;
        pivot = r;
      }
    }
    if (!pivot) throw GeometryError("singular matrix");
    if (*pivot != col)
      for (std::size_t c = 0; c < N; ++c) {
        std::swap(a[col * N + c], a[*pivot * N + c]);
        std::swap(inv[col * N + c], inv[*pivot * N + c]);
      }
    const Scalar p = a[col * N + col].inverse();
    for (std::size_t c = 0; c < N; ++c) {
      a[col * N + c] = a[col * N + c] * p;
      inv[col * N + c] = inv[col * N + c] * p;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col || a[r * N + col].is_zero()) continue;
      const Scalar f = a[r * N + col];
      for (std::size_t c = 0; c < N; ++c) {
        if (!a[col * N + c].is_zero()) a[r * N + c] -= f * a[col * N + c];
        if (!inv[col * N + c].is_zero()) inv[r * N + c] -= f * inv[col * N + c];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------- FrameManifold

FrameManifold::FrameManifold(Data d) : d_(std::move(d)), n_(static_cast<int>(d_.labels.size())) {
  const auto N = static_cast<std::size_t>(n_);
  if (n_ == 0) throw GeometryError("manifold needs at least one frame vector");
  if (d_.structure.empty()) d_.structure.assign(N * N * N, Scalar());
  if (d_.structure.size() != N * N * N) throw GeometryError("structure function table has wrong size");
  if (d_.metric.size() != N * N) throw GeometryError("metric has wrong size");
  if (d_.coordinates.empty()) d_.coordinates.assign(N, "");
  if (d_.coordinates.size() != N) throw GeometryError("coordinate list has wrong size");
  if (d_.orientation != 1 && d_.orientation != -1) throw GeometryError("orientation must be +1 or -1");
  if (d_.signature != 1 && d_.signature != -1) throw GeometryError("signature must be +1 or -1");
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (!(c(k, i, j) + c(k, j, i)).is_zero())
          throw GeometryError("structure functions not antisymmetric in [" + d_.labels[static_cast<std::size_t>(i)] + "," +
                              d_.labels[static_cast<std::size_t>(j)] + "]");
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!(g(i, j) == g(j, i))) throw GeometryError("metric is not symmetric");
  det_ = determinant(d_.metric, n_);
  if (det_.is_zero()) throw GeometryError("degenerate metric");
  if (auto s = definite_sign(det_, d_.assumptions)) {
    const int expected = d_.signature == 1 ? 1 : -1;
    if (*s != expected)
      throw GeometryError(std::string("metric determinant sign does not match the ") +
                          (d_.signature == 1 ? "Riemannian" : "Lorentzian") + " signature tag");
  }
  ginv_ = inverse_matrix(d_.metric, n_);
  try {
    volume_ = Scalar(static_cast<long>(d_.orientation)) * sqrt_abs(det_);
  } catch (const GeometryError& e) {
    volume_error_ = e.what();
  }
}

const Scalar& FrameManifold::volume_factor() const {
  if (!volume_error_.empty()) throw GeometryError(volume_error_);
  return volume_;
}

ManifoldPtr FrameManifold::make(Data d) { return std::make_shared<const FrameManifold>(std::move(d)); }

bool FrameManifold::has_coordinates() const {
  return std::any_of(d_.coordinates.begin(), d_.coordinates.end(), [](const std::string& s) { return !s.empty(); });
}

Scalar FrameManifold::derive(int i, const Scalar& f) const {
  const std::string& v = coordinate(i);
  if (v.empty()) return {};
  return f.diff(v);
}

std::optional<std::vector<int>> FrameManifold::jacobi_violation() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          Scalar sum;
          const int cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
          for (const auto& t : cyc) {
            for (int m = 0; m < n_; ++m) sum += c(m, t[0], t[1]) * c(l, m, t[2]);
            sum -= derive(t[2], c(l, t[0], t[1]));
          }
          if (!sum.is_zero()) return std::vector<int>{i, j, k};
        }
  return std::nullopt;
}

ManifoldPtr FrameManifold::with_orientation(int sigma) const {
  Data d = d_;
  d.orientation = sigma;
  return make(std::move(d));
}

// ---------------------------------------------------------------- TensorField

TensorField::TensorField(ManifoldPtr host, int up, int down, bool form)
    : host_(std::move(host)), up_(up), down_(down), form_(form) {
  if (!host_) throw GeometryError("tensor without host manifold");
  if (form_ && up_ != 0) throw GeometryError("forms are covariant");
  if (down_ + up_ > host_->dim() && form_) throw GeometryError("form degree exceeds dimension");
  comps_.assign(ipow(host_->dim(), up_ + down_), Scalar());
}

TensorField::TensorField(ManifoldPtr host, int up, int down, std::vector<Scalar> components, bool form)
    : TensorField(std::move(host), up, down, form) {
  if (components.size() != comps_.size()) throw GeometryError("component count does not match valence");
  comps_ = std::move(components);
  if (form_)
    if (auto bad = antisymmetry_violation())
      throw GeometryError("form components not antisymmetric at " + index_label(host_, *bad));
}

TensorField TensorField::function(ManifoldPtr host, const Scalar& f) {
  TensorField t(std::move(host), 0, 0, true);
  t.comps_[0] = f;
  return t;
}

TensorField TensorField::vector(ManifoldPtr host, std::vector<Scalar> comps) {
  return TensorField(std::move(host), 1, 0, std::move(comps));
}

TensorField TensorField::one_form(ManifoldPtr host, std::vector<Scalar> comps) {
  return TensorField(std::move(host), 0, 1, std::move(comps), true);
}

TensorField TensorField::basis_vector(ManifoldPtr host, int i) {
  TensorField t(std::move(host), 1, 0);
  t.comps_[static_cast<std::size_t>(i)] = 1;
  return t;
}

TensorField TensorField::basis_form(ManifoldPtr host, int i) {
  TensorField t(std::move(host), 0, 1, true);
  t.comps_[static_cast<std::size_t>(i)] = 1;
  return t;
}

TensorField TensorField::identity(ManifoldPtr host) {
  TensorField t(host, 1, 1);
  for (int i = 0; i < host->dim(); ++i) t.at({i, i}) = 1;
  return t;
}

TensorField TensorField::metric(ManifoldPtr host) {
  TensorField t(host, 0, 2);
  for (int i = 0; i < host->dim(); ++i)
    for (int j = 0; j < host->dim(); ++j) t.at({i, j}) = host->g(i, j);
  return t;
}

TensorField TensorField::volume(ManifoldPtr host) {
  const Scalar v = host->volume_factor();
  const int n = host->dim();
  return form_from_increasing(host, n, Exec::Serial, [&](const std::vector<int>&) { return v; });
}

std::size_t TensorField::flatten(const std::vector<int>& index) const {
  if (static_cast<int>(index.size()) != rank()) throw GeometryError("index has wrong length");
  std::size_t f = 0;
  const int n = dim();
  for (int i : index) {
    if (i < 0 || i >= n) throw GeometryError("index out of range");
    f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  return f;
}

std::vector<int> TensorField::unflatten(std::size_t flat) const {
  std::vector<int> index(static_cast<std::size_t>(rank()));
  const auto n = static_cast<std::size_t>(dim());
  for (int k = rank() - 1; k >= 0; --k) {
    index[static_cast<std::size_t>(k)] = static_cast<int>(flat % n);
    flat /= n;
  }
  return index;
}

bool TensorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::optional<std::vector<int>> TensorField::antisymmetry_violation() const {
  if (up_ != 0) return unflatten(0);
  for (std::size_t f = 0; f < comps_.size(); ++f) {
    auto idx = unflatten(f);
    for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
      auto swapped = idx;
      std::swap(swapped[a], swapped[a + 1]);
      if (!(comps_[flatten(swapped)] + comps_[f]).is_zero()) return idx;
    }
  }
  return std::nullopt;
}

TensorField TensorField::as_form() const { return TensorField(host_, up_, down_, comps_, true); }

void TensorField::check_compatible(const TensorField& o) const {
  require_same_host(*this, o);
  if (up_ != o.up_ || down_ != o.down_) throw GeometryError("tensor valences differ");
}

TensorField& TensorField::operator+=(const TensorField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  form_ = form_ && o.form_;
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  form_ = form_ && o.form_;
  return *this;
}

TensorField operator*(const Scalar& s, TensorField t) {
  for (auto& c : t.comps_) c = s * c;
  return t;
}

TensorField TensorField::operator-() const { return Scalar(-1L) * *this; }

bool operator==(const TensorField& a, const TensorField& b) {
  return a.host_ == b.host_ && a.up_ == b.up_ && a.down_ == b.down_ && a.comps_ == b.comps_;
}

std::string TensorField::to_string() const {
  std::ostringstream os;
  bool any = false;
  for (std::size_t f = 0; f < comps_.size(); ++f) {
    if (comps_[f].is_zero()) continue;
    if (any) os << "\n";
    os << index_label(host_, unflatten(f)) << " = " << comps_[f].to_string();
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

std::string index_label(const ManifoldPtr& host, const std::vector<int>& index) {
  std::string out = "(";
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (k) out += ",";
    out += host->labels()[static_cast<std::size_t>(index[k])];
  }
  return out + ")";
}

// ---------------------------------------------------------------- algebra

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  require_same_host(a, b);
  TensorField r(a.host(), a.up() + b.up(), a.down() + b.down());
  for (std::size_t fa = 0; fa < a.size(); ++fa) {
    if (a[fa].is_zero()) continue;
    const auto ia = a.unflatten(fa);
    for (std::size_t fb = 0; fb < b.size(); ++fb) {
      if (b[fb].is_zero()) continue;
      const auto ib = b.unflatten(fb);
      std::vector<int> idx;
      idx.insert(idx.end(), ia.begin(), ia.begin() + a.up());
      idx.insert(idx.end(), ib.begin(), ib.begin() + b.up());
      idx.insert(idx.end(), ia.begin() + a.up(), ia.end());
      idx.insert(idx.end(), ib.begin() + b.up(), ib.end());
      r.at(idx) = a[fa] * b[fb];
    }
  }
  return r;
}

TensorField symmetric_product(const TensorField& a, const TensorField& b) {
  return tensor_product(a, b) + tensor_product(b, a);
}

TensorField apply(const TensorField& endo, const TensorField& x) {
  require_same_host(endo, x);
  require_vector(x, "apply");
  if (endo.up() != 1 || endo.down() != 1) throw GeometryError("apply expects an endomorphism");
  const int n = endo.dim();
  TensorField r(endo.host(), 1, 0);
  for (int a = 0; a < n; ++a) {
    Scalar s;
    for (int b = 0; b < n; ++b)
      if (!x[static_cast<std::size_t>(b)].is_zero()) s += endo.at({a, b}) * x[static_cast<std::size_t>(b)];
    r[static_cast<std::size_t>(a)] = s;
  }
  return r;
}

TensorField compose(const TensorField& a, const TensorField& b) {
  require_same_host(a, b);
  if (a.up() != 1 || a.down() != 1 || b.up() != 1 || b.down() != 1) throw GeometryError("compose expects endomorphisms");
  const int n = a.dim();
  TensorField r(a.host(), 1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Scalar s;
      for (int m = 0; m < n; ++m) {
        const Scalar& am = a.at({i, m});
        if (!am.is_zero()) s += am * b.at({m, j});
      }
      r.at({i, j}) = s;
    }
  return r;
}

Scalar trace(const TensorField& endo) {
  if (endo.up() != 1 || endo.down() != 1) throw GeometryError("trace expects an endomorphism");
  Scalar s;
  for (int i = 0; i < endo.dim(); ++i) s += endo.at({i, i});
  return s;
}

Scalar evaluate(const TensorField& t, const TensorField& x, const TensorField& y) {
  require_covariant(t, "evaluate");
  if (t.down() != 2) throw GeometryError("evaluate expects a (0,2) tensor");
  require_vector(x, "evaluate");
  require_vector(y, "evaluate");
  Scalar s;
  const int n = t.dim();
  for (int a = 0; a < n; ++a) {
    if (x[static_cast<std::size_t>(a)].is_zero()) continue;
    for (int b = 0; b < n; ++b)
      if (!y[static_cast<std::size_t>(b)].is_zero())
        s += t.at({a, b}) * x[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(b)];
  }
  return s;
}

Scalar metric_pairing(const TensorField& x, const TensorField& y) {
  require_same_host(x, y);
  return evaluate(TensorField::metric(x.host()), x, y);
}

TensorField precompose(const TensorField& b, const TensorField& endo, bool second) {
  require_same_host(b, endo);
  if (b.up() != 0 || b.down() != 2 || endo.up() != 1 || endo.down() != 1)
    throw GeometryError("precompose expects a (0,2) tensor and an endomorphism");
  const int n = b.dim();
  TensorField r(b.host(), 0, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Scalar s;
      for (int m = 0; m < n; ++m) s += second ? b.at({i, m}) * endo.at({m, j}) : b.at({m, j}) * endo.at({m, i});
      r.at({i, j}) = s;
    }
  return r;
}

TensorField pullback_form(const TensorField& alpha, const TensorField& endo) {
  require_same_host(alpha, endo);
  const int n = alpha.dim();
  TensorField r(alpha.host(), 0, 1, true);
  for (int b = 0; b < n; ++b) {
    Scalar s;
    for (int m = 0; m < n; ++m) s += alpha[static_cast<std::size_t>(m)] * endo.at({m, b});
    r[static_cast<std::size_t>(b)] = s;
  }
  return r;
}

TensorField transpose(const TensorField& t) {
  if (t.rank() != 2) throw GeometryError("transpose expects a rank-2 tensor");
  TensorField r = t;
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) r.at({i, j}) = t.at({j, i});
  return r;
}

// ---------------------------------------------------------------- exterior calculus

TensorField wedge(const TensorField& w, const TensorField& v) {
  require_same_host(w, v);
  require_covariant(w, "wedge");
  require_covariant(v, "wedge");
  const int p = w.down(), q = v.down();
  if (p + q > w.dim()) throw GeometryError("wedge degree exceeds dimension");
  const auto shuffles = combinations(p + q, p);
  return form_from_increasing(w.host(), p + q, Exec::Serial, [&](const std::vector<int>& idx) {
    Scalar s;
    for (const auto& first : shuffles) {
      std::vector<int> wi, vi;
      int sign_exp = 0;
      std::size_t fpos = 0;
      for (int pos = 0; pos < p + q; ++pos) {
        if (fpos < first.size() && first[fpos] == pos) {
          sign_exp += pos - static_cast<int>(fpos);
          wi.push_back(idx[static_cast<std::size_t>(pos)]);
          ++fpos;
        } else {
          vi.push_back(idx[static_cast<std::size_t>(pos)]);
        }
      }
      const Scalar& a = w.at(wi);
      if (a.is_zero()) continue;
      const Scalar& b = v.at(vi);
      if (b.is_zero()) continue;
      if (sign_exp % 2) s -= a * b;
      else s += a * b;
    }
    return s;
  });
}

TensorField interior(const TensorField& x, const TensorField& w) {
  require_same_host(x, w);
  require_vector(x, "interior");
  require_covariant(w, "interior");
  if (w.down() == 0) throw GeometryError("interior product of a function");
  const int n = w.dim();
  TensorField r(w.host(), 0, w.down() - 1, w.is_form());
  const std::size_t stride = r.size();
  for (std::size_t f = 0; f < stride; ++f) {
    Scalar s;
    for (int a = 0; a < n; ++a) {
      const Scalar& xa = x[static_cast<std::size_t>(a)];
      if (!xa.is_zero()) s += xa * w[static_cast<std::size_t>(a) * stride + f];
    }
    r[f] = s;
  }
  return r;
}

TensorField sharp(const TensorField& alpha) {
  if (alpha.up() != 0 || alpha.down() != 1) throw GeometryError("sharp expects a 1-form");
  const auto& m = *alpha.host();
  TensorField r(alpha.host(), 1, 0);
  for (int a = 0; a < m.dim(); ++a) {
    Scalar s;
    for (int b = 0; b < m.dim(); ++b)
      if (!m.ginv(a, b).is_zero()) s += m.ginv(a, b) * alpha[static_cast<std::size_t>(b)];
    r[static_cast<std::size_t>(a)] = s;
  }
  return r;
}

TensorField flat(const TensorField& x) {
  require_vector(x, "flat");
  const auto& m = *x.host();
  TensorField r(x.host(), 0, 1, true);
  for (int a = 0; a < m.dim(); ++a) {
    Scalar s;
    for (int b = 0; b < m.dim(); ++b)
      if (!m.g(a, b).is_zero()) s += m.g(a, b) * x[static_cast<std::size_t>(b)];
    r[static_cast<std::size_t>(a)] = s;
  }
  return r;
}

TensorField raise_all(const TensorField& t) {
  require_covariant(t, "raise_all");
  const auto& m = *t.host();
  const int n = m.dim(), q = t.down();
  std::vector<Scalar> cur = t.components();
  for (int pos = 0; pos < q; ++pos) {
    const std::size_t stride = ipow(n, q - 1 - pos);
    std::vector<Scalar> next(cur.size());
    for (std::size_t f = 0; f < cur.size(); ++f) {
      const int i = static_cast<int>((f / stride) % static_cast<std::size_t>(n));
      const std::size_t base = f - static_cast<std::size_t>(i) * stride;
      Scalar s;
      for (int k = 0; k < n; ++k) {
        const Scalar& gi = m.ginv(i, k);
        if (gi.is_zero()) continue;
        const Scalar& v = cur[base + static_cast<std::size_t>(k) * stride];
        if (!v.is_zero()) s += gi * v;
      }
      next[f] = std::move(s);
    }
    cur = std::move(next);
  }
  return TensorField(t.host(), q, 0, std::move(cur));
}

TensorField hodge(const TensorField& w, Exec exec) {
  require_covariant(w, "hodge");
  const auto& host = w.host();
  const int n = host->dim(), p = w.down();
  const TensorField up = raise_all(w);
  const auto sources = combinations(n, p);
  const Scalar& vol = host->volume_factor();
  return form_from_increasing(host, n - p, exec, [&](const std::vector<int>& J) {
    Scalar s;
    for (const auto& I : sources) {
      const Scalar& wi = up.at(I);
      if (wi.is_zero()) continue;
      std::vector<int> all = I;
      all.insert(all.end(), J.begin(), J.end());
      const int sign = permutation_sign(all);
      if (sign == 0) continue;
      if (sign > 0) s += wi;
      else s -= wi;
    }
    return s * vol;
  });
}

TensorField ext_d(const TensorField& w, Exec exec) {
  require_covariant(w, "ext_d");
  const auto& host = w.host();
  const auto& m = *host;
  const int n = m.dim(), p = w.down();
  if (p + 1 > n) return TensorField(host, 0, p + 1, true);
  return form_from_increasing(host, p + 1, exec, [&](const std::vector<int>& idx) {
    Scalar s;
    for (int k = 0; k <= p; ++k) {
      std::vector<int> rest;
      for (int r = 0; r <= p; ++r)
        if (r != k) rest.push_back(idx[static_cast<std::size_t>(r)]);
      Scalar term = m.derive(idx[static_cast<std::size_t>(k)], w.at(rest));
      if (k % 2) s -= term;
      else s += term;
    }
    for (int k = 0; k <= p; ++k)
      for (int l = k + 1; l <= p; ++l) {
        std::vector<int> rest;
        for (int r = 0; r <= p; ++r)
          if (r != k && r != l) rest.push_back(idx[static_cast<std::size_t>(r)]);
        Scalar term;
        for (int c = 0; c < n; ++c) {
          const Scalar& ck = m.c(c, idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(l)]);
          if (ck.is_zero()) continue;
          std::vector<int> arg{c};
          arg.insert(arg.end(), rest.begin(), rest.end());
          term += ck * w.at(arg);
        }
        if ((k + l) % 2) s -= term;
        else s += term;
      }
    return s;
  });
}

Scalar full_contraction(const TensorField& a, const TensorField& b) {
  require_same_host(a, b);
  require_covariant(a, "full_contraction");
  require_covariant(b, "full_contraction");
  if (a.down() != b.down()) throw GeometryError("contraction of tensors of different rank");
  const TensorField bu = raise_all(b);
  Scalar s;
  for (std::size_t f = 0; f < a.size(); ++f)
    if (!a[f].is_zero() && !bu[f].is_zero()) s += a[f] * bu[f];
  return s;
}

Scalar form_inner(const TensorField& w, const TensorField& v) {
  Rational fact = 1;
  for (int k = 2; k <= w.down(); ++k) fact *= k;
  return full_contraction(w, v) * Scalar(Rational(1 / fact));
}

// ---------------------------------------------------------------- vector fields

Scalar directional(const TensorField& x, const Scalar& f) {
  require_vector(x, "directional");
  Scalar s;
  for (int i = 0; i < x.dim(); ++i) {
    const Scalar& xi = x[static_cast<std::size_t>(i)];
    if (!xi.is_zero()) s += xi * x.host()->derive(i, f);
  }
  return s;
}

TensorField lie_bracket(const TensorField& x, const TensorField& y) {
  require_same_host(x, y);
  require_vector(x, "lie_bracket");
  require_vector(y, "lie_bracket");
  const auto& m = *x.host();
  const int n = m.dim();
  TensorField r(x.host(), 1, 0);
  for (int k = 0; k < n; ++k) {
    Scalar s = directional(x, y[static_cast<std::size_t>(k)]) - directional(y, x[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n; ++i) {
      if (x[static_cast<std::size_t>(i)].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        const Scalar& c = m.c(k, i, j);
        if (c.is_zero() || y[static_cast<std::size_t>(j)].is_zero()) continue;
        s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * c;
      }
    }
    r[static_cast<std::size_t>(k)] = s;
  }
  return r;
}

TensorField lie_derivative(const TensorField& x, const TensorField& t, Exec exec) {
  require_same_host(x, t);
  require_vector(x, "lie_derivative");
  const auto& m = *x.host();
  const int n = m.dim();
  // L_X e_j = B^k_j e_k.
  std::vector<Scalar> B(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      Scalar s = -m.derive(j, x[static_cast<std::size_t>(k)]);
      for (int i = 0; i < n; ++i)
        if (!x[static_cast<std::size_t>(i)].is_zero()) s += x[static_cast<std::size_t>(i)] * m.c(k, i, j);
      B[static_cast<std::size_t>(k * n + j)] = s;
    }
  auto b = [&](int k, int j) -> const Scalar& { return B[static_cast<std::size_t>(k * n + j)]; };
  TensorField r(t.host(), t.up(), t.down(), t.is_form());
  parallel_for(t.size(), exec, [&](std::size_t f) {
    const auto idx = t.unflatten(f);
    Scalar s = directional(x, t[f]);
    for (int slot = 0; slot < t.rank(); ++slot) {
      auto other = idx;
      const bool upper = slot < t.up();
      for (int mm = 0; mm < n; ++mm) {
        const Scalar& coeff = upper ? b(idx[static_cast<std::size_t>(slot)], mm) : b(mm, idx[static_cast<std::size_t>(slot)]);
        if (coeff.is_zero()) continue;
        other[static_cast<std::size_t>(slot)] = mm;
        const Scalar& v = t.at(other);
        if (v.is_zero()) continue;
        if (upper) s += coeff * v;
        else s -= v * coeff;
      }
    }
    r[f] = std::move(s);
  });
  return r;
}

// ---------------------------------------------------------------- products

ManifoldPtr product_manifold(const ManifoldPtr& n, const ManifoldPtr& x, bool require_signatures) {
  if (require_signatures && (n->signature() != -1 || x->signature() != 1))
    throw GeometryError("product expects a Lorentzian first factor and a Riemannian second factor");
  const int a = n->dim(), b = x->dim(), d = a + b;
  FrameManifold::Data data;
  data.name = n->name() + "x" + x->name();
  std::set<std::string> seen;
  for (const auto& l : n->labels()) seen.insert(l);
  bool clash = false;
  for (const auto& l : x->labels()) clash = clash || seen.count(l);
  for (const auto& l : n->labels()) data.labels.push_back(clash ? l + "_" + n->name() : l);
  for (const auto& l : x->labels()) data.labels.push_back(clash ? l + "_" + x->name() : l);
  const auto D = static_cast<std::size_t>(d);
  data.structure.assign(D * D * D, Scalar());
  data.metric.assign(D * D, Scalar());
  auto place = [&](const FrameManifold& f, int off) {
    const int m = f.dim();
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
          data.structure[static_cast<std::size_t>(((k + off) * d + i + off) * d + j + off)] = f.c(k, i, j);
        data.metric[static_cast<std::size_t>((k + off) * d + i + off)] = f.g(k, i);
      }
    for (int i = 0; i < m; ++i) data.coordinates.push_back(f.coordinate(i));
  };
  place(*n, 0);
  place(*x, a);
  std::set<std::string> coords;
  for (const auto& c : data.coordinates)
    if (!c.empty() && !coords.insert(c).second) throw GeometryError("factors share coordinate '" + c + "'");
  data.orientation = n->orientation() * x->orientation();
  data.signature = n->signature() * x->signature();
  data.assumptions = n->assumptions().merged(x->assumptions());
  data.factors = {{n, 0}, {x, a}};
  (void)b;
  return FrameManifold::make(std::move(data));
}

TensorField promote(const TensorField& t, const ManifoldPtr& product) {
  const FrameFactor* factor = nullptr;
  for (const auto& f : product->factors())
    if (f.manifold == t.host()) factor = &f;
  if (!factor) throw GeometryError("tensor does not live on a factor of " + product->name());
  TensorField r(product, t.up(), t.down(), t.is_form());
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    auto idx = t.unflatten(f);
    for (auto& i : idx) i += factor->offset;
    r.at(idx) = t[f];
  }
  return r;
}

TensorField rehost(const TensorField& t, const ManifoldPtr& host) {
  if (host->dim() != t.dim()) throw GeometryError("rehost between manifolds of different dimension");
  return TensorField(host, t.up(), t.down(), t.components(), t.is_form());
}

ManifoldPtr substitute_parameter(const ManifoldPtr& m, const std::string& param, const Scalar& value) {
  FrameManifold::Data d = m->data();
  for (auto& c : d.structure) c = c.substitute(param, value);
  for (auto& g : d.metric) g = g.substitute(param, value);
  d.assumptions.erase(param);
  std::vector<FrameFactor> factors;
  for (const auto& f : d.factors) factors.push_back({substitute_parameter(f.manifold, param, value), f.offset});
  d.factors = std::move(factors);
  return FrameManifold::make(std::move(d));
}

// ---------------------------------------------------------------- zero tests

TensorVerdict zero_verdict(const TensorField& t, const Assumptions& a, std::uint64_t seed) {
  TensorVerdict out;
  std::map<std::string, ZeroVerdict> seen;
  std::optional<TensorVerdict> unknown;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (t[f].is_zero()) continue;
    const std::string key = t[f].to_string();
    if (auto it = seen.find(key); it != seen.end() && it->second != ZeroVerdict::NonZero) continue;
    ZeroTest test = is_zero(t[f], a, seed);
    seen[key] = test.verdict;
    if (test.verdict == ZeroVerdict::NonZero) {
      out.verdict = ZeroVerdict::NonZero;
      out.index = t.unflatten(f);
      out.value = t[f];
      out.test = std::move(test);
      return out;
    }
    if (!unknown) {
      TensorVerdict u;
      u.verdict = ZeroVerdict::Unknown;
      u.index = t.unflatten(f);
      u.value = t[f];
      u.test = std::move(test);
      unknown = std::move(u);
    }
  }
  return unknown ? *unknown : out;
}

}  // namespace epc
