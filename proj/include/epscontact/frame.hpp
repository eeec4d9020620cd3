#pragma once

// Manifolds presented by a global frame, and tensor fields over them.
//
// Conventions:
//   [e_i, e_j] = c^k_ij e_k
//   components are indexed upper indices first: T^{a1..ap}_{b1..bq}
//   an endomorphism T is stored as T^a_b with T(e_b) = T^a_b e_a
//   forms are totally antisymmetric covariant tensors; wedge uses the shuffle
//   convention, so (e^1 ^ e^2)(e_1, e_2) = 1
//   d follows the invariant formula without normalizing factor
//   nu = sigma * sqrt|det g| e^1 ^ ... ^ e^n
//   <w, v>_p = (1/p!) w_I v^I,   (*w)_J = (1/p!) w^I nu_IJ

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epscontact/assumptions.hpp"
#include "epscontact/exec.hpp"
#include "epscontact/scalar.hpp"

namespace epc {

class FrameManifold;
using ManifoldPtr = std::shared_ptr<const FrameManifold>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FrameFactor {
  ManifoldPtr manifold;
  int offset = 0;
};

class FrameManifold {
 public:
  struct Data {
    std::string name;
    std::vector<std::string> labels;
    std::vector<Scalar> structure;  // c^k_ij at (k*n + i)*n + j
    std::vector<Scalar> metric;     // g_ij at i*n + j
    int orientation = 1;
    int signature = 1;  // +1 Riemannian, -1 Lorentzian
    std::vector<std::string> coordinates;  // e_i = d/d(coordinates[i]) when nonempty
    Assumptions assumptions;
    std::vector<FrameFactor> factors;
  };

  static ManifoldPtr make(Data d);

  int dim() const { return n_; }
  const std::string& name() const { return d_.name; }
  const std::vector<std::string>& labels() const { return d_.labels; }
  const Scalar& c(int k, int i, int j) const { return d_.structure[idx3(k, i, j)]; }
  const Scalar& g(int i, int j) const { return d_.metric[static_cast<std::size_t>(i * n_ + j)]; }
  const Scalar& ginv(int i, int j) const { return ginv_[static_cast<std::size_t>(i * n_ + j)]; }
  const Scalar& det() const { return det_; }
  /// sigma * sqrt|det g|, the single component of nu.
  const Scalar& volume_factor() const;
  int orientation() const { return d_.orientation; }
  int signature() const { return d_.signature; }
  const std::string& coordinate(int i) const { return d_.coordinates[static_cast<std::size_t>(i)]; }
  bool has_coordinates() const;
  const Assumptions& assumptions() const { return d_.assumptions; }
  const std::vector<FrameFactor>& factors() const { return d_.factors; }
  const Data& data() const { return d_; }

  /// e_i(f).
  Scalar derive(int i, const Scalar& f) const;
  /// First (i, j, k) where the Jacobi identity fails canonically.
  std::optional<std::vector<int>> jacobi_violation() const;
  ManifoldPtr with_orientation(int sigma) const;

  explicit FrameManifold(Data d);

 private:
  std::size_t idx3(int k, int i, int j) const { return static_cast<std::size_t>((k * n_ + i) * n_ + j); }
  Data d_;
  int n_;
  std::vector<Scalar> ginv_;
  Scalar det_;
  Scalar volume_;
  std::string volume_error_;
};

/// sqrt|s| for a single-term s with even exponents and square coefficient.
Scalar sqrt_abs(const Scalar& s);
/// Sign of a single-term scalar whose odd-power atoms are all known to be
/// positive; nullopt otherwise.
std::optional<int> definite_sign(const Scalar& s, const Assumptions& a);

/// Determinant and inverse of a square matrix of scalars (row major).
Scalar determinant(const std::vector<Scalar>& m, int n);
std::vector<Scalar> inverse_matrix(const std::vector<Scalar>& m, int n);

class TensorField {
 public:
  TensorField(ManifoldPtr host, int up, int down, bool form = false);
  TensorField(ManifoldPtr host, int up, int down, std::vector<Scalar> components, bool form = false);

  static TensorField function(ManifoldPtr host, const Scalar& f);
  static TensorField vector(ManifoldPtr host, std::vector<Scalar> comps);
  static TensorField one_form(ManifoldPtr host, std::vector<Scalar> comps);
  static TensorField basis_vector(ManifoldPtr host, int i);
  static TensorField basis_form(ManifoldPtr host, int i);
  static TensorField identity(ManifoldPtr host);
  /// The metric as a (0,2) tensor.
  static TensorField metric(ManifoldPtr host);
  static TensorField volume(ManifoldPtr host);

  const ManifoldPtr& host() const { return host_; }
  int dim() const { return host_->dim(); }
  int up() const { return up_; }
  int down() const { return down_; }
  int rank() const { return up_ + down_; }
  bool is_form() const { return form_; }
  std::size_t size() const { return comps_.size(); }
  const std::vector<Scalar>& components() const { return comps_; }

  const Scalar& operator[](std::size_t flat) const { return comps_[flat]; }
  Scalar& operator[](std::size_t flat) { return comps_[flat]; }
  const Scalar& at(const std::vector<int>& index) const { return comps_[flatten(index)]; }
  Scalar& at(const std::vector<int>& index) { return comps_[flatten(index)]; }
  std::size_t flatten(const std::vector<int>& index) const;
  std::vector<int> unflatten(std::size_t flat) const;

  bool is_zero() const;
  /// First index tuple violating total antisymmetry.
  std::optional<std::vector<int>> antisymmetry_violation() const;
  TensorField as_form() const;
  /// Applies f to every component.
  template <class F>
  TensorField map(F&& f) const {
    TensorField r = *this;
    for (auto& c : r.comps_) c = f(c);
    return r;
  }

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(const Scalar& s, TensorField t);
  TensorField operator-() const;
  friend bool operator==(const TensorField& a, const TensorField& b);

  std::string to_string() const;

 private:
  void check_compatible(const TensorField& o) const;
  ManifoldPtr host_;
  int up_, down_;
  bool form_;
  std::vector<Scalar> comps_;
};

// ---------------------------------------------------------------- algebra

/// Outer product; upper indices of a then b, then lower indices of a then b.
TensorField tensor_product(const TensorField& a, const TensorField& b);
/// a (x) b + b (x) a for covariant tensors.
TensorField symmetric_product(const TensorField& a, const TensorField& b);
/// (1,1) applied to a vector, or T(X, .) style contraction on the first
/// lower slot for general tensors.
TensorField apply(const TensorField& endo, const TensorField& x);
/// Endomorphism composition (a o b)^i_j = a^i_m b^m_j.
TensorField compose(const TensorField& a, const TensorField& b);
Scalar trace(const TensorField& endo);
/// T(X, Y) for a (0,2) tensor.
Scalar evaluate(const TensorField& t, const TensorField& x, const TensorField& y);
/// g(X, Y).
Scalar metric_pairing(const TensorField& x, const TensorField& y);
/// B(T ., .) : the (0,2) tensor (X, Y) -> B(T X, Y), or B(X, T Y) when
/// `second` is set.
TensorField precompose(const TensorField& b, const TensorField& endo, bool second = false);
/// alpha o T for a 1-form and an endomorphism.
TensorField pullback_form(const TensorField& alpha, const TensorField& endo);
TensorField transpose(const TensorField& t);

// ---------------------------------------------------------------- exterior calculus

TensorField wedge(const TensorField& w, const TensorField& v);
TensorField interior(const TensorField& x, const TensorField& w);
TensorField sharp(const TensorField& alpha);
TensorField flat(const TensorField& x);
/// Raises every lower index of a covariant tensor.
TensorField raise_all(const TensorField& t);
TensorField hodge(const TensorField& w, Exec exec = Exec::Serial);
TensorField ext_d(const TensorField& w, Exec exec = Exec::Serial);
/// (1/p!) full contraction.
Scalar form_inner(const TensorField& w, const TensorField& v);
/// Full contraction of two covariant tensors of equal rank.
Scalar full_contraction(const TensorField& a, const TensorField& b);

// ---------------------------------------------------------------- vector fields

/// X(f).
Scalar directional(const TensorField& x, const Scalar& f);
TensorField lie_bracket(const TensorField& x, const TensorField& y);
TensorField lie_derivative(const TensorField& x, const TensorField& t, Exec exec = Exec::Serial);

// ---------------------------------------------------------------- products

ManifoldPtr product_manifold(const ManifoldPtr& n, const ManifoldPtr& x, bool require_signatures = true);
/// Extends a tensor on one factor by zero.
TensorField promote(const TensorField& t, const ManifoldPtr& product);

/// Same components on another manifold of equal dimension.
TensorField rehost(const TensorField& t, const ManifoldPtr& host);
/// Substitutes a parameter value into all manifold data and drops its
/// assumptions.
ManifoldPtr substitute_parameter(const ManifoldPtr& m, const std::string& param, const Scalar& value);

// ---------------------------------------------------------------- zero tests

struct TensorVerdict {
  ZeroVerdict verdict = ZeroVerdict::Zero;
  std::vector<int> index;  // offending component
  Scalar value;
  ZeroTest test;
};

/// Zero if every component is canonically zero; NonZero if some component
/// is; Unknown otherwise.  Reports the first NonZero (else Unknown) component.
TensorVerdict zero_verdict(const TensorField& t, const Assumptions& a, std::uint64_t seed);

std::string index_label(const ManifoldPtr& host, const std::vector<int>& index);

}  // namespace epc
