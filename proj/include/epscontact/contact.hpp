#pragma once

// epsilon-contact structures on framed 3-manifolds: verification, the
// derived tensors xi, phi, h, identity suites, and the null-contact theory
// (the endomorphism J on M x R and its integrability).

#include <optional>
#include <string>
#include <vector>

#include "epscontact/curvature.hpp"
#include "epscontact/frame.hpp"

namespace epc {

struct IdentityCheck {
  std::string name;
  TensorVerdict verdict;  // of lhs - rhs
  std::optional<TensorField> lhs, rhs;
  bool passed() const { return verdict.verdict == ZeroVerdict::Zero; }
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const;
  /// Zero when every check passes, NonZero if any fails, else Unknown.
  ZeroVerdict overall() const;
  const IdentityCheck* find(const std::string& name) const;
};

struct ContactVerification;

class EpsilonContactStructure {
 public:
  const ManifoldPtr& manifold() const { return m_; }
  const TensorField& alpha() const { return alpha_; }
  int epsilon() const { return epsilon_; }
  int signature() const { return m_->signature(); }
  const TensorField& xi() const { return xi_; }
  const TensorField& phi() const { return phi_; }
  const TensorField& h() const { return h_; }
  const Assumptions& assumptions() const { return m_->assumptions(); }
  std::uint64_t seed() const { return seed_; }

 private:
  friend ContactVerification verify_epsilon_contact(const ManifoldPtr&, const TensorField&, std::uint64_t, bool);
  EpsilonContactStructure(ManifoldPtr m, TensorField alpha, int epsilon, std::uint64_t seed);
  ManifoldPtr m_;
  TensorField alpha_;
  int epsilon_;
  std::uint64_t seed_;
  TensorField xi_, phi_, h_;
};

struct ContactFailure {
  std::string equation;  // "alpha = *d alpha", "|alpha|^2 = eps", "alpha nowhere zero"
  std::string detail;
  TensorVerdict verdict;
};

struct ContactVerification {
  std::optional<EpsilonContactStructure> structure;
  std::optional<ContactFailure> failure;
  std::vector<std::string> notes;  // orientation choice etc.
  bool ok() const { return structure.has_value(); }
};

/// Checks alpha = *d alpha and |alpha|^2 = eps constant in {-1,0,1}.  With
/// `auto_orientation`, the opposite orientation is tried when the first
/// fails on the Hodge equation, and the choice is noted.
ContactVerification verify_epsilon_contact(const ManifoldPtr& m, const TensorField& alpha, std::uint64_t seed = 0,
                                           bool auto_orientation = false);

/// Substitutes a parameter value and re-verifies.
ContactVerification substitute(const EpsilonContactStructure& s, const std::string& param, const Scalar& value);

const TensorField& reeb(const EpsilonContactStructure& s);
const TensorField& phi_endo(const EpsilonContactStructure& s);
const TensorField& h_tensor(const EpsilonContactStructure& s);

IdentityReport structure_tensor_report(const EpsilonContactStructure& s);
IdentityReport derived_tensor_report(const EpsilonContactStructure& s);
/// alpha ^ d alpha = s_g alpha ^ *alpha, and i_xi d alpha = 0 when eps = 0.
IdentityReport structure_invariants(const EpsilonContactStructure& s);

struct ContactFrame {
  TensorField xi, u, phi_u;
  IdentityReport pairings;
  int height = 0;  // coefficient height of the solution found
};

class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Searches u = s * sum w_i b_i with rational w of height <= max_height and
/// s in {1, 1/m} where xi = m * (constant vector), solving
/// g(u, xi) = 1 - eps^2, g(u, u) = s_g eps.
ContactFrame find_contact_frame(const EpsilonContactStructure& s, const std::vector<TensorField>& basis = {},
                                int max_height = 8);

struct PredicateResult {
  ZeroVerdict verdict;  // Zero means the predicate holds
  TensorVerdict witness;
  std::string describe(const ManifoldPtr& host) const;
};

/// h = 0.
PredicateResult is_sasaki(const EpsilonContactStructure& s, const Assumptions& extra = {});
/// L_xi g = 0.
PredicateResult is_k_contact(const EpsilonContactStructure& s, const Assumptions& extra = {});
TensorField killing_defect(const EpsilonContactStructure& s);

class NullStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// h = mu xi (x) alpha for eps = 0.
Scalar null_mu(const EpsilonContactStructure& s);

struct ExtendedJ {
  ManifoldPtr manifold;  // M x R, last frame vector d/dtau
  TensorField j;         // (1,1)
  TensorField j_squared;
};

ExtendedJ extend_j(const EpsilonContactStructure& s);
/// Matrix of J in the frame (xi, u, phi u, d/dtau), row major.
std::vector<Scalar> j_matrix_in_frame(const ExtendedJ& j, const EpsilonContactStructure& s, const ContactFrame& f);
/// N^k_ij with N(e_i, e_j) = N^k_ij e_k.
TensorField nijenhuis(const ManifoldPtr& m, const TensorField& j);

struct RankResult {
  ZeroVerdict verdict;  // Zero: rank certified constant
  int rank = 0;
  std::string note;
};

/// Rank of an endomorphism over the function field; constant when every
/// larger minor vanishes identically and some minor of that size is
/// certified nowhere zero.
RankResult constant_rank(const TensorField& endo, const Assumptions& a, std::uint64_t seed);

struct ZeroDeformability {
  ZeroVerdict verdict;  // Zero: zero-deformable
  RankResult rank_j, rank_j2;
};
ZeroDeformability zero_deformable(const ExtendedJ& j, const Assumptions& a, std::uint64_t seed);

struct KernelInvolutivity {
  ZeroVerdict verdict;  // Zero: involutive
  std::vector<TensorField> basis;
  TensorField bracket;
  TensorVerdict witness;  // 3x3 minor of (k1, k2, [k1,k2]) that fails
};
KernelInvolutivity kernel_involutive(const ExtendedJ& j, const EpsilonContactStructure& s, const ContactFrame& f);

struct IntegrabilityReport {
  TensorVerdict nijenhuis;
  ZeroDeformability zero_deformable;
  KernelInvolutivity kernel;
  ZeroVerdict integrable;  // Zero: integrable, NonZero: not
  PredicateResult sasaki;
  bool agrees;  // integrable <=> Sasaki (Unknown never agrees)
};

ZeroVerdict is_integrable(const IntegrabilityReport& r);
IntegrabilityReport sasaki_iff_integrable_report(const EpsilonContactStructure& s, const ContactFrame& f,
                                                 const Assumptions& extra = {});

/// g(L_xi u, u); zero iff K-contact for Sasaki null structures.
Scalar saskc_criterion(const EpsilonContactStructure& s, const ContactFrame& f);

}  // namespace epc
