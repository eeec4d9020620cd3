#pragma once

// eta-Einstein certificates for epsilon-contact structures, the
// spaces Cont_{L|R}(eps, lambda^2, kappa), and the built-in catalog.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epscontact/contact.hpp"
#include "epscontact/manifest.hpp"

namespace epc {

/// Ric = (s_g/2)(lambda^2 + kappa eps) g - s_g kappa alpha (x) alpha.
struct EtaEinsteinCertificate {
  int epsilon = 0;
  int signature = 1;
  Scalar lambda2;
  Scalar kappa;
  TensorField residual;
};

struct NotEtaEinstein {
  std::string reason;
  TensorVerdict witness;
  // Least-squares fit of Ric ~ A g + B alpha (x) alpha, when solvable.
  std::optional<Scalar> fit_lambda2, fit_kappa;
};

struct Classification {
  std::optional<EtaEinsteinCertificate> certificate;
  std::optional<NotEtaEinstein> failure;
  bool ok() const { return certificate.has_value(); }
};

Classification classify(const EpsilonContactStructure& s, Exec exec = Exec::Parallel);

/// The tensor (s_g/2)(lambda^2 + kappa eps) g - s_g kappa alpha (x) alpha.
TensorField eta_einstein_ricci(const EpsilonContactStructure& s, const Scalar& lambda2, const Scalar& kappa);

struct ContSpace {
  int signature;  // +1: R, -1: L
  int epsilon;
  Scalar lambda2;
  Scalar kappa;
};

bool cont_space_membership(const EtaEinsteinCertificate& c, const ContSpace& space);

struct PairCompatibility {
  bool compatible = false;
  std::string failed;  // the hypothesis that fails
  Scalar lambda2;
  Scalar l2;  // kappa_N
};

/// (chi, alpha_N) in Cont_L(eps_N, lambda^2, l^2), (h, alpha_X) in
/// Cont_R(1, lambda^2, eps_N l^2), l^2 >= 0.
PairCompatibility compatible_pair(const EtaEinsteinCertificate& n, const EtaEinsteinCertificate& x,
                                  const Assumptions& a = {}, std::uint64_t seed = 0);

struct CatalogEntry {
  std::string name;
  Manifest manifest;
  BuiltManifest built;
  EpsilonContactStructure structure;
  std::optional<ContSpace> expected;        // expected certificate, if eta-Einstein
  std::optional<TensorField> displayed_ricci;
  std::vector<std::string> notes;
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> catalog_names();
const std::string& catalog_source(const std::string& name);
/// Builds, verifies and (where an expectation exists) classifies an entry.
CatalogEntry catalog(const std::string& name, const std::map<std::string, Rational>& params = {},
                     std::uint64_t seed = 0);

}  // namespace epc
