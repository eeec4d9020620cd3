#pragma once

// Six-dimensional configurations (g, H) on products N x X of a Lorentzian
// and a Riemannian epsilon-contact 3-manifold, and their equations of motion:
//
//   Ric = 1/4 H o H,   dH = 0,   d *H = 0,   |H|^2 = 0
//
// with (rho o sigma)(X, Y) = sum_{a,b} rho(X, e_a, e_b) sigma(Y, e^a, e^b).

#include <optional>
#include <string>

#include "epscontact/eta_einstein.hpp"

namespace epc {

TensorField circ(const TensorField& rho, const TensorField& sigma);

/// Wedge with the multinomial weight (p+q)!/(p! q!) on top of the shuffle
/// convention; used only to replay the alternate bookkeeping.
TensorField wedge_multinomial(const TensorField& w, const TensorField& v);

/// The four flux building blocks, promoted to the product.
struct FluxTerms {
  TensorField vol_n;        // nu_chi
  TensorField star_an_ax;   // (*_chi alpha_N) ^ alpha_X
  TensorField an_star_ax;   // alpha_N ^ (*_h alpha_X)
  TensorField vol_x;        // nu_h
};

/// H = lambda nu_chi + c l (*alpha_N) ^ alpha_X + c l alpha_N ^ *alpha_X + lambda nu_h.
TensorField flux(const FluxTerms& t, const Scalar& lambda, const Scalar& l, const Scalar& c);

class SugraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SupergravityConfig {
  ManifoldPtr manifold;
  TensorField metric;
  TensorField h;
  Scalar lambda;
  std::string l_symbol = "l";
  std::optional<Scalar> l_squared;  // l^2 is replaced by this everywhere
  Rational c = 1;
  Assumptions assumptions;
  std::optional<EpsilonContactStructure> n, x;
  std::optional<FluxTerms> terms;

  Scalar reduce(const Scalar& s) const;
  TensorField reduce(const TensorField& t) const;
};

/// A bare configuration (no product structure); used for flat fixtures.
SupergravityConfig make_config(const ManifoldPtr& m, const TensorField& h);

struct Calibration {
  Rational c;
  std::vector<int> component;  // where the quadratic equation was read off
  Scalar quadratic, linear, constant;
};

/// The unique c > 0 making the Einstein equation hold identically.
Calibration calibrate_flux(const EpsilonContactStructure& n, const EpsilonContactStructure& x, const Scalar& lambda,
                           Exec exec = Exec::Parallel);

/// Requires compatible certificates with lambda^2 matching; l^2 = kappa_N.
/// `c` defaults to the calibrated coefficient.
SupergravityConfig build_solution(const EpsilonContactStructure& n, const EpsilonContactStructure& x,
                                  const Scalar& lambda, std::optional<Rational> c = std::nullopt,
                                  Exec exec = Exec::Parallel);

struct EomCheck {
  std::string name;
  TensorVerdict verdict;
  TensorField residual;
};

struct EomReport {
  EomCheck einstein, closed, coclosed, isotropic;
  Scalar norm_hodge;        // coefficient of H ^ *H against nu
  Scalar norm_contraction;  // (1/3!) H_abc H^abc
  TensorVerdict norm_contraction_verdict;
  bool all_zero() const;
  std::vector<const EomCheck*> checks() const { return {&einstein, &closed, &coclosed, &isotropic}; }
};

EomReport verify_eom(const SupergravityConfig& cfg, Exec exec = Exec::Parallel);

struct TorsionReport {
  TensorVerdict ricci;          // full Ric of the skew-torsion connection
  TensorVerdict antisymmetric;  // its antisymmetric part
  ZeroVerdict isotropic, closed, coclosed;
  bool flat() const;
};

TorsionReport torsion_ricci_flat(const SupergravityConfig& cfg, const EomReport& eom, Exec exec = Exec::Parallel);

/// *H against its expected block form -lambda nu_h + c l alpha_N ^ *alpha_X + c l (*alpha_N) ^ alpha_X - lambda nu_chi.
TensorField star_block_residual(const SupergravityConfig& cfg);

struct AlternateBookkeeping {
  Scalar circ_factor;   // (alpha_N ^' *alpha_X) o (same) on TN x TN, over alpha_N (x) alpha_N
  bool flux_agrees;     // the l/3 flux with ^' equals the calibrated flux
};

/// Replays the multinomial-weight wedge with coefficient l/3.
AlternateBookkeeping alternate_bookkeeping(const SupergravityConfig& cfg);

}  // namespace epc
