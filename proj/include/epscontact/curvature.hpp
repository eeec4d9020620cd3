#pragma once

// Connections on a framed manifold and their curvature.
//
//   nabla_{e_i} e_j = Gamma^k_ij e_k
//   R(e_i, e_j) e_k = R^l_kij e_l   stored with index order (l, k, i, j)
//   Ric(X, Y) = tr(Z -> R(Z, X) Y),  so Ric_jk = R^i_kij

#include <optional>

#include "epscontact/frame.hpp"

namespace epc {

struct Connection {
  ManifoldPtr host;
  std::vector<Scalar> gamma;  // Gamma^k_ij at (k*n + i)*n + j
  std::optional<TensorField> torsion_form;

  const Scalar& operator()(int k, int i, int j) const {
    const int n = host->dim();
    return gamma[static_cast<std::size_t>((k * n + i) * n + j)];
  }
};

struct CurvatureData {
  TensorField riemann;  // (1,3)
  TensorField ricci;    // (0,2), unsymmetrized
  Scalar scalar;
};

/// Koszul formula, including derivative terms on coordinate frames.
Connection levi_civita(const ManifoldPtr& m, Exec exec = Exec::Serial);
/// nabla^H = nabla^g + 1/2 g^{-1} H, whose lowered torsion is H.
Connection with_skew_torsion(const ManifoldPtr& m, const TensorField& h, Exec exec = Exec::Serial);

/// nabla_X Y.
TensorField covariant_derivative(const Connection& c, const TensorField& x, const TensorField& y);
/// nabla_X T for a general (p,q) tensor.
TensorField covariant_derivative_tensor(const Connection& c, const TensorField& x, const TensorField& t);
/// T^k_ij = Gamma^k_ij - Gamma^k_ji - c^k_ij.
TensorField torsion(const Connection& c);
/// (nabla_i g)_jk stored as (i, j, k).
TensorField metricity_residual(const Connection& c);

/// Index formula for R; kernels run over (l, k) pairs under `exec`.
CurvatureData riemann(const Connection& c, Exec exec = Exec::Parallel);
/// Reference path: R(e_i,e_j)e_k from iterated covariant derivatives.
CurvatureData riemann_reference(const Connection& c);
CurvatureData ricci_of(const Connection& c, Exec exec = Exec::Parallel);

TensorField ricci_from_riemann(const TensorField& riemann);
Scalar scalar_curvature(const TensorField& ricci);
TensorField symmetric_part(const TensorField& t);
TensorField antisymmetric_part(const TensorField& t);

/// R^l_kij + R^l_ijk + R^l_jki.
TensorField first_bianchi_residual(const TensorField& riemann);
/// (nabla_m R)^l_kij + cyclic in (m, i, j), stored as (l, k, i, j, m).
TensorField second_bianchi_residual(const Connection& c, const TensorField& riemann);

}  // namespace epc
