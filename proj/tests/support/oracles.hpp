#pragma once

// Independent oracles shared by the unit tests and the acceptance run.  None
// of these call the library routine they are used to check.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epscontact/frame.hpp"

namespace epc::oracle {

/// Constant-coefficient frame on R^n (abelian), diagonal or full metric.
ManifoldPtr flat(const std::vector<Rational>& diag, const std::vector<Scalar>& metric = {});

std::vector<std::vector<int>> increasing(int n, int k);
int perm_sign(std::vector<int> p);
/// Sign of an index tuple relative to its sorted order; 0 if an index repeats.
int tuple_sign(const std::vector<int>& idx);
std::vector<int> digits(std::size_t flat, int n, int k);
std::size_t ipow(int n, int k);

TensorField basis_p_form(const ManifoldPtr& m, const std::vector<int>& I);

/// (*w)_J = 1/p! w^I nu_{IJ} with nu from the Levi-Civita symbol.
TensorField hodge_oracle(const TensorField& w);

/// Dimensions 3, 4, 6 in both signatures plus a non-diagonal 4D metric.
std::vector<ManifoldPtr> hodge_manifolds();

/// Left-invariant metric g = L L^T on the Heisenberg group, [x1, x2] = x3,
/// L lower triangular with seeded rational entries.
ManifoldPtr heisenberg(std::uint64_t seed);

/// Gamma^k_ij from torsion-freeness and metricity by exact Gaussian
/// elimination (constant data only); nullopt if the system is singular.
std::optional<std::vector<Rational>> gamma_linear_solve(const ManifoldPtr& m);

struct BindingComparison {
  int used = 0;        // bindings where both sides evaluated
  int mismatches = 0;
  std::string first_mismatch;
};

/// Evaluates both sides through the expression-tree evaluator at seeded
/// admissible bindings.
BindingComparison compare_at_bindings(const TensorField& lhs, const TensorField& rhs, const Assumptions& a,
                                      std::uint64_t seed, int count = 10);

}  // namespace epc::oracle
