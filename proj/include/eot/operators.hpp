#pragma once

#include <cstdint>
#include <vector>

#include "eot/fields.hpp"

namespace eot {

// Discrete half-Hessian H: at each interior node,
//   (H psi)_aa = (psi_{+e_a} - 2 psi + psi_{-e_a}) / (2 h_a^2)
//   (H psi)_ab = (psi_{++} - psi_{+-} - psi_{-+} + psi_{--}) / (8 h_a h_b)
// Central differences; exact on quadratics, symmetric output by the
// 4-point cross stencil.
MatrixField hessian(const ScalarField& psi);
void hessian_into(const ScalarField& psi, MatrixField& out, int threads = 1);

// Exact algebraic transpose of hessian: <div2(L), psi> = <L, hessian(psi)>
// for all fields, with plain node-wise inner products (off-diagonal
// entries paired twice). Defined on every node, boundary included; this is
// the weak-form trace operator acting on matrix fields.
ScalarField div2(const MatrixField& lam);
void div2_into(const MatrixField& lam, ScalarField& out, int threads = 1);

// Upper estimate of the operator norm of hessian, from power iteration on
// the composition div2(hessian(.)) with a 1.01 safety factor.
double operator_norm_estimate(const Grid& g, int iterations = 50, std::uint64_t seed = 1);

// Rayleigh-quotient history of the power iteration (sqrt scale, no safety
// factor); nondecreasing by construction.
std::vector<double> operator_norm_history(const Grid& g, int iterations, std::uint64_t seed = 1);

}  // namespace eot
