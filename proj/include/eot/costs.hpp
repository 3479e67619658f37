#pragma once

#include <string>
#include <vector>

#include "eot/symmat.hpp"

namespace eot {

enum class CostVariant { Trace, ScaledIdentity, MaxEigen, Custom };

// Sublinear matrix cost f with dom(f) inside the PSD cone, together with
// the oracles the saddle solver needs: the support function
//   T(A) = sup { A : M  |  M PSD, f(M) = 1 },
// dual-cone membership T(A) <= 1, the proximal map of tau * f restricted
// to dom(f), and Euclidean projection onto { T <= 1 }.
//
// Variants:
//   Trace          f(M) = tr(M) on PSD          T(A) = lambda_max(A)
//   ScaledIdentity f(tI) = t, t >= 0            T(A) = tr(A)
//   MaxEigen       f(M) = lambda_max(M) on PSD  T(A) = sum of positive
//                                                      eigenvalues of A
//   Custom         f(M) = max_k G_k : M on PSD, for a user generating set
//                  {G_k}; oracles fall back to small iterative schemes.
class Cost {
public:
    static Cost trace() { return Cost(CostVariant::Trace); }
    static Cost scaled_identity() { return Cost(CostVariant::ScaledIdentity); }
    static Cost max_eigen() { return Cost(CostVariant::MaxEigen); }
    static Cost custom(std::vector<SymMat> generators);

    // "trace" | "scaled_identity" | "max_eigen" | "custom:<file>" where the
    // file holds one generator per line: d entries of the upper triangle
    // row by row (d=2: a00 a01 a11).
    static Cost parse(const std::string& name);

    CostVariant variant() const { return variant_; }
    std::string name() const;

    // f(M); +infinity outside dom(f). PSD membership uses a relative
    // tolerance of 1e-10 * ||M||.
    double value(const SymMat& m) const;

    // Support function T(A); input is used symmetrically as stored.
    double support(const SymMat& a) const;

    bool dual_feasible(const SymMat& a, double tol) const;

    // argmin over dom(f) of tau * f(L) + 0.5 * ||L - V||^2. Throws on
    // tau < 0. tau = 0 reduces to projection onto dom(f).
    SymMat prox(const SymMat& v, double tau) const;

    // argmin over { T(B) <= 1 } of ||B - A||.
    SymMat project_dual(const SymMat& a) const;

    // Projection onto dom(f); used when reporting primal values.
    SymMat project_domain(const SymMat& m) const;

    // 0 when the cost applies in any dimension; the generator dimension
    // for custom costs.
    int required_dim() const {
        return variant_ == CostVariant::Custom ? generators_[0].dim() : 0;
    }

    // Samples PSD matrices and reports the smallest f(M)/||M|| and the
    // largest f(M)/tr(M) seen. A nonpositive first value signals a custom
    // cost that is not coercive; the second is the sampled growth constant.
    std::pair<double, double> sample_growth_bounds(int samples = 200,
                                                   std::uint64_t seed = 7) const;

    const std::vector<SymMat>& generators() const { return generators_; }

private:
    explicit Cost(CostVariant v) : variant_(v) {}

    CostVariant variant_;
    std::vector<SymMat> generators_;
};

std::vector<SymMat> read_generators(const std::string& path);

}  // namespace eot
